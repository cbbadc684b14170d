#include "afc/lindblad.hpp"

#include <cmath>

#include <fmt/format.h>

#include "afc/integrator.hpp"

namespace afc {

std::vector<Dissipator> make_dissipators(const std::vector<JumpOperator>& jumps, const LossRates& losses,
                                         DephasingConvention convention) {
    losses.validate();
    const double dephasing_factor = convention == DephasingConvention::paper ? 4.0 : 2.0;
    std::vector<Dissipator> out;
    for (const JumpOperator& j : jumps) {
        double rate = 0.0;
        switch (j.kind) {
        case JumpKind::cavity_decay:
            rate = mhz_to_rad_per_ns(losses.kappa_mhz);
            break;
        case JumpKind::spin_decay:
            rate = mhz_to_rad_per_ns(losses.gamma_h_mhz);
            break;
        case JumpKind::spin_dephasing:
            rate = dephasing_factor * mhz_to_rad_per_ns(losses.gamma_p_mhz);
            break;
        }
        if (rate > 0.0) {
            out.push_back({j.op, rate});
        }
    }
    return out;
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Appends scale * (A (x) B) for sparse A, B of dimension d.
void append_kron(std::vector<Triplet>& out, const SparseMatrix& a, const SparseMatrix& b, Complex scale) {
    const Eigen::Index d = b.rows();
    for (Eigen::Index ar = 0; ar < a.outerSize(); ++ar) {
        for (SparseMatrix::InnerIterator ia(a, ar); ia; ++ia) {
            for (Eigen::Index br = 0; br < b.outerSize(); ++br) {
                for (SparseMatrix::InnerIterator ib(b, br); ib; ++ib) {
                    out.emplace_back(ia.row() * d + ib.row(), ia.col() * d + ib.col(),
                                     scale * ia.value() * ib.value());
                }
            }
        }
    }
}

SparseMatrix identity(Eigen::Index d) {
    SparseMatrix id(d, d);
    id.setIdentity();
    return id;
}

} // namespace

SparseMatrix build_liouvillian(const SparseMatrix& hamiltonian, std::span<const Dissipator> dissipators,
                               std::size_t max_dim) {
    const Eigen::Index d = hamiltonian.rows();
    if (static_cast<std::size_t>(d) > max_dim) {
        throw ValidationError(fmt::format(
            "dense Lindblad limited to {} basis states, system has {}; use the trajectory method", max_dim, d));
    }
    const SparseMatrix id = identity(d);
    const Complex minus_i(0.0, -1.0);

    std::vector<Triplet> triplets;
    append_kron(triplets, hamiltonian, id, minus_i);
    append_kron(triplets, id, SparseMatrix(hamiltonian.transpose()), -minus_i);
    for (const Dissipator& diss : dissipators) {
        if (diss.op.rows() != d) {
            throw ValidationError("jump operator dimension does not match the hamiltonian");
        }
        const SparseMatrix conj = diss.op.conjugate();
        const SparseMatrix xdx = diss.op.adjoint() * diss.op;
        const SparseMatrix xtxc = SparseMatrix(diss.op.transpose()) * conj;
        append_kron(triplets, diss.op, conj, diss.rate);
        append_kron(triplets, xdx, id, -0.5 * diss.rate);
        append_kron(triplets, id, xtxc, -0.5 * diss.rate);
    }
    SparseMatrix l(d * d, d * d);
    l.setFromTriplets(triplets.begin(), triplets.end());
    l.prune(Complex(0.0), 0.0);
    l.makeCompressed();
    return l;
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    const Eigen::Index d = rho.rows();
    Eigen::VectorXcd v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            v[i * d + j] = rho(i, j);
        }
    }
    return v;
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim) {
    if (v.size() != dim * dim) {
        throw ValidationError("vectorized density matrix has the wrong length");
    }
    Eigen::MatrixXcd rho(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            rho(i, j) = v[i * dim + j];
        }
    }
    return rho;
}

namespace {

constexpr double kTraceAbort = 1e-6;

template <class Observer>
void propagate_lindblad(const SparseMatrix& liouvillian, const Eigen::MatrixXcd& rho0,
                        std::span<const double> t_grid, const EvolutionOptions& options, Observer&& observer) {
    validate_time_grid(t_grid);
    const Eigen::Index d = rho0.rows();
    if (rho0.cols() != d || liouvillian.rows() != d * d) {
        throw ValidationError(fmt::format("rho0 is {}x{}, Liouvillian acts on dimension {}", rho0.rows(),
                                          rho0.cols(), liouvillian.rows()));
    }
    DormandPrince45 integrator(
        [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { dy.noalias() = liouvillian * y; },
        {options.rtol, options.atol});
    integrator.reset(0.0, vectorize(rho0));

    Eigen::VectorXcd snapshot;
    const auto emit = [&](std::size_t i, const Eigen::VectorXcd& v) {
        Eigen::MatrixXcd rho = unvectorize(v, d);
        const double drift = std::abs(rho.trace() - Complex(1.0));
        if (drift > kTraceAbort) {
            throw NumericalError(fmt::format("trace drift {:.3g} at t = {:.6g} ns exceeds {:.0e}", drift,
                                             t_grid[i], kTraceAbort));
        }
        rho = 0.5 * (rho + rho.adjoint()).eval();
        observer(i, drift, rho);
    };

    std::size_t next = 0;
    while (next < t_grid.size() && t_grid[next] == 0.0) {
        emit(next++, integrator.y());
    }
    while (next < t_grid.size()) {
        integrator.step(t_grid.back());
        while (next < t_grid.size() && t_grid[next] <= integrator.t()) {
            if (t_grid[next] == integrator.t()) {
                emit(next, integrator.y());
            } else {
                integrator.interpolate(t_grid[next], snapshot);
                emit(next, snapshot);
            }
            ++next;
        }
    }
}

} // namespace

Trajectory evolve_lindblad_dense(const SparseMatrix& liouvillian, const BasisTable& basis,
                                 const Eigen::MatrixXcd& rho0, std::span<const double> t_grid,
                                 const EvolutionOptions& options) {
    if (static_cast<std::size_t>(rho0.rows()) != basis.size()) {
        throw ValidationError("rho0 does not match the basis");
    }
    const auto diag = diagnose(rho0);
    if (diag.trace_error > 1e-8 || diag.hermiticity_error > 1e-10 || diag.min_eigenvalue < -1e-8) {
        throw ValidationError("rho0 must be a Hermitian, positive, trace-one matrix");
    }
    const CavityReducer reducer(basis);
    Trajectory out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.photon_number.resize(t_grid.size());
    if (options.record_cavity_states) {
        out.cavity_states.resize(t_grid.size());
    }
    propagate_lindblad(liouvillian, rho0, t_grid, options,
                       [&](std::size_t i, double drift, const Eigen::MatrixXcd& rho) {
                           double n = 0.0;
                           for (std::size_t s = 0; s < basis.size(); ++s) {
                               const auto idx = static_cast<Eigen::Index>(s);
                               n += basis.photons(s) * rho(idx, idx).real();
                           }
                           out.photon_number[i] = n;
                           out.max_drift = std::max(out.max_drift, drift);
                           if (options.record_cavity_states) {
                               out.cavity_states[i] = reducer.reduce(rho);
                           }
                       });
    return out;
}

std::vector<Eigen::MatrixXcd> lindblad_snapshots(const SparseMatrix& liouvillian, const Eigen::MatrixXcd& rho0,
                                                 std::span<const double> t_grid,
                                                 const EvolutionOptions& options) {
    std::vector<Eigen::MatrixXcd> out(t_grid.size());
    propagate_lindblad(liouvillian, rho0, t_grid, options,
                       [&](std::size_t i, double, const Eigen::MatrixXcd& rho) { out[i] = rho; });
    return out;
}

} // namespace afc
