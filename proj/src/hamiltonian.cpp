#include "afc/hamiltonian.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace afc {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
    const auto n = static_cast<Eigen::Index>(dim);
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

void require_compatible(const CombSpec& comb, const BasisTable& basis) {
    if (!basis.compatible_with(comb)) {
        throw ValidationError(fmt::format(
            "basis built for m={}, N'={} does not match comb with m={}, N'={}", basis.teeth(),
            basis.n_prime(), comb.teeth(), comb.n_prime()));
    }
}

} // namespace

SparseMatrix assemble_hamiltonian(const CombSpec& comb, const BasisTable& basis, Frame frame) {
    require_compatible(comb, basis);

    const int teeth = comb.teeth();
    const double np = comb.n_prime();
    const double carrier = frame == Frame::lab ? mhz_to_rad_per_ns(comb.nu_c_mhz()) : 0.0;

    std::vector<double> detuning(static_cast<std::size_t>(teeth));
    std::vector<double> coupling(static_cast<std::size_t>(teeth));
    for (int t = 0; t < teeth; ++t) {
        detuning[static_cast<std::size_t>(t)] = mhz_to_rad_per_ns(comb.detuning_mhz(t));
        coupling[static_cast<std::size_t>(t)] =
            mhz_to_rad_per_ns(comb.couplings_mhz()[static_cast<std::size_t>(t)]) / std::sqrt(np);
    }

    std::vector<Triplet> triplets;
    triplets.reserve(basis.size() * static_cast<std::size_t>(2 * teeth + 1));
    std::vector<std::uint8_t> target;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto occ = basis.state(i);
        const int n = occ[0];

        double diag = carrier * n;
        for (int t = 0; t < teeth; ++t) {
            const int q = occ[static_cast<std::size_t>(t) + 1];
            diag += (carrier + detuning[static_cast<std::size_t>(t)]) * q;
        }
        if (diag != 0.0) {
            triplets.emplace_back(i, i, diag);
        }

        // J+_mu a: moves one photon into tooth mu. Emit it together with its
        // Hermitian partner J-_mu a^dag so the assembled matrix is exactly symmetric.
        if (n == 0) {
            continue;
        }
        for (int t = 0; t < teeth; ++t) {
            const int q = occ[static_cast<std::size_t>(t) + 1];
            const double g = coupling[static_cast<std::size_t>(t)];
            if (q >= basis.n_prime() || g == 0.0) {
                continue;
            }
            target.assign(occ.begin(), occ.end());
            target[0] = static_cast<std::uint8_t>(n - 1);
            target[static_cast<std::size_t>(t) + 1] = static_cast<std::uint8_t>(q + 1);
            const auto j = basis.find(target);
            if (!j) {
                continue;
            }
            const double element = g * std::sqrt(static_cast<double>(n)) *
                                   std::sqrt(static_cast<double>((q + 1) * (basis.n_prime() - q)));
            triplets.emplace_back(*j, i, element);
            triplets.emplace_back(i, *j, element);
        }
    }
    return from_triplets(basis.size(), triplets);
}

SparseMatrix excitation_number(const BasisTable& basis) {
    std::vector<Triplet> triplets;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (const int k = basis.excitation(i); k != 0) {
            triplets.emplace_back(i, i, static_cast<double>(k));
        }
    }
    return from_triplets(basis.size(), triplets);
}

SparseMatrix photon_number_operator(const BasisTable& basis) {
    std::vector<Triplet> triplets;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (const int n = basis.photons(i); n != 0) {
            triplets.emplace_back(i, i, static_cast<double>(n));
        }
    }
    return from_triplets(basis.size(), triplets);
}

std::vector<JumpOperator> jump_operators(const CombSpec& comb, const BasisTable& basis) {
    require_compatible(comb, basis);
    const int teeth = comb.teeth();
    const int np = comb.n_prime();
    std::vector<JumpOperator> jumps;
    jumps.reserve(static_cast<std::size_t>(2 * teeth + 1));

    std::vector<std::uint8_t> target;
    {
        std::vector<Triplet> triplets;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto occ = basis.state(i);
            if (occ[0] == 0) {
                continue;
            }
            target.assign(occ.begin(), occ.end());
            --target[0];
            if (const auto j = basis.find(target)) {
                triplets.emplace_back(*j, i, std::sqrt(static_cast<double>(occ[0])));
            }
        }
        jumps.push_back({from_triplets(basis.size(), triplets), JumpKind::cavity_decay, -1});
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(np));
    for (int t = 0; t < teeth; ++t) {
        const auto slot = static_cast<std::size_t>(t) + 1;
        std::vector<Triplet> lowering;
        std::vector<Triplet> dephasing;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto occ = basis.state(i);
            const int q = occ[slot];
            const double mz = -0.5 * np + q;
            if (mz != 0.0) {
                dephasing.emplace_back(i, i, mz);
            }
            if (q == 0) {
                continue;
            }
            target.assign(occ.begin(), occ.end());
            --target[slot];
            if (const auto j = basis.find(target)) {
                // J-|q> = sqrt(q (N' - q + 1)) |q - 1>
                lowering.emplace_back(*j, i, scale * std::sqrt(static_cast<double>(q * (np - q + 1))));
            }
        }
        jumps.push_back({from_triplets(basis.size(), lowering), JumpKind::spin_decay, t});
        jumps.push_back({from_triplets(basis.size(), dephasing), JumpKind::spin_dephasing, t});
    }
    return jumps;
}

double hermiticity_defect(const SparseMatrix& a) {
    const SparseMatrix diff = a - SparseMatrix(a.adjoint());
    double scale = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            scale = std::max(scale, std::abs(it.value()));
        }
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst / scale;
}

void write_coordinate_list(std::ostream& os, const SparseMatrix& a) {
    for (int r = 0; r < a.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
            fmt::print(os, "{} {} {:.12g} {:.12g}\n", it.row(), it.col(), it.value().real(),
                       it.value().imag());
        }
    }
}

} // namespace afc
