#include "afc/evolution.hpp"

#include <cmath>

#include <fmt/format.h>

#include "afc/integrator.hpp"

namespace afc {

void validate_time_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) {
        throw ValidationError("time grid is empty");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0) {
            throw ValidationError(fmt::format("time grid entry {} is negative or not finite", i));
        }
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw ValidationError("time grid must be strictly increasing");
        }
    }
}

std::vector<double> uniform_grid(double t_end, std::size_t n_points) {
    if (n_points < 2 || !(t_end > 0.0)) {
        throw ValidationError("time grid needs t_end > 0 and at least two points");
    }
    std::vector<double> grid(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = t_end * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return grid;
}

void propagate_closed(const SparseMatrix& hamiltonian, const Eigen::VectorXcd& psi0,
                      std::span<const double> t_grid, const EvolutionOptions& options,
                      const StateObserver& observer) {
    validate_time_grid(t_grid);
    if (hamiltonian.rows() != psi0.size()) {
        throw ValidationError(fmt::format("initial state has dimension {}, hamiltonian {}", psi0.size(),
                                          hamiltonian.rows()));
    }

    const Complex minus_i(0.0, -1.0);
    DormandPrince45 integrator(
        [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
            dy.noalias() = hamiltonian * y;
            dy *= minus_i;
        },
        {options.rtol, options.atol});
    integrator.reset(0.0, psi0);

    Eigen::VectorXcd snapshot(psi0.size());
    std::size_t next = 0;
    while (next < t_grid.size() && t_grid[next] == 0.0) {
        observer(next, 0.0, psi0);
        ++next;
    }
    while (next < t_grid.size()) {
        integrator.step(t_grid.back());
        while (next < t_grid.size() && t_grid[next] <= integrator.t()) {
            if (t_grid[next] == integrator.t()) {
                observer(next, t_grid[next], integrator.y());
            } else {
                integrator.interpolate(t_grid[next], snapshot);
                observer(next, t_grid[next], snapshot);
            }
            ++next;
        }
    }
}

Trajectory evolve_closed(const SparseMatrix& hamiltonian, const BasisTable& basis,
                         const Eigen::VectorXcd& psi0, std::span<const double> t_grid,
                         const EvolutionOptions& options) {
    if (static_cast<std::size_t>(psi0.size()) != basis.size()) {
        throw ValidationError("initial state does not match the basis");
    }
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
        throw ValidationError(fmt::format("initial state is not normalized (|psi|^2 = {:.12g})", psi0.squaredNorm()));
    }
    const CavityReducer reducer(basis);
    Trajectory out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.photon_number.resize(t_grid.size());
    if (options.record_cavity_states) {
        out.cavity_states.resize(t_grid.size());
    }
    propagate_closed(hamiltonian, psi0, t_grid, options,
                     [&](std::size_t i, double, const Eigen::VectorXcd& psi) {
                         out.photon_number[i] = reducer.photon_number(psi);
                         out.max_drift = std::max(out.max_drift, std::abs(psi.squaredNorm() - 1.0));
                         if (options.record_cavity_states) {
                             out.cavity_states[i] = reducer.reduce(psi);
                         }
                     });
    return out;
}

} // namespace afc
