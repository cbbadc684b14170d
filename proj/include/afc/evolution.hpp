// evolution.hpp: time-resolved observables and closed (Schrodinger) evolution

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "afc/basis.hpp"
#include "afc/cavity.hpp"
#include "afc/common.hpp"

namespace afc {

/// Snapshots of a time evolution on a strictly increasing ns grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> photon_number;
    std::vector<double> photon_number_stderr; // Monte Carlo runs only
    std::vector<CavityMatrix> cavity_states;  // empty unless requested
    double max_drift{0.0};                    // norm (closed) or trace (open) drift seen at snapshots
    std::size_t n_traj{0};
};

struct EvolutionOptions {
    double rtol{1e-9};
    double atol{1e-12};
    bool record_cavity_states{true};
};

/// Validates a snapshot grid: non-empty, finite, >= 0 and strictly increasing.
void validate_time_grid(std::span<const double> t_grid);

/// Uniform grid 0, dt, ..., t_end with n_points entries.
std::vector<double> uniform_grid(double t_end, std::size_t n_points);

using StateObserver = std::function<void(std::size_t, double, const Eigen::VectorXcd&)>;

/// Integrates i dpsi/dt = H psi from t = 0 and calls `observer` at every grid time.
void propagate_closed(const SparseMatrix& hamiltonian, const Eigen::VectorXcd& psi0,
                      std::span<const double> t_grid, const EvolutionOptions& options,
                      const StateObserver& observer);

/// Closed evolution with photon number and reduced cavity state at every grid time.
Trajectory evolve_closed(const SparseMatrix& hamiltonian, const BasisTable& basis,
                         const Eigen::VectorXcd& psi0, std::span<const double> t_grid,
                         const EvolutionOptions& options = {});

} // namespace afc
