// trajectories.hpp: Monte Carlo wavefunction unraveling of the Lindblad equation

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "afc/evolution.hpp"
#include "afc/lindblad.hpp"

namespace afc {

struct TrajectoryOptions {
    std::size_t n_traj{1000};
    std::uint64_t seed{0};
    unsigned threads{1};
    double rtol{1e-8};
    double atol{1e-12};
    bool record_cavity_states{true};
};

/// Quantum-jump unraveling: each trajectory follows the non-Hermitian drift
/// H - (i/2) sum rate x^dag x until its squared norm falls below a uniform
/// threshold, then jumps through channel j with probability ~ rate_j |x_j psi|^2.
///
/// Trajectory i draws from its own generator seeded with seed + i, and the
/// averages are reduced in trajectory order, so the result does not depend on
/// the thread count. photon_number_stderr holds the standard error of the mean.
Trajectory evolve_trajectories(const SparseMatrix& hamiltonian, const BasisTable& basis,
                               std::span<const Dissipator> dissipators, const Eigen::VectorXcd& psi0,
                               std::span<const double> t_grid, const TrajectoryOptions& options);

} // namespace afc
