// lindblad.hpp: vectorized Lindblad generator and density-matrix evolution

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "afc/comb.hpp"
#include "afc/evolution.hpp"
#include "afc/hamiltonian.hpp"

namespace afc {

/// How the per-spin dephasing rate gamma_p maps onto the collective J^z carrier.
enum class DephasingConvention {
    /// gamma_p (Z rho Z - 1/2 {Z^2, rho}) with Z = sum_k sigma^z_k = 2 J^z,
    /// the literal form of the per-spin term: rate 4 gamma_p on D[J^z].
    paper,
    /// (gamma_p / 2) D[Z]: rate 2 gamma_p on D[J^z].
    half,
};

/// rate * D[op], D[x] rho = x rho x^dag - 1/2 {x^dag x, rho}; rate in rad/ns.
struct Dissipator {
    SparseMatrix op;
    double rate;
};

/// Attaches kappa, gamma_h, gamma_p to the jump operators; zero-rate channels are dropped.
std::vector<Dissipator> make_dissipators(const std::vector<JumpOperator>& jumps, const LossRates& losses,
                                         DephasingConvention convention = DephasingConvention::paper);

inline constexpr std::size_t kDenseLindbladMaxDim = 200;

/// L = -i (H (x) 1 - 1 (x) H^T) + sum rate (x (x) x* - 1/2 x^dag x (x) 1 - 1/2 1 (x) x^T x*),
/// acting on the row-major vectorization vec(rho)[i * d + j] = rho(i, j).
SparseMatrix build_liouvillian(const SparseMatrix& hamiltonian, std::span<const Dissipator> dissipators,
                               std::size_t max_dim = kDenseLindbladMaxDim);

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim);

/// Integrates d vec(rho)/dt = L vec(rho) from t = 0. Snapshots are re-Hermitized;
/// the trace drift is recorded and a drift above 1e-6 aborts with NumericalError.
Trajectory evolve_lindblad_dense(const SparseMatrix& liouvillian, const BasisTable& basis,
                                 const Eigen::MatrixXcd& rho0, std::span<const double> t_grid,
                                 const EvolutionOptions& options = {1e-8, 1e-12, true});

/// Full density matrices at every grid time (same integration as above).
std::vector<Eigen::MatrixXcd> lindblad_snapshots(const SparseMatrix& liouvillian, const Eigen::MatrixXcd& rho0,
                                                 std::span<const double> t_grid,
                                                 const EvolutionOptions& options = {1e-8, 1e-12, true});

} // namespace afc
