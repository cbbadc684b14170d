// states.hpp: initial cavity states and their embedding into the full basis

#pragma once

#include <variant>
#include <vector>

#include "afc/basis.hpp"
#include "afc/common.hpp"

namespace afc {

namespace cavity_state {

struct Coherent {
    Complex alpha;
};

/// (5, -i sqrt15, -(sqrt10 - i sqrt15), 5 - i sqrt10) on |1..4>, normalized.
struct FourLevelSuperposition {};

/// Even cat (|beta> + |-beta>) / N.
struct Cat {
    Complex beta;
};

/// Arbitrary amplitudes on |0>, |1>, ..., normalized on preparation.
struct Fock {
    std::vector<Complex> amplitudes;
};

} // namespace cavity_state

using CavityStateSpec = std::variant<cavity_state::Coherent, cavity_state::FourLevelSuperposition,
                                     cavity_state::Cat, cavity_state::Fock>;

inline constexpr double kDefaultTailTolerance = 1e-8;

/// ceil(|beta|^2 + 6|beta| + 4) for coherent/cat states, the highest occupied
/// Fock index otherwise.
int default_photon_cutoff(const CavityStateSpec& spec);

/// Probability weight of the untruncated state above Fock index `cutoff`.
double truncated_tail(const CavityStateSpec& spec, int cutoff);

/// Normalized amplitudes on Fock levels 0..cutoff. Throws ValidationError when
/// the truncated tail exceeds `tail_tolerance`.
Eigen::VectorXcd prepare_cavity_state(const CavityStateSpec& spec, int cutoff,
                                      double tail_tolerance = kDefaultTailTolerance);

/// psi_cav (x) |0 ... 0>_spins as an amplitude vector over `basis`.
Eigen::VectorXcd product_with_spin_vacuum(const BasisTable& basis, const Eigen::VectorXcd& cavity);

} // namespace afc
