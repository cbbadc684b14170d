// revivals.hpp: locating photon-number revivals and scoring them against the initial state

#pragma once

#include <cstddef>
#include <vector>

#include "afc/cavity.hpp"
#include "afc/evolution.hpp"

namespace afc {

enum class FidelityKind {
    initial, // even revivals: compared with the initial cavity state
    parity,  // odd revivals: compared with the parity-transformed initial state
};

const char* to_string(FidelityKind kind);

struct RevivalPeak {
    int k{0};
    double t_peak_ns{0.0};
    double photon_number{0.0};
    std::size_t sample{0}; // index into the trajectory grid
};

struct Revival {
    RevivalPeak peak;
    double fidelity{0.0};
    FidelityKind kind{FidelityKind::parity};
};

/// Highest local maximum of the photon number within k T +- min(0.2 k T, T/2)
/// for k = 1..count. Throws NumericalError("no revival ...") when a window holds none.
std::vector<RevivalPeak> detect_revivals(const Trajectory& trajectory, double t_rev_hint_ns, int count);

/// Fidelity at each peak: parity-transformed target on odd k, initial target on even k.
std::vector<Revival> score_revivals(const Trajectory& trajectory, const std::vector<RevivalPeak>& peaks,
                                    const Eigen::VectorXcd& initial_cavity,
                                    FidelityConvention convention = FidelityConvention::root);

} // namespace afc
