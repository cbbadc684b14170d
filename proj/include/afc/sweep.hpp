// sweep.hpp: Gaussian coupling-envelope sweeps and spacing-uniformity optimization

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "afc/cavity.hpp"
#include "afc/comb.hpp"
#include "afc/lindblad.hpp"
#include "afc/spectrum.hpp"
#include "afc/states.hpp"

namespace afc {

/// Everything about the comb except the envelope width.
struct CombTemplate {
    int teeth{7};
    double delta_nu_mhz{40.0};
    double nu_c_mhz{3000.0};
    int n_prime{10};
    double omega0_mhz{30.0};

    CombSpec with_lambda(double lambda_mhz) const {
        return CombSpec::build(teeth, delta_nu_mhz, nu_c_mhz, n_prime, Envelope::gaussian(omega0_mhz, lambda_mhz));
    }
};

/// Band-centroid spacing statistics with the band gap set to half the tooth spacing.
SpacingOptions band_spacing(const CombTemplate& comb);

struct SpacingProfile {
    double lambda_mhz{0.0};
    SpacingStats sector1;
    SpacingStats sector2;
};

/// Sector-1 and sector-2 spacing statistics of the Gaussian comb with width lambda.
SpacingProfile spacing_profile(const CombTemplate& comb, double lambda_mhz, const SpacingOptions& spacing);

struct SweepOptions {
    CavityStateSpec initial{cavity_state::Fock{{0.0, 1.0, 1.0}}};
    int photon_cutoff{-1}; // -1: default_photon_cutoff(initial)
    int exc_cutoff{-1};    // -1: equal to the photon cutoff
    double tail_tolerance{kDefaultTailTolerance};
    int n_revivals{4};
    int samples_per_revival{400};
    double rtol{1e-9};
    SpacingOptions spacing{SpacingMode::bands, 0.0}; // gap 0: half the tooth spacing
    FidelityConvention convention{FidelityConvention::root};

    // Lossy rows are opt-in; by default any non-zero rate is rejected.
    bool allow_losses{false};
    LossRates losses{};
    DephasingConvention dephasing{DephasingConvention::paper};
    std::size_t n_traj{500};
    std::uint64_t seed{0};

    unsigned threads{1};
};

struct SweepRecord {
    double lambda_mhz{0.0};
    double mean1_mhz{0.0};
    double std1_mhz{0.0};
    double std2_mhz{0.0};
    double t_rev_ns{0.0};
    std::vector<double> t_peaks_ns;
    std::vector<double> fidelities; // revivals 1..n_revivals
    std::string error;              // revival detection failure for this row, empty on success
};

SweepRecord sweep_point(const CombTemplate& comb, double lambda_mhz, const SweepOptions& options);

/// One record per lambda, in input order regardless of options.threads.
std::vector<SweepRecord> sweep_lambda(const CombTemplate& comb, std::span<const double> lambdas_mhz,
                                      const SweepOptions& options);

enum class LambdaObjective { std1, std2, std1_plus_std2 };

struct LambdaOptimum {
    double lambda_mhz{0.0};
    double objective_mhz{0.0};
};

/// Coarse scan of the bracket followed by golden-section refinement of the
/// spacing-std objective to `resolution_mhz`. Throws NumericalError when the
/// coarse scan has no interior minimum.
LambdaOptimum optimize_lambda(const CombTemplate& comb, std::pair<double, double> bracket_mhz,
                              LambdaObjective objective, const SpacingOptions& spacing,
                              double resolution_mhz = 1.0, int coarse_points = 46);

} // namespace afc
