// spectrum.hpp: fixed-excitation sector spectra and level-spacing statistics

#pragma once

#include <vector>

#include "afc/basis.hpp"
#include "afc/comb.hpp"
#include "afc/common.hpp"

namespace afc {

struct SectorSpectrum {
    int sector{0};
    std::vector<double> eigenvalues;  // ascending, rad/ns
    std::vector<double> spacings_mhz; // consecutive differences, linear MHz
};

/// All eigenvalues of the excitation-k block of H (dense Hermitian solve).
SectorSpectrum sector_spectrum(const SparseMatrix& hamiltonian, const BasisTable& basis, int k);

enum class SpacingMode {
    all,   // every consecutive spacing, degenerate pairs contribute zeros
    bands, // eigenvalues closer than band_gap are merged; spacings of band centroids
};

struct SpacingOptions {
    SpacingMode mode{SpacingMode::all};
    double band_gap_mhz{0.0}; // used by SpacingMode::bands
};

struct SpacingStats {
    double mean_mhz{0.0};
    double std_mhz{0.0}; // population standard deviation
    double t_rev_ns{0.0};
};

/// Mean and standard deviation of the level spacings; t_rev = 1 / mean.
SpacingStats spacing_stats(const SectorSpectrum& spectrum, const SpacingOptions& options = {});

/// Single-excitation block built directly from the closed-form action of H on
/// |1_c 0> and |0_c 1_mu> (rotating frame, rad/ns). Cavity first, then teeth.
Eigen::MatrixXd single_excitation_matrix(const CombSpec& comb);

} // namespace afc
