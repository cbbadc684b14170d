#include "afc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace afc {

SectorSpectrum sector_spectrum(const SparseMatrix& hamiltonian, const BasisTable& basis, int k) {
    if (hamiltonian.rows() != static_cast<Eigen::Index>(basis.size())) {
        throw ValidationError("hamiltonian dimension does not match basis size");
    }
    const auto [first, last] = basis.sector(k);
    const auto dim = static_cast<Eigen::Index>(last - first);
    const auto offset = static_cast<Eigen::Index>(first);

    // [H, N_ex] = 0 makes the sector a closed diagonal block.
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (SparseMatrix::InnerIterator it(hamiltonian, r + offset); it; ++it) {
            const Eigen::Index c = it.col() - offset;
            if (c < 0 || c >= dim) {
                throw NumericalError("hamiltonian couples different excitation sectors");
            }
            block(r, c) = it.value();
        }
    }

    SectorSpectrum out;
    out.sector = k;
    if (dim == 0) {
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError(fmt::format("eigensolver failed in sector {}", k));
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    out.spacings_mhz.reserve(out.eigenvalues.size() - 1);
    for (std::size_t i = 1; i < out.eigenvalues.size(); ++i) {
        out.spacings_mhz.push_back(rad_per_ns_to_mhz(out.eigenvalues[i] - out.eigenvalues[i - 1]));
    }
    return out;
}

namespace {

std::vector<double> band_centroid_spacings(const std::vector<double>& eigenvalues, double gap_mhz) {
    std::vector<double> centroids;
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const double e = rad_per_ns_to_mhz(eigenvalues[i]);
        if (count > 0 && e - rad_per_ns_to_mhz(eigenvalues[i - 1]) >= gap_mhz) {
            centroids.push_back(sum / count);
            sum = 0.0;
            count = 0;
        }
        sum += e;
        ++count;
    }
    centroids.push_back(sum / count);
    std::vector<double> spacings;
    for (std::size_t i = 1; i < centroids.size(); ++i) {
        spacings.push_back(centroids[i] - centroids[i - 1]);
    }
    return spacings;
}

} // namespace

SpacingStats spacing_stats(const SectorSpectrum& spectrum, const SpacingOptions& options) {
    if (spectrum.eigenvalues.size() < 2) {
        throw ValidationError(fmt::format("sector {} has fewer than two levels; spacing statistics undefined",
                                          spectrum.sector));
    }
    std::vector<double> spacings = spectrum.spacings_mhz;
    if (options.mode == SpacingMode::bands) {
        if (!(options.band_gap_mhz > 0.0)) {
            throw ValidationError("band spacing mode requires a positive band gap");
        }
        spacings = band_centroid_spacings(spectrum.eigenvalues, options.band_gap_mhz);
        if (spacings.empty()) {
            throw NumericalError(fmt::format("sector {} collapses to a single band", spectrum.sector));
        }
    }
    const double n = static_cast<double>(spacings.size());
    const double mean = std::accumulate(spacings.begin(), spacings.end(), 0.0) / n;
    double var = 0.0;
    for (double s : spacings) {
        var += (s - mean) * (s - mean);
    }
    SpacingStats stats;
    stats.mean_mhz = mean;
    stats.std_mhz = std::sqrt(var / n);
    stats.t_rev_ns = 1e3 / mean; // 1 / (mean in GHz)
    return stats;
}

Eigen::MatrixXd single_excitation_matrix(const CombSpec& comb) {
    const int m = comb.teeth();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int t = 0; t < m; ++t) {
        const double omega = mhz_to_rad_per_ns(comb.couplings_mhz()[static_cast<std::size_t>(t)]);
        h(t + 1, t + 1) = mhz_to_rad_per_ns(comb.detuning_mhz(t));
        h(0, t + 1) = omega;
        h(t + 1, 0) = omega;
    }
    return h;
}

} // namespace afc
