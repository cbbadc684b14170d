#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "afc/basis.hpp"
#include "afc/hamiltonian.hpp"
#include "afc/spectrum.hpp"
#include "properties.hpp"

using namespace afc;

namespace {

SectorSpectrum spectrum_of(const CombSpec& comb, int k, Frame frame = Frame::rotating) {
    const BasisTable b(comb, k, k);
    return sector_spectrum(assemble_hamiltonian(comb, b, frame), b, k);
}

SectorSpectrum synthetic(std::vector<double> levels_mhz) {
    SectorSpectrum s;
    s.sector = 1;
    for (double e : levels_mhz) {
        s.eigenvalues.push_back(mhz_to_rad_per_ns(e));
    }
    for (std::size_t i = 1; i < levels_mhz.size(); ++i) {
        s.spacings_mhz.push_back(levels_mhz[i] - levels_mhz[i - 1]);
    }
    return s;
}

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("uncoupled comb: bare detunings plus the cavity level") {
    const CombSpec comb = CombSpec::build(7, 40.0, 3000.0, 10, Envelope::uniform(0.0));
    const SectorSpectrum s = spectrum_of(comb, 1);
    REQUIRE(s.eigenvalues.size() == 8);
    std::vector<double> expected{-120.0, -80.0, -40.0, 0.0, 0.0, 40.0, 80.0, 120.0};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(rad_per_ns_to_mhz(s.eigenvalues[i]) == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    REQUIRE(s.spacings_mhz.size() == 7);
    CHECK(std::count_if(s.spacings_mhz.begin(), s.spacings_mhz.end(), [](double d) { return std::abs(d) < 1e-9; }) == 1);
    CHECK(std::count_if(s.spacings_mhz.begin(), s.spacings_mhz.end(),
                        [](double d) { return std::abs(d - 40.0) < 1e-9; }) == 6);

    // The degenerate pair merges into one band, leaving the comb spacing only.
    const SpacingStats bands = spacing_stats(s, {SpacingMode::bands, 20.0});
    CHECK(bands.mean_mhz == doctest::Approx(40.0));
    CHECK(bands.std_mhz == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(spacing_stats(s).std_mhz > 10.0);
}

TEST_CASE("sector sizes and the vacuum Rabi doublet") {
    const CombSpec seven = CombSpec::build(7, 40.0, 3000.0, 10, Envelope::uniform(30.0));
    CHECK(spectrum_of(seven, 1).eigenvalues.size() == 8);

    const CombSpec one = CombSpec::build(1, 40.0, 3000.0, 1, Envelope::uniform(30.0));
    const SectorSpectrum s = spectrum_of(one, 1);
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(rad_per_ns_to_mhz(s.eigenvalues[0]) == doctest::Approx(-30.0).epsilon(1e-12));
    CHECK(rad_per_ns_to_mhz(s.eigenvalues[1]) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(s.spacings_mhz[0] == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("spectrum invariants for random instances") {
    std::mt19937_64 rng(31);
    for (int c = 0; c < 100; ++c) {
        const testing::RandomInstance inst = testing::random_instance(rng);
        const BasisTable b(inst.comb, inst.photon_cutoff, inst.exc_cutoff);
        const SparseMatrix h = assemble_hamiltonian(inst.comb, b);
        for (int k = 0; k <= inst.exc_cutoff; ++k) {
            const SectorSpectrum s = sector_spectrum(h, b, k);
            const auto [lo, hi] = b.sector(k);
            CHECK(s.eigenvalues.size() == hi - lo);
            CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
            CHECK(s.spacings_mhz.size() == std::max<std::size_t>(s.eigenvalues.size(), 1) - 1);
            for (double d : s.spacings_mhz) {
                CHECK(d >= 0.0);
            }
        }
        CHECK_THROWS_AS(sector_spectrum(h, b, inst.exc_cutoff + 1), ValidationError);
    }
}

TEST_CASE("single-excitation matrix agrees with the sector solver") {
    std::mt19937_64 rng(41);
    for (int c = 0; c < 100; ++c) {
        const testing::RandomInstance inst = testing::random_instance(rng);
        const Eigen::MatrixXd m = single_excitation_matrix(inst.comb);
        REQUIRE(m.rows() == inst.comb.teeth() + 1);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        const SectorSpectrum s = spectrum_of(inst.comb, 1);
        REQUIRE(s.eigenvalues.size() == static_cast<std::size_t>(m.rows()));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            CHECK(std::abs(solver.eigenvalues()(i) - s.eigenvalues[static_cast<std::size_t>(i)]) <= 1e-10);
        }
    }
    const Eigen::MatrixXd rabi = single_excitation_matrix(CombSpec::build(1, 40.0, 3000.0, 1, Envelope::uniform(30.0)));
    CHECK(rabi(0, 0) == 0.0);
    CHECK(rabi(0, 1) == doctest::Approx(mhz_to_rad_per_ns(30.0)));
    CHECK(rabi(1, 0) == doctest::Approx(mhz_to_rad_per_ns(30.0)));
    const Eigen::MatrixXd bare = single_excitation_matrix(CombSpec::build(3, 40.0, 3000.0, 2, Envelope::uniform(0.0)));
    CHECK(bare(1, 1) == doctest::Approx(mhz_to_rad_per_ns(-40.0)));
    CHECK(bare(3, 3) == doctest::Approx(mhz_to_rad_per_ns(40.0)));
    CHECK(bare(0, 2) == 0.0);
}

TEST_CASE("lab-frame spectra are rotating-frame spectra shifted by k 2 pi nu_c") {
    std::mt19937_64 rng(51);
    for (int c = 0; c < 100; ++c) {
        const testing::RandomInstance inst = testing::random_instance(rng);
        const int k = std::max(1, inst.exc_cutoff);
        const SectorSpectrum rot = spectrum_of(inst.comb, k);
        const SectorSpectrum lab = spectrum_of(inst.comb, k, Frame::lab);
        const double shift = k * mhz_to_rad_per_ns(inst.comb.nu_c_mhz());
        for (std::size_t i = 0; i < rot.eigenvalues.size(); ++i) {
            CHECK(std::abs(lab.eigenvalues[i] - rot.eigenvalues[i] - shift) <= 1e-12 * shift);
        }
    }
}

TEST_CASE("spacing statistics") {
    const SpacingStats even = spacing_stats(synthetic({0.0, 40.0, 80.0, 120.0}));
    CHECK(even.mean_mhz == doctest::Approx(40.0));
    CHECK(even.std_mhz == doctest::Approx(0.0));
    CHECK(even.t_rev_ns == doctest::Approx(25.0));

    CHECK(spacing_stats(synthetic({-3.0, 5.0})).std_mhz == 0.0);
    CHECK_THROWS_AS(spacing_stats(synthetic({1.0})), ValidationError);
    CHECK_THROWS_AS(spacing_stats(synthetic({0.0, 1.0, 2.0}), {SpacingMode::bands, 0.0}), ValidationError);

    const SpacingStats mixed = spacing_stats(synthetic({0.0, 10.0, 40.0}));
    CHECK(mixed.mean_mhz == doctest::Approx(20.0));
    CHECK(mixed.std_mhz == doctest::Approx(10.0));

    std::mt19937_64 rng(61);
    for (int c = 0; c < 100; ++c) {
        const testing::RandomInstance inst = testing::random_instance(rng);
        const SpacingStats s = spacing_stats(spectrum_of(inst.comb, 1));
        CHECK(std::abs(s.t_rev_ns * s.mean_mhz * 1e-3 - 1.0) <= 1e-12);
    }
}

TEST_CASE("engineered comb at lambda = 190 MHz") {
    const CombSpec comb = CombSpec::build(7, 40.0, 3000.0, 10, Envelope::gaussian(30.0, 190.0));
    const SpacingStats s1 = spacing_stats(spectrum_of(comb, 1));
    CHECK(s1.mean_mhz == doctest::Approx(36.36).epsilon(0.3 / 36.36));
    CHECK(s1.t_rev_ns == doctest::Approx(27.5).epsilon(0.3 / 27.5));
    CHECK(s1.std_mhz == doctest::Approx(0.2043).epsilon(1e-3));

    // In this sector the band grouping changes nothing.
    const SpacingStats s1_bands = spacing_stats(spectrum_of(comb, 1), {SpacingMode::bands, 20.0});
    CHECK(s1_bands.std_mhz == doctest::Approx(s1.std_mhz).epsilon(1e-12));

    const SectorSpectrum two = spectrum_of(comb, 2);
    CHECK(two.eigenvalues.size() == 36);
    CHECK(spacing_stats(two).std_mhz == doctest::Approx(17.30).epsilon(1e-3));
    CHECK(spacing_stats(two, {SpacingMode::bands, 20.0}).std_mhz == doctest::Approx(0.5534).epsilon(1e-3));
}

}
