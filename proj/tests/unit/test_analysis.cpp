#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "afc/basis.hpp"
#include "afc/cavity.hpp"
#include "afc/evolution.hpp"
#include "afc/revivals.hpp"
#include "afc/states.hpp"
#include "afc/wigner.hpp"
#include "properties.hpp"

using namespace afc;

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

Eigen::MatrixXcd pure(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

Eigen::MatrixXcd annihilation(Eigen::Index dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

// (2/pi) Tr[rho D(alpha) P D(alpha)^dag] with D from the matrix exponential in a padded space.
double wigner_by_displacement(const CavityMatrix& rho, Complex alpha, Eigen::Index padded) {
    const Eigen::MatrixXcd a = annihilation(padded);
    const Eigen::MatrixXcd d = (alpha * a.adjoint() - std::conj(alpha) * a).exp();
    Eigen::MatrixXcd parity = Eigen::MatrixXcd::Zero(padded, padded);
    for (Eigen::Index n = 0; n < padded; ++n) {
        parity(n, n) = n % 2 == 0 ? 1.0 : -1.0;
    }
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(padded, padded);
    big.topLeftCorner(rho.rows(), rho.cols()) = rho;
    return kTwoOverPi * (big * d * parity * d.adjoint()).trace().real();
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// <m|D(xi)|n> in closed form through associated Laguerre polynomials.
Complex displacement_element(int m, int n, Complex xi) {
    const double r2 = std::norm(xi);
    const double g = std::exp(-0.5 * r2);
    if (m >= n) {
        return std::sqrt(factorial(n) / factorial(m)) * std::pow(xi, m - n) * g *
               std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(m - n), r2);
    }
    return std::sqrt(factorial(m) / factorial(n)) * std::pow(-std::conj(xi), n - m) * g *
           std::assoc_laguerre(static_cast<unsigned>(m), static_cast<unsigned>(n - m), r2);
}

// W(alpha) = pi^-2 int d^2xi chi(xi) exp(alpha xi* - alpha* xi), chi(xi) = Tr[rho D(xi)].
double wigner_by_characteristic(const CavityMatrix& rho, Complex alpha) {
    const double step = 0.1;
    const int half = 70;
    double total = 0.0;
    for (int i = -half; i <= half; ++i) {
        for (int j = -half; j <= half; ++j) {
            const Complex xi(i * step, j * step);
            Complex chi(0.0);
            for (Eigen::Index m = 0; m < rho.rows(); ++m) {
                for (Eigen::Index n = 0; n < rho.cols(); ++n) {
                    chi += rho(n, m) * displacement_element(static_cast<int>(m), static_cast<int>(n), xi);
                }
            }
            total += (chi * std::exp(alpha * std::conj(xi) - std::conj(alpha) * xi)).real();
        }
    }
    return total * step * step / (std::numbers::pi * std::numbers::pi);
}

Trajectory synthetic_trajectory(double t_end, std::size_t n, const std::function<double(double)>& f) {
    Trajectory tr;
    tr.times = uniform_grid(t_end, n);
    for (double t : tr.times) {
        tr.photon_number.push_back(f(t));
    }
    return tr;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("partial trace over the spins") {
    const CombSpec comb = CombSpec::build(1, 40.0, 3000.0, 1, Envelope::uniform(10.0));
    const BasisTable b(comb, 1, 1);
    const auto i00 = static_cast<Eigen::Index>(*b.find(std::vector<std::uint8_t>{0, 0}));
    const auto i10 = static_cast<Eigen::Index>(*b.find(std::vector<std::uint8_t>{1, 0}));
    const auto i01 = static_cast<Eigen::Index>(*b.find(std::vector<std::uint8_t>{0, 1}));

    Eigen::VectorXcd entangled = Eigen::VectorXcd::Zero(3);
    entangled(i10) = entangled(i01) = 1.0 / std::sqrt(2.0);
    const CavityMatrix mixed = reduce_cavity(b, entangled);
    CHECK(mixed(0, 0).real() == doctest::Approx(0.5));
    CHECK(mixed(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(mixed(0, 1)) == 0.0);

    Eigen::VectorXcd product = Eigen::VectorXcd::Zero(3);
    product(i00) = product(i10) = 1.0 / std::sqrt(2.0);
    const CavityMatrix coherent = reduce_cavity(b, product);
    CHECK(coherent(0, 1).real() == doctest::Approx(0.5));
    CHECK(photon_number(coherent) == doctest::Approx(0.5));
    CHECK((reduce_cavity(b, pure(product)) - coherent).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_THROWS_AS(reduce_cavity(b, Eigen::VectorXcd::Zero(5).eval()), ValidationError);

    std::mt19937_64 rng(89);
    for (int c = 0; c < 100; ++c) {
        const testing::RandomInstance inst = testing::random_instance(rng);
        const BasisTable bb(inst.comb, inst.photon_cutoff, inst.exc_cutoff);
        const Eigen::VectorXcd psi = testing::random_state(rng, static_cast<Eigen::Index>(bb.size()));
        const CavityMatrix rho = reduce_cavity(bb, psi);
        CHECK(std::abs(rho.trace() - Complex(1.0)) <= 1e-12);
        CHECK(photon_number(rho) == doctest::Approx(CavityReducer(bb).photon_number(psi)).epsilon(1e-12));
        CHECK((reduce_cavity(bb, pure(psi)) - rho).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("Wigner function of standard states") {
    const Eigen::VectorXcd vac = prepare_cavity_state(cavity_state::Fock{{1.0}}, 0);
    CHECK(wigner_at(pure(vac), 0.0) == doctest::Approx(kTwoOverPi).epsilon(1e-14));

    const Eigen::VectorXcd one = prepare_cavity_state(cavity_state::Fock{{0.0, 1.0}}, 1);
    CHECK(wigner_at(pure(one), 0.0) == doctest::Approx(-kTwoOverPi).epsilon(1e-14));

    const Complex beta(0.8, -0.5);
    const Eigen::VectorXcd coh = prepare_cavity_state(cavity_state::Coherent{beta}, 30);
    for (const Complex alpha : {Complex(0.0, 0.0), Complex(0.8, -0.5), Complex(1.5, 0.3), Complex(-1.0, 1.0)}) {
        CHECK(wigner_at(pure(coh), alpha) ==
              doctest::Approx(kTwoOverPi * std::exp(-2.0 * std::norm(alpha - beta))).epsilon(1e-10));
    }

    const Eigen::VectorXcd cat = prepare_cavity_state(cavity_state::Cat{Complex(2.0, 0.0)}, 40);
    CHECK(wigner_at(pure(cat), 0.0) == doctest::Approx(kTwoOverPi).epsilon(1e-12));
}

TEST_CASE("Wigner function against the displacement operator") {
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int c = 0; c < 100; ++c) {
        const Eigen::MatrixXcd rho = testing::random_density(rng, 5, 1 + c % 3);
        const Complex alpha(coord(rng), coord(rng));
        CHECK(std::abs(wigner_at(rho, alpha) - wigner_by_displacement(rho, alpha, 60)) <= 1e-10);
    }
}

TEST_CASE("Wigner function against the characteristic-function transform") {
    std::mt19937_64 rng(101);
    const Eigen::MatrixXcd rho = testing::random_density(rng, 3, 2);
    for (const Complex alpha : {Complex(0.0, 0.0), Complex(0.7, -0.4), Complex(-1.2, 0.9)}) {
        CHECK(std::abs(wigner_at(rho, alpha) - wigner_by_characteristic(rho, alpha)) <= 1e-8);
    }
}

TEST_CASE("Wigner grids") {
    const Eigen::VectorXcd coh = prepare_cavity_state(cavity_state::Coherent{Complex(0.5, 0.5)}, 20);
    const WignerGrid g = wigner(pure(coh), {-5.0, 5.0, -5.0, 5.0, 101});
    CHECK(g.re(0) == -5.0);
    CHECK(g.im(100) == 5.0);
    CHECK(g.cell_area() == doctest::Approx(0.01));
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    const WignerGrid r = point_reflect(g);
    CHECK(r.values(0, 0) == g.values(100, 100));
    CHECK(r.values(30, 70) == g.values(70, 30));
    CHECK_THROWS_AS(wigner(pure(coh), {-1.0, 1.0, -1.0, 1.0, 1}), ValidationError);
    CHECK_THROWS_AS(wigner(pure(coh), {1.0, -1.0, -1.0, 1.0, 11}), ValidationError);
    CHECK_THROWS_AS(point_reflect(wigner(pure(coh), {0.0, 1.0, -1.0, 1.0, 11})), ValidationError);
}

TEST_CASE("parity transformation") {
    Eigen::VectorXcd psi(4);
    psi << 1.0, 2.0, Complex(0.0, 3.0), 4.0;
    const Eigen::VectorXcd p = parity_transform(psi);
    CHECK(p(0) == Complex(1.0));
    CHECK(p(1) == Complex(-2.0));
    CHECK(p(2) == Complex(0.0, 3.0));
    CHECK(p(3) == Complex(-4.0));
    CHECK(parity_transform(p) == psi);
    CHECK((parity_transform(pure(psi)) - pure(p)).cwiseAbs().maxCoeff() == 0.0);

    const Complex beta(1.0, 0.5);
    const Eigen::VectorXcd coh = prepare_cavity_state(cavity_state::Coherent{beta}, 25);
    const Eigen::VectorXcd flipped = prepare_cavity_state(cavity_state::Coherent{-beta}, 25);
    CHECK((parity_transform(coh) - flipped).norm() <= 1e-14);
}

TEST_CASE("fidelity conventions") {
    const Complex alpha(std::sqrt(2.0), 0.0);
    const Eigen::VectorXcd plus = prepare_cavity_state(cavity_state::Coherent{alpha}, 40);
    const Eigen::VectorXcd minus = prepare_cavity_state(cavity_state::Coherent{-alpha}, 40);
    CHECK(fidelity(pure(plus), minus, FidelityConvention::squared_overlap) ==
          doctest::Approx(std::exp(-8.0)).epsilon(1e-8));
    CHECK(fidelity(pure(plus), minus) == doctest::Approx(std::exp(-4.0)).epsilon(1e-8));
    CHECK(fidelity(pure(plus), plus) == doctest::Approx(1.0).epsilon(1e-14));

    const int d = 6;
    const CavityMatrix mixed = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
    const Eigen::VectorXcd target = prepare_cavity_state(cavity_state::FourLevelSuperposition{}, d - 1);
    CHECK(fidelity(mixed, target, FidelityConvention::squared_overlap) == doctest::Approx(1.0 / d));
    CHECK(fidelity(mixed, target) == doctest::Approx(std::sqrt(1.0 / d)));

    // Zero padding: a target on a larger space than rho.
    const Eigen::VectorXcd longer = prepare_cavity_state(cavity_state::Fock{{0.0, 1.0}}, 9);
    CHECK(fidelity(pure(prepare_cavity_state(cavity_state::Fock{{0.0, 1.0}}, 3)), longer) == doctest::Approx(1.0));

    CHECK_THROWS_WITH_AS(fidelity(mixed, 2.0 * target), doctest::Contains("not normalized"), ValidationError);
}

TEST_CASE("density diagnostics") {
    std::mt19937_64 rng(103);
    const Eigen::MatrixXcd rho = testing::random_density(rng, 4, 2);
    const DensityDiagnostics ok = diagnose(rho);
    CHECK(ok.trace_error <= 1e-14);
    CHECK(ok.hermiticity_error <= 1e-15);
    CHECK(ok.min_eigenvalue >= -1e-14);
    Eigen::MatrixXcd bad = rho;
    bad(0, 1) += 0.1;
    bad(0, 0) -= 0.5;
    const DensityDiagnostics d = diagnose(bad);
    CHECK(d.hermiticity_error == doctest::Approx(0.1));
    CHECK(d.trace_error == doctest::Approx(0.5));
}

TEST_CASE("revival detection on synthetic signals") {
    const double period = 10.0;
    const Trajectory tr = synthetic_trajectory(
        60.0, 1201, [&](double t) { return std::pow(std::cos(std::numbers::pi * t / period), 2) * std::exp(-t / 100.0); });
    const auto peaks = detect_revivals(tr, 10.4, 5);
    REQUIRE(peaks.size() == 5);
    for (int k = 1; k <= 5; ++k) {
        CHECK(peaks[static_cast<std::size_t>(k - 1)].k == k);
        CHECK(peaks[static_cast<std::size_t>(k - 1)].t_peak_ns == doctest::Approx(k * period).epsilon(0.06 / (k * period)));
        CHECK(tr.times[peaks[static_cast<std::size_t>(k - 1)].sample] == peaks[static_cast<std::size_t>(k - 1)].t_peak_ns);
    }

    const Trajectory decay = synthetic_trajectory(60.0, 1201, [](double t) { return std::exp(-t / 10.0); });
    CHECK_THROWS_WITH_AS(detect_revivals(decay, 10.0, 2), doctest::Contains("no revival"), NumericalError);

    const Trajectory coarse = synthetic_trajectory(60.0, 31, [](double t) { return std::cos(t); });
    CHECK_THROWS_WITH_AS(detect_revivals(coarse, 10.0, 2), doctest::Contains("samples per t_rev"), ValidationError);
    CHECK_THROWS_WITH_AS(detect_revivals(tr, 10.0, 6), doctest::Contains("before the last revival window"),
                         ValidationError);
    CHECK_THROWS_AS(detect_revivals(tr, 0.0, 2), ValidationError);
    CHECK_THROWS_AS(detect_revivals(tr, 10.0, 0), ValidationError);
}

TEST_CASE("odd revivals are scored against the parity image") {
    const Eigen::VectorXcd initial = prepare_cavity_state(cavity_state::Fock{{0.0, 1.0, 1.0}}, 2);
    const Eigen::VectorXcd flipped = parity_transform(initial);
    Trajectory tr = synthetic_trajectory(35.0, 701, [](double t) {
        return std::pow(std::cos(std::numbers::pi * t / 10.0), 2);
    });
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const int k = static_cast<int>(std::lround(tr.times[i] / 10.0));
        tr.cavity_states.push_back(pure(k % 2 == 0 ? initial : flipped));
    }
    const auto scored = score_revivals(tr, detect_revivals(tr, 10.0, 3), initial);
    REQUIRE(scored.size() == 3);
    CHECK(scored[0].kind == FidelityKind::parity);
    CHECK(scored[1].kind == FidelityKind::initial);
    CHECK(scored[2].kind == FidelityKind::parity);
    for (const Revival& r : scored) {
        CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(std::string(to_string(FidelityKind::parity)) == "parity");
    CHECK(std::string(to_string(FidelityKind::initial)) == "initial");

    tr.cavity_states.clear();
    CHECK_THROWS_AS(score_revivals(tr, detect_revivals(tr, 10.0, 3), initial), ValidationError);
}

}
