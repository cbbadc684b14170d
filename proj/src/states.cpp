#include "afc/states.hpp"

#include <cmath>

#include <fmt/format.h>

namespace afc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Poisson(mean) probability of n, evaluated in log space.
double poisson(double mean, int n) {
    if (mean == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

// sum_{n > cutoff} of the Poisson weights, accumulated from the tail side.
double poisson_tail(double mean, int cutoff, bool even_only) {
    if (mean == 0.0) {
        return 0.0;
    }
    double tail = 0.0;
    const int stop = std::max(cutoff + 64, static_cast<int>(mean + 40.0 * std::sqrt(mean) + 64.0));
    for (int n = cutoff + 1; n <= stop; ++n) {
        if (even_only && n % 2 != 0) {
            continue;
        }
        tail += poisson(mean, n);
    }
    return tail;
}

std::vector<Complex> four_level_coefficients() {
    const double s10 = std::sqrt(10.0);
    const double s15 = std::sqrt(15.0);
    return {Complex(0.0, 0.0), Complex(5.0, 0.0), Complex(0.0, -s15), Complex(-s10, s15),
            Complex(5.0, -s10)};
}

} // namespace

int default_photon_cutoff(const CavityStateSpec& spec) {
    const auto from_amplitude = [](Complex a) {
        const double r = std::abs(a);
        return static_cast<int>(std::ceil(r * r + 6.0 * r + 4.0 - 1e-12));
    };
    return std::visit(Overloaded{
                          [&](const cavity_state::Coherent& s) { return from_amplitude(s.alpha); },
                          [](const cavity_state::FourLevelSuperposition&) { return 4; },
                          [&](const cavity_state::Cat& s) { return from_amplitude(s.beta); },
                          [](const cavity_state::Fock& s) {
                              int top = 0;
                              for (std::size_t n = 0; n < s.amplitudes.size(); ++n) {
                                  if (s.amplitudes[n] != Complex(0.0)) {
                                      top = static_cast<int>(n);
                                  }
                              }
                              return top;
                          },
                      },
                      spec);
}

double truncated_tail(const CavityStateSpec& spec, int cutoff) {
    return std::visit(
        Overloaded{
            [&](const cavity_state::Coherent& s) { return poisson_tail(std::norm(s.alpha), cutoff, false); },
            [&](const cavity_state::FourLevelSuperposition&) { return cutoff >= 4 ? 0.0 : 1.0; },
            [&](const cavity_state::Cat& s) {
                // |c_n|^2 = 2 Poisson(|b|^2, n) / (1 + e^{-2|b|^2}) on even n.
                const double mean = std::norm(s.beta);
                return 2.0 * poisson_tail(mean, cutoff, true) / (1.0 + std::exp(-2.0 * mean));
            },
            [&](const cavity_state::Fock& s) {
                double total = 0.0;
                double above = 0.0;
                for (std::size_t n = 0; n < s.amplitudes.size(); ++n) {
                    total += std::norm(s.amplitudes[n]);
                    if (static_cast<int>(n) > cutoff) {
                        above += std::norm(s.amplitudes[n]);
                    }
                }
                return total > 0.0 ? above / total : 0.0;
            },
        },
        spec);
}

Eigen::VectorXcd prepare_cavity_state(const CavityStateSpec& spec, int cutoff, double tail_tolerance) {
    if (cutoff < 0) {
        throw ValidationError("state photon cutoff must be >= 0");
    }
    if (const double tail = truncated_tail(spec, cutoff); tail > tail_tolerance) {
        throw ValidationError(fmt::format(
            "state.photon_cutoff {} too small: truncated tail probability {:.3g} exceeds {:.3g}", cutoff,
            tail, tail_tolerance));
    }
    const auto dim = static_cast<Eigen::Index>(cutoff) + 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);

    // sqrt(n!)-normalized powers, built incrementally to avoid overflow.
    const auto displaced = [&](Complex a, Eigen::VectorXcd& out) {
        Complex term(1.0, 0.0);
        for (Eigen::Index n = 0; n < dim; ++n) {
            if (n > 0) {
                term *= a / std::sqrt(static_cast<double>(n));
            }
            out[n] = term;
        }
    };

    std::visit(Overloaded{
                   [&](const cavity_state::Coherent& s) { displaced(s.alpha, psi); },
                   [&](const cavity_state::FourLevelSuperposition&) {
                       const auto c = four_level_coefficients();
                       for (std::size_t n = 0; n < c.size(); ++n) {
                           psi[static_cast<Eigen::Index>(n)] = c[n];
                       }
                   },
                   [&](const cavity_state::Cat& s) {
                       displaced(s.beta, psi);
                       for (Eigen::Index n = 1; n < dim; n += 2) {
                           psi[n] = 0.0; // beta^n + (-beta)^n vanishes for odd n
                       }
                   },
                   [&](const cavity_state::Fock& s) {
                       for (std::size_t n = 0; n < s.amplitudes.size() && static_cast<Eigen::Index>(n) < dim; ++n) {
                           psi[static_cast<Eigen::Index>(n)] = s.amplitudes[n];
                       }
                   },
               },
               spec);

    const double norm = psi.norm();
    if (norm == 0.0) {
        throw ValidationError("cavity state has zero norm within the cutoff");
    }
    return psi / norm;
}

Eigen::VectorXcd product_with_spin_vacuum(const BasisTable& basis, const Eigen::VectorXcd& cavity) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(basis.teeth()) + 1, 0);
    for (Eigen::Index n = 0; n < cavity.size(); ++n) {
        if (cavity[n] == Complex(0.0)) {
            continue;
        }
        if (n > 255) {
            throw ValidationError("cavity amplitude beyond Fock 255");
        }
        occ[0] = static_cast<std::uint8_t>(n);
        const auto idx = basis.find(occ);
        if (!idx) {
            throw ValidationError(fmt::format(
                "Fock level {} carries amplitude but lies outside the basis (photon_cutoff {}, exc_cutoff {})", n,
                basis.photon_cutoff(), basis.exc_cutoff()));
        }
        psi[static_cast<Eigen::Index>(*idx)] = cavity[n];
    }
    return psi;
}

} // namespace afc
