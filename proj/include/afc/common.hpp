// common.hpp: scalar types, unit conversions and error types shared by all modules

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace afc {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Configuration values are linear frequencies in MHz; internally every energy
// and rate is an angular frequency in rad/ns and time is in ns.
constexpr double mhz_to_rad_per_ns(double nu_mhz) { return kTwoPi * nu_mhz * 1e-3; }
constexpr double rad_per_ns_to_mhz(double omega) { return omega / (kTwoPi * 1e-3); }

/// Invalid user input (bad configuration, inconsistent arguments).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that could not be completed (integrator failure, missing revival, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace afc
