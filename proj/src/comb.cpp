#include "afc/comb.hpp"

#include <cmath>

#include <fmt/format.h>

#include "afc/common.hpp"

namespace afc {

double Envelope::coupling_mhz(double detuning_mhz) const {
    if (kind == Kind::uniform) {
        return omega0_mhz;
    }
    return omega0_mhz * std::exp(-detuning_mhz * detuning_mhz / (2.0 * lambda_mhz * lambda_mhz));
}

namespace {

void validate_geometry(int teeth, double delta_nu_mhz, double nu_c_mhz, int n_prime) {
    if (teeth < 1 || teeth % 2 == 0) {
        throw ValidationError(fmt::format("comb.m must be a positive odd integer, got {}", teeth));
    }
    if (!(delta_nu_mhz > 0.0) || !std::isfinite(delta_nu_mhz)) {
        throw ValidationError(fmt::format("comb.delta_nu_mhz must be positive, got {}", delta_nu_mhz));
    }
    if (!std::isfinite(nu_c_mhz)) {
        throw ValidationError("comb.nu_c_mhz must be finite");
    }
    if (n_prime < 1 || n_prime > 255) {
        throw ValidationError(fmt::format("comb.n_prime must be in [1, 255], got {}", n_prime));
    }
}

} // namespace

CombSpec CombSpec::build(int teeth, double delta_nu_mhz, double nu_c_mhz, int n_prime,
                         const Envelope& envelope) {
    validate_geometry(teeth, delta_nu_mhz, nu_c_mhz, n_prime);
    if (!(envelope.omega0_mhz >= 0.0) || !std::isfinite(envelope.omega0_mhz)) {
        throw ValidationError(fmt::format("comb.omega0_mhz must be >= 0, got {}", envelope.omega0_mhz));
    }
    if (envelope.kind == Envelope::Kind::gaussian &&
        (!(envelope.lambda_mhz > 0.0) || !std::isfinite(envelope.lambda_mhz))) {
        throw ValidationError(fmt::format("comb.lambda_mhz must be positive, got {}", envelope.lambda_mhz));
    }
    std::vector<double> couplings(static_cast<std::size_t>(teeth));
    for (int i = 0; i < teeth; ++i) {
        const double detuning = (i - (teeth - 1) / 2) * delta_nu_mhz;
        couplings[static_cast<std::size_t>(i)] = envelope.coupling_mhz(detuning);
    }
    return CombSpec(delta_nu_mhz, nu_c_mhz, n_prime, std::move(couplings));
}

CombSpec CombSpec::with_couplings(int teeth, double delta_nu_mhz, double nu_c_mhz, int n_prime,
                                  std::vector<double> couplings_mhz) {
    validate_geometry(teeth, delta_nu_mhz, nu_c_mhz, n_prime);
    if (couplings_mhz.size() != static_cast<std::size_t>(teeth)) {
        throw ValidationError(fmt::format("comb.couplings has {} entries, expected m = {}",
                                          couplings_mhz.size(), teeth));
    }
    for (double c : couplings_mhz) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw ValidationError("comb.couplings must be finite and >= 0");
        }
    }
    return CombSpec(delta_nu_mhz, nu_c_mhz, n_prime, std::move(couplings_mhz));
}

void LossRates::validate() const {
    const auto check = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(fmt::format("losses.{} must be finite and >= 0, got {}", name, v));
        }
    };
    check(kappa_mhz, "kappa_mhz");
    check(gamma_h_mhz, "gamma_h_mhz");
    check(gamma_p_mhz, "gamma_p_mhz");
}

} // namespace afc
