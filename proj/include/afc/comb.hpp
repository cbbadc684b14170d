// comb.hpp: atomic frequency comb geometry and loss rates

#pragma once

#include <span>
#include <vector>

namespace afc {

/// Shape of the per-tooth collective coupling distribution.
struct Envelope {
    enum class Kind { uniform, gaussian };

    Kind kind{Kind::uniform};
    double omega0_mhz{0.0};
    double lambda_mhz{0.0}; // Gaussian width, ignored for uniform

    static Envelope uniform(double omega0_mhz) { return {Kind::uniform, omega0_mhz, 0.0}; }
    static Envelope gaussian(double omega0_mhz, double lambda_mhz) {
        return {Kind::gaussian, omega0_mhz, lambda_mhz};
    }

    double coupling_mhz(double detuning_mhz) const;
};

/// Comb of m equally spaced teeth centred on the cavity, each tooth holding
/// n_prime identical spins with collective coupling Omega_mu.
///
/// Tooth i (0-based) has comb index mu = i - (m-1)/2 and frequency
/// nu_c + mu * delta_nu. Frequencies are derived, never stored.
class CombSpec {
public:
    static CombSpec build(int teeth, double delta_nu_mhz, double nu_c_mhz, int n_prime,
                          const Envelope& envelope);
    static CombSpec with_couplings(int teeth, double delta_nu_mhz, double nu_c_mhz, int n_prime,
                                   std::vector<double> couplings_mhz);

    int teeth() const { return static_cast<int>(couplings_mhz_.size()); }
    double delta_nu_mhz() const { return delta_nu_mhz_; }
    double nu_c_mhz() const { return nu_c_mhz_; }
    int n_prime() const { return n_prime_; }
    std::span<const double> couplings_mhz() const { return couplings_mhz_; }

    int comb_index(int tooth) const { return tooth - (teeth() - 1) / 2; }
    double detuning_mhz(int tooth) const { return comb_index(tooth) * delta_nu_mhz_; }
    double tooth_frequency_mhz(int tooth) const { return nu_c_mhz_ + detuning_mhz(tooth); }

private:
    CombSpec(double delta_nu_mhz, double nu_c_mhz, int n_prime, std::vector<double> couplings)
        : delta_nu_mhz_(delta_nu_mhz), nu_c_mhz_(nu_c_mhz), n_prime_(n_prime),
          couplings_mhz_(std::move(couplings)) {}

    double delta_nu_mhz_;
    double nu_c_mhz_;
    int n_prime_;
    std::vector<double> couplings_mhz_;
};

/// Linear-frequency loss rates in MHz.
struct LossRates {
    double kappa_mhz{0.0};
    double gamma_h_mhz{0.0};
    double gamma_p_mhz{0.0};

    void validate() const;
    bool lossless() const { return kappa_mhz == 0.0 && gamma_h_mhz == 0.0 && gamma_p_mhz == 0.0; }
};

} // namespace afc
