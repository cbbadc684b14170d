// config.hpp: INI run configuration

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "afc/cavity.hpp"
#include "afc/comb.hpp"
#include "afc/hamiltonian.hpp"
#include "afc/lindblad.hpp"
#include "afc/spectrum.hpp"
#include "afc/states.hpp"
#include "afc/sweep.hpp"
#include "afc/wigner.hpp"

namespace afc {

enum class Method { closed, dense, trajectories };

struct CombSection {
    int m{7};
    double delta_nu_mhz{40.0};
    double nu_c_mhz{3000.0};
    int n_prime{10};
    Envelope::Kind envelope{Envelope::Kind::gaussian};
    double omega0_mhz{30.0};
    double lambda_mhz{190.0};

    CombSpec build() const;
    CombTemplate as_template() const { return {m, delta_nu_mhz, nu_c_mhz, n_prime, omega0_mhz}; }
};

struct BasisSection {
    int photon_cutoff{-1}; // -1: derived from the initial state
    int exc_cutoff{-1};    // -1: equal to the photon cutoff
    Frame frame{Frame::rotating};
};

struct StateSection {
    CavityStateSpec spec{cavity_state::Fock{{0.0, 1.0, 1.0}}};
    double tail_tolerance{kDefaultTailTolerance};
};

struct TimeSection {
    double t_end_ns{120.0};
    std::size_t n_snapshots{2401};
    double rtol{1e-9};
};

struct MethodSection {
    Method kind{Method::closed};
    std::size_t n_traj{1000};
    std::size_t dense_max_dim{kDenseLindbladMaxDim};
    bool write_density{false};
};

struct SpectrumSection {
    int max_sector{2};
    SpacingOptions spacing{};
};

struct WignerSection {
    WignerGridSpec grid{};
    std::vector<double> times_ns{};         // absolute snapshot times
    std::vector<double> t_rev_multiples{};  // snapshot times in units of the sector-1 t_rev
};

struct RevivalsSection {
    int count{4};
    double t_rev_ns{0.0}; // 0: sector-1 revival time of the configured comb
    int samples_per_revival{400};
    FidelityConvention convention{FidelityConvention::root};
};

struct SweepSection {
    double lambda_min_mhz{100.0};
    double lambda_max_mhz{1000.0};
    std::size_t n_points{46};
    int samples_per_revival{400};
    bool allow_losses{false};
    bool optimize{true};
    SpacingOptions spacing{SpacingMode::bands, 0.0};
};

struct RunConfig {
    CombSection comb;
    BasisSection basis;
    LossRates losses;
    DephasingConvention dephasing{DephasingConvention::paper};
    StateSection state;
    TimeSection time;
    MethodSection method;
    SpectrumSection spectrum;
    WignerSection wigner;
    RevivalsSection revivals;
    SweepSection sweep;
    std::uint64_t seed{0};
    unsigned threads{1};
    std::string out_dir{"."};
};

/// Parses INI text. Throws ValidationError naming `section.key` for unknown
/// keys, malformed values and values outside their physical range.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a of the raw bytes, as 16 hex digits.
std::string config_hash(const std::string& text);

} // namespace afc
