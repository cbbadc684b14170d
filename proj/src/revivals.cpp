#include "afc/revivals.hpp"

#include <algorithm>
#include <optional>

#include <fmt/format.h>

namespace afc {

const char* to_string(FidelityKind kind) { return kind == FidelityKind::initial ? "initial" : "parity"; }

namespace {
constexpr double kWindow = 0.2;
constexpr std::size_t kMinSamplesPerRevival = 20;
} // namespace

std::vector<RevivalPeak> detect_revivals(const Trajectory& trajectory, double t_rev_hint_ns, int count) {
    const auto& t = trajectory.times;
    const auto& n = trajectory.photon_number;
    if (!(t_rev_hint_ns > 0.0) || count < 1) {
        throw ValidationError("revival detection needs a positive t_rev hint and count >= 1");
    }
    if (t.size() < 3 || n.size() != t.size()) {
        throw ValidationError("trajectory too short for revival detection");
    }
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (dt > t_rev_hint_ns / kMinSamplesPerRevival) {
        throw ValidationError(fmt::format("trajectory sampled every {:.3g} ns; revival detection needs at least {} "
                                          "samples per t_rev = {:.3g} ns",
                                          dt, kMinSamplesPerRevival, t_rev_hint_ns));
    }
    if (t.back() < count * t_rev_hint_ns + std::min(kWindow * count, 0.5) * t_rev_hint_ns) {
        throw ValidationError(fmt::format("trajectory ends at {:.3g} ns, before the last revival window closes",
                                          t.back()));
    }

    std::vector<RevivalPeak> peaks;
    for (int k = 1; k <= count; ++k) {
        const double half_width = std::min(kWindow * k, 0.5) * t_rev_hint_ns;
        const double lo = k * t_rev_hint_ns - half_width;
        const double hi = k * t_rev_hint_ns + half_width;
        std::optional<std::size_t> best;
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            if (t[i] < lo || t[i] > hi) {
                continue;
            }
            const bool local_max = n[i] > n[i - 1] && n[i] >= n[i + 1];
            if (local_max && (!best || n[i] > n[*best])) {
                best = i;
            }
        }
        if (!best) {
            throw NumericalError(fmt::format("no revival: photon number has no local maximum in [{:.4g}, {:.4g}] ns", lo, hi));
        }
        peaks.push_back({k, t[*best], n[*best], *best});
    }
    return peaks;
}

std::vector<Revival> score_revivals(const Trajectory& trajectory, const std::vector<RevivalPeak>& peaks,
                                    const Eigen::VectorXcd& initial_cavity, FidelityConvention convention) {
    if (trajectory.cavity_states.size() != trajectory.times.size()) {
        throw ValidationError("trajectory does not carry cavity states at every sample");
    }
    const Eigen::VectorXcd flipped = parity_transform(initial_cavity);
    std::vector<Revival> out;
    for (const RevivalPeak& p : peaks) {
        const FidelityKind kind = p.k % 2 == 0 ? FidelityKind::initial : FidelityKind::parity;
        const Eigen::VectorXcd& target = kind == FidelityKind::initial ? initial_cavity : flipped;
        out.push_back({p, fidelity(trajectory.cavity_states[p.sample], target, convention), kind});
    }
    return out;
}

} // namespace afc
