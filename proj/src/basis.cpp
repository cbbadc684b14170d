#include "afc/basis.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "afc/common.hpp"

namespace afc {

namespace {

// Appends, in lexicographic order, every tuple for slots [slot, caps.size())
// whose entries sum to `remaining`.
void enumerate_sector(std::vector<std::uint8_t>& prefix, std::size_t slot, int remaining,
                      const std::vector<int>& caps, const std::vector<int>& suffix_capacity,
                      std::vector<std::uint8_t>& out) {
    if (slot == caps.size()) {
        if (remaining == 0) {
            out.insert(out.end(), prefix.begin(), prefix.end());
        }
        return;
    }
    const int rest = slot + 1 < caps.size() ? suffix_capacity[slot + 1] : 0;
    const int lo = std::max(0, remaining - rest);
    const int hi = std::min(caps[slot], remaining);
    for (int v = lo; v <= hi; ++v) {
        prefix[slot] = static_cast<std::uint8_t>(v);
        enumerate_sector(prefix, slot + 1, remaining - v, caps, suffix_capacity, out);
    }
}

} // namespace

BasisTable::BasisTable(const CombSpec& comb, int photon_cutoff, int exc_cutoff)
    : teeth_(comb.teeth()), n_prime_(comb.n_prime()), photon_cutoff_(photon_cutoff),
      exc_cutoff_(exc_cutoff) {
    if (photon_cutoff < 0 || photon_cutoff > 255) {
        throw ValidationError(fmt::format("basis.photon_cutoff must be in [0, 255], got {}", photon_cutoff));
    }
    if (exc_cutoff < 0 || exc_cutoff > 255) {
        throw ValidationError(fmt::format("basis.exc_cutoff must be in [0, 255], got {}", exc_cutoff));
    }

    std::vector<int> caps(width(), n_prime_);
    caps[0] = photon_cutoff_;
    std::vector<int> suffix_capacity(caps.size());
    std::partial_sum(caps.rbegin(), caps.rend(), suffix_capacity.rbegin());

    std::vector<std::uint8_t> prefix(width(), 0);
    sector_offsets_.reserve(static_cast<std::size_t>(exc_cutoff_) + 2);
    sector_offsets_.push_back(0);
    for (int k = 0; k <= exc_cutoff_; ++k) {
        enumerate_sector(prefix, 0, k, caps, suffix_capacity, occupations_);
        sector_offsets_.push_back(occupations_.size() / width());
    }
}

int BasisTable::excitation(std::size_t i) const {
    const auto occ = state(i);
    return std::accumulate(occ.begin(), occ.end(), 0);
}

std::pair<std::size_t, std::size_t> BasisTable::sector(int k) const {
    if (k < 0 || k > exc_cutoff_) {
        throw ValidationError(
            fmt::format("excitation sector {} outside [0, {}]", k, exc_cutoff_));
    }
    return {sector_offsets_[static_cast<std::size_t>(k)], sector_offsets_[static_cast<std::size_t>(k) + 1]};
}

std::optional<std::size_t> BasisTable::find(std::span<const std::uint8_t> occupations) const {
    if (occupations.size() != width()) {
        return std::nullopt;
    }
    const int k = std::accumulate(occupations.begin(), occupations.end(), 0);
    if (k > exc_cutoff_) {
        return std::nullopt;
    }
    auto [first, last] = sector(k);
    while (first < last) {
        const std::size_t mid = first + (last - first) / 2;
        const auto s = state(mid);
        const auto cmp = std::lexicographical_compare_three_way(s.begin(), s.end(),
                                                                occupations.begin(), occupations.end());
        if (cmp == 0) {
            return mid;
        }
        if (cmp < 0) {
            first = mid + 1;
        } else {
            last = mid;
        }
    }
    return std::nullopt;
}

} // namespace afc
