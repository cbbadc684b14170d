// basis.hpp: excitation-truncated product basis |n_c> (x) |q_mu> over all teeth

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "afc/comb.hpp"

namespace afc {

/// Enumerated basis of cavity Fock number n_c and per-tooth Dicke excitation q_mu with
/// n_c <= photon_cutoff, q_mu <= N' and n_c + sum q_mu <= exc_cutoff.
///
/// States are ordered by total excitation, then lexicographically on
/// (n_c, q_0, ..., q_{m-1}). Each excitation sector therefore occupies a
/// contiguous, sorted index range, which is what lookups binary-search.
class BasisTable {
public:
    BasisTable(const CombSpec& comb, int photon_cutoff, int exc_cutoff);

    std::size_t size() const { return sector_offsets_.back(); }
    int teeth() const { return teeth_; }
    int n_prime() const { return n_prime_; }
    int photon_cutoff() const { return photon_cutoff_; }
    int exc_cutoff() const { return exc_cutoff_; }

    /// Occupations (n_c, q_0, ..., q_{m-1}) of state i.
    std::span<const std::uint8_t> state(std::size_t i) const {
        return {occupations_.data() + i * width(), width()};
    }
    int photons(std::size_t i) const { return occupations_[i * width()]; }
    int spin_excitations(std::size_t i, int tooth) const {
        return occupations_[i * width() + 1 + static_cast<std::size_t>(tooth)];
    }
    int excitation(std::size_t i) const;

    /// Half-open index range [first, last) of the excitation-k sector.
    std::pair<std::size_t, std::size_t> sector(int k) const;

    std::optional<std::size_t> find(std::span<const std::uint8_t> occupations) const;

    /// True when the basis was enumerated for a comb of the same shape.
    bool compatible_with(const CombSpec& comb) const {
        return comb.teeth() == teeth_ && comb.n_prime() == n_prime_;
    }

private:
    std::size_t width() const { return static_cast<std::size_t>(teeth_) + 1; }

    int teeth_;
    int n_prime_;
    int photon_cutoff_;
    int exc_cutoff_;
    std::vector<std::uint8_t> occupations_;
    std::vector<std::size_t> sector_offsets_; // exc_cutoff + 2 entries
};

} // namespace afc
