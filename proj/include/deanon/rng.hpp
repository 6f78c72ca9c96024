#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace deanon {

using Rng = std::mt19937_64;

/// Seed for every randomized operation. Equal seeds and inputs give equal outputs.
struct RngSeed {
    std::uint64_t value = 0;

    /// Independent child seed for a named stage.
    RngSeed derive(std::string_view name) const;
    /// Independent child seed for the i-th parallel stream (tree, chain, ...).
    RngSeed derive(std::uint64_t index) const;

    Rng make_rng() const { return Rng(value); }

    friend bool operator==(RngSeed, RngSeed) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace deanon
