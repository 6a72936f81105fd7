#pragma once

#include <cstdint>
#include <random>

namespace cohercause {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` under `master`. Distinct streams give
/// statistically independent engines; the mapping is fixed so results
/// do not depend on thread count or scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Engine for one Monte Carlo stream.
Rng make_rng(std::uint64_t master, std::uint64_t stream);

/// Derives a child master seed, for nesting (e.g. one per MA order).
std::uint64_t child_seed(std::uint64_t master, std::uint64_t tag) noexcept;

}  // namespace cohercause
