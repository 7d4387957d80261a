#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace orgsim {

// Every stochastic component draws from an exclusively owned stream of this type.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over the bytes of `text`. Used to turn scenario labels into stable ids.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// 64-bit key identifying the stream of one run. Stable across releases:
/// key = mix64(mix64(mix64(master) ^ scenario) + run), with additive round
/// constants so that (a, b, c) and permutations never coincide trivially.
std::uint64_t run_key(std::uint64_t master_seed, std::uint64_t scenario_id,
                      std::uint64_t run_index) noexcept;

/// Independent stream for (master seed, scenario, run). The engine is seeded
/// through std::seed_seq with eight words expanded from run_key.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t scenario_id,
                  std::uint64_t run_index);

/// Uniform draw on [0, 1) with 53 bits of resolution.
double uniform01(Rng& rng) noexcept;

/// Uniform index in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

}  // namespace orgsim
