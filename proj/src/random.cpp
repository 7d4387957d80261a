#include "orgsim/random.hpp"

#include <array>

namespace orgsim {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t run_key(std::uint64_t master_seed, std::uint64_t scenario_id,
                      std::uint64_t run_index) noexcept {
  std::uint64_t h = mix64(master_seed ^ 0x6f7267736d000001ULL);
  h = mix64(h ^ scenario_id) + 0x2545f4914f6cdd1dULL;
  h = mix64(h + run_index);
  return h;
}

Rng derive_stream(std::uint64_t master_seed, std::uint64_t scenario_id,
                  std::uint64_t run_index) {
  std::uint64_t state = run_key(master_seed, scenario_id, run_index);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    state = mix64(state);
    words[i] = static_cast<std::uint32_t>(state);
    words[i + 1] = static_cast<std::uint32_t>(state >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

}  // namespace orgsim
