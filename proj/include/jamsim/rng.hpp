#pragma once

#include <cstdint>

namespace jamsim {

// Purpose tag for a random stream. Every draw in the project is a pure
// function of (seed, stream, id, counter), so draws are order-independent,
// parallel-safe, and changing one agent's stream never perturbs another's.
enum class Stream : std::uint64_t {
  attempt_times = 1,
  initial_state = 2,
  run_seeds = 3,
  attack_shape = 4,
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t absorb(std::uint64_t state, std::uint64_t word) {
  return mix64(state + kGolden + word);
}

}  // namespace detail

inline std::uint64_t hash_draw(std::uint64_t seed, Stream stream, std::uint64_t id,
                               std::uint64_t counter) {
  std::uint64_t h = detail::absorb(seed, static_cast<std::uint64_t>(stream));
  h = detail::absorb(h, id);
  h = detail::absorb(h, counter);
  return h;
}

// Uniform on [0,1). Uses the top 53 bits, so exactly 1.0 is unreachable.
inline double uniform_draw(std::uint64_t seed, Stream stream, std::uint64_t id,
                           std::uint64_t counter) {
  return static_cast<double>(hash_draw(seed, stream, id, counter) >> 11) * 0x1.0p-53;
}

}  // namespace jamsim
