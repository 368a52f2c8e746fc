#pragma once

#include <cstdint>
#include <random>

namespace flola {

using Rng = std::mt19937_64;

// Stream tags for derive_seed. Changing a value changes every seeded result.
enum class Stream : std::uint64_t {
  initial_design = 1,
  mc_pool = 2,
  evaluator_noise = 3,
  noise_report = 4,
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based seed derivation: splitmix64(splitmix64(splitmix64(master) ^ stream) ^ counter).
/// Every random stream in a run is a pure function of (master seed, stream, counter), so
/// the order in which work is scheduled never perturbs the draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                    std::uint64_t counter) noexcept {
  std::uint64_t s = detail::splitmix64(master);
  s = detail::splitmix64(s ^ static_cast<std::uint64_t>(stream));
  return detail::splitmix64(s ^ counter);
}

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t counter) {
  return Rng(derive_seed(master, stream, counter));
}

}  // namespace flola
