#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace mfc {

// SplitMix64 finalizer. Used only to derive well-mixed seeds, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hashes a master seed together with an ordered list of tags (purpose, index,
// population size, ...) into a child seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

/// Explicit, seedable random stream. Every stochastic routine in the library
/// takes one of these by reference; there is no global randomness.
///
/// `split(tag)` derives an independent child stream from this stream's seed
/// and the tag only, so children do not depend on how many draws the parent
/// has already made.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  Rng split(std::uint64_t tag) const { return Rng(derive_seed(seed_, {tag})); }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mfc
