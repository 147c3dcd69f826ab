#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace bspsa {

/// Finalizer of splitmix64. A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for the `index`-th independent run of an experiment seeded with `master`.
/// Injective in `index` for a fixed master.
std::uint64_t run_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Pseudo-random stream with a portable, serializable state.
///
/// Draws are derived from raw 64-bit words of mt19937_64 rather than from the
/// standard distributions, whose outputs are implementation-defined. The same
/// seed therefore gives the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Fair Bernoulli +1/-1.
  int sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

  std::string serialize() const;
  static Rng deserialize(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bspsa
