#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace contest {

/// splitmix64 finalizer; used to derive independent seeds from a master seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` derived from `seed`. Pure function.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Random stream with platform-independent variates. The standard
/// distributions are implementation-defined, so the conversions from raw
/// 64-bit draws are done here to keep simulations bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace contest
