#pragma once

// Seedable, splittable random source.
//
// Engine: std::mt19937_64 (fully specified by the C++ standard), seeded with
// splitmix64(seed ^ splitmix64(stream)). Every derived quantity below is
// computed by hand from raw 64-bit draws, so streams are identical on every
// conforming standard library:
//   uniform01   (bits >> 11) * 2^-53
//   below(n)    rejection sampling on raw bits
//   normal      Marsaglia polar method, second value cached
//   complex     (N1 + i N2) / sqrt(2)

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "frametight/linalg.hpp"

namespace frametight {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(derive_seed(seed, stream)), engine_(key_) {}

  /// Independent child stream keyed on this generator's seed; does not advance it.
  Rng split(std::uint64_t stream) const { return Rng(key_, stream); }

  std::uint64_t bits() { return engine_(); }

  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = bits();
    while (v >= limit) v = bits();
    return v % n;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::numbers::sqrt2;
  }

  /// Standard Gaussian in the field: real N(0,1) or circular complex with E|z|^2 = 1.
  template <Field S>
  S gaussian() {
    if constexpr (is_complex_v<S>) {
      return complex_normal();
    } else {
      return normal();
    }
  }

  template <Field S>
  Matrix<S> gaussian_matrix(Index rows, Index cols) {
    Matrix<S> m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = gaussian<S>();
    }
    return m;
  }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace frametight
