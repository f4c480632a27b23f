// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pek {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Error hierarchy; the CLI maps each class to a distinct exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StatTestFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed real interval, possibly unbounded on either side.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

  static Interval real_line() { return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}; }
  static Interval half_line() { return {0.0, std::numeric_limits<double>::infinity()}; }
  static Interval unit() { return {0.0, 1.0}; }
};

// Exact factorials up to 170! fit in double; arguments stay far below that here.
inline double factorial(long n) {
  if (n < 0) throw PreconditionError("factorial: negative argument");
  double r = 1.0;
  for (long k = 2; k <= n; ++k) r *= static_cast<double>(k);
  return r;
}

inline double ln_factorial(long n) {
  if (n < 0) throw PreconditionError("ln_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double binomial(long n, long k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (long j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return r;
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Seeded random stream. split(worker) derives an independent substream as a
// pure function of (base seed, worker index), so parallel sampling is
// reproducible regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : base_seed_(seed), gen_(detail::splitmix64(seed)) {}

  RngStream split(std::uint64_t worker) const {
    std::uint64_t mixed = detail::splitmix64(base_seed_ ^ detail::splitmix64(worker + 0x632be59bd9b4e019ULL));
    return RngStream(mixed);
  }

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }

  // Standard complex normal: E|z|^2 = 1, variance 1/2 per real component.
  Complex cnormal() {
    const double inv_sqrt2 = 0.70710678118654752440;
    return Complex(normal_(gen_) * inv_sqrt2, normal_(gen_) * inv_sqrt2);
  }

  std::uint64_t raw() { return gen_(); }
  std::uint64_t base_seed() const { return base_seed_; }

 private:
  std::uint64_t base_seed_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace pek
