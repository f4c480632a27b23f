// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

// Scalar special functions: principal-branch log-Gamma on the right half
// plane, generalized hypergeometric series, and the four Meijer G parameter
// classes used by the product and truncation transforms.  Each G class has a
// dedicated evaluation path (closed form, terminating/convergent series,
// residue sum, or Mellin-Barnes line quadrature); a general-purpose Meijer G
// evaluator is out of scope.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "pek/common.hpp"
#include "pek/contour.hpp"
#include "pek/quadrature.hpp"

namespace pek {

// Principal-branch log Gamma, restricted to Re z > 0.  The argument is
// raised by the recurrence until |z| >= 10 and finished with a Stirling
// series; every subtracted log has Re > 0, so no branch crossings occur.
inline Complex log_gamma(Complex z) {
  if (std::abs(z.imag()) < 1e-12) {
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z.real() - nearest) < 1e-12)
      throw PreconditionError("log_gamma: pole at nonpositive integer");
  }
  if (!(z.real() > 0.0)) throw PreconditionError("log_gamma: requires Re z > 0");
  Complex shift(0.0);
  while (std::abs(z) < 10.0) {
    shift += std::log(z);
    z += 1.0;
  }
  // B_{2k} / (2k (2k-1)) for k = 1..8; the first omitted term is below
  // 2e-18 relative once |z| >= 10.
  static constexpr double kStirling[8] = {
      1.0 / 12.0,   -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0, -691.0 / 360360.0,  1.0 / 156.0,  -3617.0 / 122400.0};
  const Complex u = 1.0 / (z * z);
  Complex tail = kStirling[7];
  for (int k = 6; k >= 0; --k) tail = tail * u + kStirling[k];
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + tail / z - shift;
}

struct HypergeometricSpec {
  std::vector<double> upper;
  std::vector<double> lower;
  std::size_t truncation_cap = 500;
};

// Power series sum_k [prod (upper_i)_k / prod (lower_i)_k] x^k / k!.
// Stops early when an upper parameter terminates the series or once
// |term| < 1e-16 |sum|.  Twenty consecutive growing terms, or reaching the
// cap without convergence, raise an alarm.
inline Complex hyper_pfq(const HypergeometricSpec& spec, Complex x) {
  Complex term(1.0), sum(1.0);
  double prev_mag = 1.0;
  int growing = 0;
  for (std::size_t k = 0; k < spec.truncation_cap; ++k) {
    const double kk = static_cast<double>(k);
    double num = 1.0;
    double den = kk + 1.0;
    for (double a : spec.upper) num *= a + kk;
    if (num == 0.0) return sum;
    for (double b : spec.lower) den *= b + kk;
    if (den == 0.0)
      throw PreconditionError("hyper_pfq: lower parameter reached a nonpositive integer");
    term *= x * (num / den);
    sum += term;
    const double mag = std::abs(term);
    if (mag < 1e-16 * std::abs(sum)) return sum;
    if (mag > prev_mag) {
      if (++growing >= 20) throw QuadratureError("hyper_pfq: series diverging");
    } else {
      growing = 0;
    }
    prev_mag = mag;
  }
  throw QuadratureError("hyper_pfq: truncation cap reached before convergence");
}

// Meijer G parameter set in the standard (a_1..a_p; b_1..b_q) layout with
// numerator groups of sizes m (from b) and n (from a).
struct MeijerGSpec {
  int m = 0;
  int n = 0;
  int p = 0;
  int q = 0;
  std::vector<double> a;
  std::vector<double> b;
};

// The four supported parameter classes.
//   weight_halfline      G^{q,0}_{0,q}: density on (0,inf), Gamma-type decay
//   series_entire        G^{1,1}_{1,q}: entire reciprocal-factorial series
//   weight_unit_interval G^{q,0}_{q,q}: density supported on [0,1]
//   series_unit_disk     G^{1,q}_{q,q}: power series convergent for |x| < 1
enum class MeijerClass { weight_halfline, series_entire, weight_unit_interval, series_unit_disk };

inline MeijerClass classify(const MeijerGSpec& s) {
  if (s.p < 0 || s.q < 0 || s.m < 0 || s.n < 0 || s.m > s.q || s.n > s.p ||
      s.a.size() != static_cast<std::size_t>(s.p) ||
      s.b.size() != static_cast<std::size_t>(s.q))
    throw PreconditionError("meijer_g: malformed parameter spec");
  if (s.n == 0 && s.p == 0 && s.m == s.q && s.q >= 1) return MeijerClass::weight_halfline;
  if (s.m == 1 && s.n == 1 && s.p == 1 && s.q >= 2) return MeijerClass::series_entire;
  if (s.n == 0 && s.p == s.q && s.m == s.q && s.q >= 1) {
    for (int j = 0; j < s.p; ++j) {
      const double gap = s.a[j] - s.b[j];
      if (!(gap > 0.0) || std::abs(gap - std::round(gap)) > 1e-12)
        throw PreconditionError("meijer_g: unsupported parameter class");
    }
    return MeijerClass::weight_unit_interval;
  }
  if (s.m == 1 && s.n == s.p && s.p == s.q && s.q >= 2) return MeijerClass::series_unit_disk;
  throw PreconditionError("meijer_g: unsupported parameter class");
}

// Value of the upward Mellin-Barnes line integral (1/2 pi i) int f(s) ds for
// an integrand whose only singularities to the right of the line are the
// given poles, closed to the right: minus the sum of the enclosed residues.
// Residues are extracted by small positively oriented circles, so coincident
// or clustered poles (higher multiplicities) need no separate handling.
template <typename F>
Complex mellin_barnes_by_residues(F&& f, std::vector<double> poles) {
  if (poles.empty()) return Complex(0.0);
  std::sort(poles.begin(), poles.end());
  std::vector<double> centers;
  for (double pv : poles)
    if (centers.empty() || pv - centers.back() > 1e-9) centers.push_back(pv);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < centers.size(); ++i)
    min_gap = std::min(min_gap, centers[i] - centers[i - 1]);
  const double radius = std::min(0.35, 0.45 * min_gap);
  Complex total(0.0);
  for (double c : centers) {
    auto r = integrate(f, Contour::circle(Complex(c), radius, 32), 1e-13);
    total += r.value;
  }
  return -total / Complex(0.0, 2.0 * pi);
}

namespace detail {

inline double real_with_alarm(Complex v, const char* what) {
  if (!(std::abs(v.imag()) <= 1e-8 * (1.0 + std::abs(v.real()))))
    throw QuadratureError(what);
  return v.real();
}

// G^{q,0}_{0,q}(-; b | x).  q = 1 is the exact Gamma weight x^b e^{-x}; for
// q >= 2 the defining line integral of prod Gamma(b_j - s) x^s is evaluated
// directly.  The integrand decays like exp(-q pi |Im s| / 2), so a modest
// truncation height suffices.
inline double meijer_weight_halfline(const MeijerGSpec& s, double x) {
  if (s.q == 1) return std::pow(x, s.b[0]) * std::exp(-x);
  // Keep the line close to the first pole: the integrand scale is x^sigma,
  // so a smaller offset limits cancellation when x is far below 1.
  const double sigma = *std::min_element(s.b.begin(), s.b.end()) - 0.25;
  const double half_height = 12.0 + 30.0 / static_cast<double>(s.q);
  const double log_x = std::log(x);
  auto f = [&](Complex sv) {
    Complex lg(0.0);
    for (double bj : s.b) lg += log_gamma(bj - sv);
    return std::exp(lg + sv * log_x);
  };
  auto r = integrate(f, Contour::vertical_line(sigma, half_height, 257), 1e-12);
  if (!r.converged)
    throw QuadratureError("meijer_g: Mellin-Barnes line integral did not converge");
  return real_with_alarm(r.value / Complex(0.0, 2.0 * pi),
                         "meijer_g: residual imaginary part");
}

// Series classes share one reduction: residues of Gamma(b_1 - s) at
// s = b_1 + k turn the line integral into
//   x^{b_1} sum_k [prod_j Gamma(1 - a_j + b_1 + k) /
//                  (k! prod_{j>=2} Gamma(1 - b_j + b_1 + k))] (-x)^k,
// a pFq series with unit leading term pulled out front.
inline double meijer_series(const MeijerGSpec& s, double x, bool unit_disk_only) {
  if (unit_disk_only && !(x < 1.0))
    throw PreconditionError("meijer_g: this class requires 0 < x < 1");
  const double b1 = s.b[0];
  double prefactor = std::pow(x, b1);
  HypergeometricSpec h;
  for (double aj : s.a) {
    const double arg = 1.0 - aj + b1;
    prefactor *= std::tgamma(arg);
    h.upper.push_back(arg);
  }
  for (int j = 1; j < s.q; ++j) {
    const double arg = 1.0 - s.b[j] + b1;
    prefactor /= std::tgamma(arg);
    h.lower.push_back(arg);
  }
  if (!std::isfinite(prefactor))
    throw PreconditionError("meijer_g: unsupported parameter class");
  return prefactor * hyper_pfq(h, Complex(-x)).real();
}

// G^{q,0}_{q,q}(a; b | x) with every a_j - b_j a positive integer: the
// integrand prod Gamma(b_j - s)/Gamma(a_j - s) x^s is rational in s with
// finitely many poles, all to the right of the line.  Supported on [0,1].
inline double meijer_weight_unit_interval(const MeijerGSpec& s, double x) {
  if (x > 1.0) return 0.0;
  std::vector<double> poles;
  std::vector<int> gaps(s.p);
  for (int j = 0; j < s.p; ++j) {
    gaps[j] = static_cast<int>(std::lround(s.a[j] - s.b[j]));
    for (int i = 0; i < gaps[j]; ++i) poles.push_back(s.b[j] + i);
  }
  const double log_x = std::log(x);
  auto f = [&](Complex sv) {
    Complex den(1.0);
    for (int j = 0; j < s.p; ++j)
      for (int i = 0; i < gaps[j]; ++i) den *= s.b[j] + i - sv;
    return std::exp(sv * log_x) / den;
  };
  return real_with_alarm(mellin_barnes_by_residues(f, std::move(poles)),
                         "meijer_g: residual imaginary part");
}

}  // namespace detail

// Evaluates the supported Meijer G classes at positive real argument.
inline double meijer_g(const MeijerGSpec& spec, double x) {
  if (!(x > 0.0)) throw PreconditionError("meijer_g: argument must be positive");
  switch (classify(spec)) {
    case MeijerClass::weight_halfline:
      return detail::meijer_weight_halfline(spec, x);
    case MeijerClass::series_entire:
      return detail::meijer_series(spec, x, false);
    case MeijerClass::weight_unit_interval:
      return detail::meijer_weight_unit_interval(spec, x);
    case MeijerClass::series_unit_disk:
      return detail::meijer_series(spec, x, true);
  }
  throw PreconditionError("meijer_g: unsupported parameter class");
}

}  // namespace pek
