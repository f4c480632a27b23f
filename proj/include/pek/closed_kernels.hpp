// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pek/common.hpp"
#include "pek/contour.hpp"
#include "pek/ensemble.hpp"
#include "pek/linalg.hpp"
#include "pek/polynomial.hpp"
#include "pek/quadrature.hpp"
#include "pek/special_functions.hpp"
#include "pek/weighted_function.hpp"

namespace pek {

// Describes a chain of r independent rectangular factors applied to a source
// matrix: complex Gaussian factors for the ginibre family, truncated Haar
// unitary blocks for the truncated family.  The kernel builders below consume
// the pieces directly; this type exists so configurations can be validated
// and serialized in one place.
enum class ProductFamily { ginibre, truncated };
enum class ProductSource { identity, diagonal, ensemble };

struct ProductSpec {
  ProductFamily family = ProductFamily::ginibre;
  std::vector<int> nu;    // per-factor size offsets, innermost factor first
  std::vector<int> mu;    // per-factor truncation surpluses (truncated family)
  ProductSource source = ProductSource::identity;
  std::vector<double> a;  // diagonal source entries (diagonal source only)

  int r() const { return static_cast<int>(nu.size()); }

  void validate() const {
    if (nu.empty()) throw PreconditionError("ProductSpec: need at least one factor");
    for (int v : nu)
      if (v < 0) throw PreconditionError("ProductSpec: factor offsets must be nonnegative");
    if (family == ProductFamily::truncated) {
      if (mu.size() != nu.size())
        throw PreconditionError("ProductSpec: one truncation surplus per factor");
      for (int m : mu)
        if (m < 1) throw PreconditionError("ProductSpec: truncation surpluses must be >= 1");
    } else if (!mu.empty()) {
      throw PreconditionError("ProductSpec: surpluses only apply to the truncated family");
    }
    if (source == ProductSource::diagonal) {
      if (a.empty()) throw PreconditionError("ProductSpec: diagonal source needs entries");
      for (double v : a)
        if (!(v > 0.0))
          throw PreconditionError("ProductSpec: diagonal entries must be positive");
    } else if (!a.empty()) {
      throw PreconditionError("ProductSpec: entries only apply to the diagonal source");
    }
  }
};

namespace detail {

inline void check_factor_lists(const std::vector<int>& nu, const char* who) {
  if (nu.empty()) throw PreconditionError(std::string(who) + ": need at least one factor");
  for (int v : nu)
    if (v < 0) throw PreconditionError(std::string(who) + ": factor offsets must be nonnegative");
}

inline void check_surplus_list(const std::vector<int>& nu, const std::vector<int>& mu,
                               const char* who) {
  if (mu.size() != nu.size())
    throw PreconditionError(std::string(who) + ": one truncation surplus per factor");
  for (int m : mu)
    if (m < 1) throw PreconditionError(std::string(who) + ": truncation surpluses must be >= 1");
}

inline int surplus_total(const std::vector<int>& mu) {
  int s = 0;
  for (int m : mu) s += m;
  return s;
}

// Kernel values come out of conjugate-symmetric contours, so any imaginary
// part is pure quadrature residue.  Below 1e-9 it is dropped; anything larger
// is an alarm, never silently truncated.
inline double kernel_real_part(Complex v, const char* what) {
  if (!(std::abs(v.imag()) <= 1e-9 * (1.0 + std::abs(v.real())))) throw QuadratureError(what);
  return v.real();
}

inline Complex powi(Complex z, int k) {
  Complex out(1.0);
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

// Positively oriented axis-aligned ellipse, trapezoid in the angle.  The rule
// is spectrally accurate for integrands analytic in a neighbourhood of the
// curve, so doubling the count until two levels agree is cheap.
inline std::vector<QuadNode> ellipse_nodes(Complex center, double ra, double rb,
                                           std::size_t count) {
  std::vector<QuadNode> out(count);
  const double h = 2.0 * pi / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double th = h * static_cast<double>(i);
    out[i].s = center + Complex(ra * std::cos(th), rb * std::sin(th));
    out[i].w = Complex(-ra * std::sin(th), rb * std::cos(th)) * h;
  }
  return out;
}

template <class F>
Complex integrate_ellipse(F&& f, Complex center, double ra, double rb, double tol,
                          std::size_t start = 96, std::size_t cap = 6144) {
  auto level = [&](std::size_t m) {
    Complex acc(0.0);
    for (const QuadNode& q : ellipse_nodes(center, ra, rb, m)) acc += q.w * f(q.s);
    return acc;
  };
  Complex prev = level(start);
  for (std::size_t m = 2 * start; m <= cap; m *= 2) {
    const Complex cur = level(m);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw QuadratureError("integrate_ellipse: level doubling did not settle");
}

// Entire series sum_j z^j / prod_k (j + nu_k)!, the reproducing partner of
// the half-line product weight.  Complex argument, superexponential tail.
inline Complex product_chain_series(const std::vector<int>& nu, Complex z) {
  Complex term(1.0);
  for (int v : nu) term /= factorial(v);
  Complex sum = term;
  for (int j = 1; j <= 500; ++j) {
    double den = 1.0;
    for (int v : nu) den *= static_cast<double>(j + v);
    term *= z / den;
    sum += term;
    if (j > 4 && std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw QuadratureError("product_chain_series: series did not settle");
}

// Half-line product weight at complex argument.  One factor is the exact
// Gamma weight; more factors go through the defining vertical-line Mellin
// inversion, which converges while arg z stays inside the sector of width
// q*pi/2 on each side of the positive axis.
inline Complex product_chain_weight(const std::vector<int>& nu, Complex z) {
  const int q = static_cast<int>(nu.size());
  if (q == 1) return powi(z, nu[0]) * std::exp(-z);
  const double sector = 0.5 * pi * static_cast<double>(q) - std::abs(std::arg(z));
  if (sector < 0.35)
    throw QuadratureError("product_chain_weight: argument too close to the sector boundary");
  const double sigma = static_cast<double>(*std::min_element(nu.begin(), nu.end())) - 0.25;
  const double half_height = 12.0 + 36.0 / sector;
  const Complex lz = std::log(z);
  auto f = [&](Complex s) {
    Complex lg(0.0);
    for (int v : nu) lg += log_gamma(Complex(static_cast<double>(v)) - s);
    return std::exp(lg + s * lz);
  };
  const QuadratureResult r = integrate(f, Contour::vertical_line(sigma, half_height, 257), 1e-12);
  if (!r.converged)
    throw QuadratureError("product_chain_weight: line integral did not converge");
  return r.value / Complex(0.0, 2.0 * pi);
}

// Shared memo for weight values on a fixed contour; kernel evaluators hit the
// same nodes across quadrature levels, so this saves most Mellin inversions.
struct WeightMemo {
  std::mutex guard;
  std::map<std::pair<double, double>, Complex> values;
};

inline Complex memoized_chain_weight(const std::shared_ptr<WeightMemo>& memo,
                                     const std::vector<int>& nu, Complex z) {
  const std::pair<double, double> key(z.real(), z.imag());
  {
    std::lock_guard<std::mutex> lock(memo->guard);
    auto it = memo->values.find(key);
    if (it != memo->values.end()) return it->second;
  }
  const Complex v = product_chain_weight(nu, z);
  std::lock_guard<std::mutex> lock(memo->guard);
  memo->values.emplace(key, v);
  return v;
}

}  // namespace detail

// Hard-edge finite-n kernel of the squared singular values of a single
// complex Gaussian rectangular matrix, evaluated from its double contour
// form: a small circle around the origin in u against a circle around 1 in
// v, integrand exp(xu - yv) (v/u)^(n+nu) ((u-1)/(v-1))^n / (u-v).
inline CorrelationKernel wishart_kernel(int n, int nu) {
  if (n < 1) throw PreconditionError("wishart_kernel: n must be >= 1");
  if (nu < 0) throw PreconditionError("wishart_kernel: nu must be >= 0");
  const Contour sigma = Contour::circle(Complex(0.0), 0.3, 64);
  const Contour gamma = Contour::circle(Complex(1.0), 0.35, 64);
  auto eval = [n, nu, sigma, gamma](double x, double y) -> Complex {
    if (!(x > 0.0) || !(y > 0.0)) return Complex(0.0);
    auto f = [&](Complex u, Complex v) {
      return std::exp(x * u - y * v) * detail::powi(v / u, n + nu) *
             detail::powi((u - 1.0) / (v - 1.0), n) / (u - v);
    };
    const QuadratureResult r = integrate_double(f, sigma, gamma, 1e-10);
    if (!r.converged) throw QuadratureError("wishart_kernel: double integral did not converge");
    return Complex(detail::kernel_real_part(r.value / (-4.0 * pi * pi),
                                            "wishart_kernel: residual imaginary part"));
  };
  return CorrelationKernel(eval, n, Interval::half_line());
}

// Evaluation route for the Gaussian-chain product kernel.
//  mellin_line     pairs a vertical line against an ellipse around the
//                  integer residues; Gamma ratios keep every argument in the
//                  right half-plane, valid on the whole half-line.
//  source_circles  integrates the series/weight pair on two bounded circles
//                  around the source spectrum; an independent route intended
//                  for moderate arguments, where the entire series stays
//                  small enough not to cancel.
enum class GinibreKernelForm { mellin_line, source_circles };

namespace detail {

struct GammaRatioLineCache {
  std::vector<Complex> v;  // vertical line nodes
  std::vector<Complex> u;  // ellipse nodes
  ComplexMatrix coupling;  // weighted Gamma ratio / (v - u), row per v node
};

inline GammaRatioLineCache build_gamma_ratio_cache(int n, const std::vector<int>& nu,
                                                   double half_height, std::size_t line_count,
                                                   std::size_t ellipse_count) {
  GammaRatioLineCache c;
  const auto vn =
      Contour::vertical_line(-0.5, half_height, line_count).nodes_at(line_count);
  const auto un =
      ellipse_nodes(Complex(0.5 * static_cast<double>(n)), 0.5 * static_cast<double>(n) + 0.3,
                    0.5, ellipse_count);
  std::vector<Complex> a(vn.size()), b(un.size());
  c.v.resize(vn.size());
  c.u.resize(un.size());
  for (std::size_t i = 0; i < vn.size(); ++i) {
    const Complex v = vn[i].s;
    Complex lg(0.0);
    for (int j : nu) lg += log_gamma(v + static_cast<double>(j) + 1.0);
    Complex poles(1.0);
    for (int k = 0; k < n; ++k) poles *= v - static_cast<double>(k);
    c.v[i] = v;
    a[i] = vn[i].w * std::exp(lg) * poles;
  }
  for (std::size_t q = 0; q < un.size(); ++q) {
    const Complex u = un[q].s;
    Complex lg(0.0);
    for (int j : nu) lg += log_gamma(u + static_cast<double>(j) + 1.0);
    Complex poles(1.0);
    for (int k = 0; k < n; ++k) poles *= u - static_cast<double>(k);
    c.u[q] = u;
    b[q] = un[q].w * std::exp(-lg) / poles;
  }
  c.coupling.resize(static_cast<Eigen::Index>(vn.size()), static_cast<Eigen::Index>(un.size()));
  for (std::size_t i = 0; i < vn.size(); ++i)
    for (std::size_t q = 0; q < un.size(); ++q)
      c.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) =
          a[i] * b[q] / (c.v[i] - c.u[q]);
  return c;
}

inline Complex gamma_ratio_eval(const GammaRatioLineCache& c, double x, double y) {
  const double lx = std::log(x);
  const double ly = std::log(y);
  Eigen::VectorXcd xv(static_cast<Eigen::Index>(c.u.size()));
  Eigen::VectorXcd yv(static_cast<Eigen::Index>(c.v.size()));
  for (std::size_t q = 0; q < c.u.size(); ++q)
    xv(static_cast<Eigen::Index>(q)) = std::exp(c.u[q] * lx);
  for (std::size_t i = 0; i < c.v.size(); ++i)
    yv(static_cast<Eigen::Index>(i)) = std::exp(-(c.v[i] + 1.0) * ly);
  const Complex total = (yv.transpose() * c.coupling * xv)(0, 0);
  return total / (-4.0 * pi * pi);
}

}  // namespace detail

// Kernel of the squared singular values of a product of r independent
// rectangular complex Gaussian factors with size offsets nu.  r = 1 with
// offset nu reproduces wishart_kernel(n, nu) values exactly.
inline CorrelationKernel product_ginibre_kernel(
    int n, const std::vector<int>& nu,
    GinibreKernelForm form = GinibreKernelForm::mellin_line) {
  if (n < 1) throw PreconditionError("product_ginibre_kernel: n must be >= 1");
  detail::check_factor_lists(nu, "product_ginibre_kernel");
  const int r = static_cast<int>(nu.size());

  if (form == GinibreKernelForm::source_circles) {
    const Contour src = Contour::circle(Complex(0.0), 0.45, 64);
    const Contour spectrum = Contour::circle(Complex(1.0), 0.3, 64);
    auto memo = std::make_shared<detail::WeightMemo>();
    auto eval = [n, nu, src, spectrum, memo](double x, double y) -> Complex {
      if (!(x > 0.0) || !(y > 0.0)) return Complex(0.0);
      auto f = [&](Complex s, Complex u) {
        return detail::product_chain_series(nu, x / s) *
               detail::memoized_chain_weight(memo, nu, y / u) *
               detail::powi((s - 1.0) / (u - 1.0), n) / (s * u * (s - u));
      };
      const QuadratureResult res = integrate_double(f, src, spectrum, 1e-9);
      if (!res.converged)
        throw QuadratureError("product_ginibre_kernel: double integral did not converge");
      return Complex(detail::kernel_real_part(
          res.value / (-4.0 * pi * pi), "product_ginibre_kernel: residual imaginary part"));
    };
    return CorrelationKernel(eval, n, Interval::half_line());
  }

  int nu_total = 0;
  for (int v : nu) nu_total += v;
  const double half_height =
      14.0 + 26.0 / static_cast<double>(r) + 1.2 * static_cast<double>(n + nu_total);
  const auto coarse = detail::build_gamma_ratio_cache(n, nu, half_height, 1025, 128);
  auto fine = std::make_shared<detail::GammaRatioLineCache>(
      detail::build_gamma_ratio_cache(n, nu, half_height, 2049, 256));
  // Fixed node sets serve every evaluation, so drift between the two levels
  // at construction probes is a hard error rather than a wrong kernel.
  for (const auto& probe : {std::pair<double, double>{0.7, 1.3}, {2.2, 0.35}}) {
    const Complex kc = detail::gamma_ratio_eval(coarse, probe.first, probe.second);
    const Complex kf = detail::gamma_ratio_eval(*fine, probe.first, probe.second);
    if (!(std::abs(kc - kf) <= 1e-8 * std::max(1.0, std::abs(kf))))
      throw QuadratureError("product_ginibre_kernel: quadrature drift at construction probe");
  }
  auto eval = [fine](double x, double y) -> Complex {
    if (!(x > 0.0) || !(y > 0.0)) return Complex(0.0);
    return Complex(detail::kernel_real_part(
        detail::gamma_ratio_eval(*fine, x, y),
        "product_ginibre_kernel: residual imaginary part"));
  };
  return CorrelationKernel(eval, n, Interval::half_line());
}

// Kernel of the squared singular values of a Gaussian chain applied to a
// fixed positive diagonal source diag(sqrt(a)).  Coincident entries are
// allowed; the contour around the source spectrum absorbs them as higher
// order poles.  The inner contour around the origin is resolved exactly via
// the divided difference of the node polynomial, which removes the large
// cancelling series terms that a direct double quadrature would produce.
inline CorrelationKernel degenerate_ginibre_kernel(const std::vector<double>& a,
                                                   const std::vector<int>& nu) {
  if (a.empty()) throw PreconditionError("degenerate_ginibre_kernel: need source entries");
  for (double v : a)
    if (!(v > 0.0))
      throw PreconditionError("degenerate_ginibre_kernel: source entries must be positive");
  detail::check_factor_lists(nu, "degenerate_ginibre_kernel");
  const int n = static_cast<int>(a.size());

  const Polynomial node_poly = poly_from_roots(a);
  const std::vector<Complex> pc = node_poly.coeffs();  // monic, degree n
  std::vector<double> series_coeff(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    double denom = 1.0;
    for (int v : nu) denom *= factorial(static_cast<long>(m + v));
    series_coeff[static_cast<std::size_t>(m)] = 1.0 / denom;
  }
  const double a_min = *std::min_element(a.begin(), a.end());
  const double a_max = *std::max_element(a.begin(), a.end());
  const Complex center(0.5 * (a_min + a_max));
  const double radius = 0.5 * (a_max - a_min) + 0.4 * a_min;
  const Contour ring = Contour::circle(center, radius, 96);
  auto memo = std::make_shared<detail::WeightMemo>();

  auto eval = [n, nu, pc, series_coeff, ring, memo](double x, double y) -> Complex {
    if (!(x > 0.0) || !(y > 0.0)) return Complex(0.0);
    auto f = [&](Complex u) {
      std::vector<Complex> up(static_cast<std::size_t>(n));
      up[0] = Complex(1.0);
      for (int k = 1; k < n; ++k) up[static_cast<std::size_t>(k)] = up[static_cast<std::size_t>(k - 1)] * u;
      // divided difference coefficients of the node polynomial against u
      Complex acc(0.0);
      double xm = 1.0;
      for (int m = 0; m < n; ++m) {
        Complex q(0.0);
        for (int l = m + 1; l <= n; ++l)
          q += pc[static_cast<std::size_t>(l)] * up[static_cast<std::size_t>(l - 1 - m)];
        acc += series_coeff[static_cast<std::size_t>(m)] * xm * q;
        xm *= x;
      }
      Complex pu(0.0);
      for (int l = n; l >= 0; --l) pu = pu * u + pc[static_cast<std::size_t>(l)];
      return detail::memoized_chain_weight(memo, nu, y / u) * acc / (u * pu);
    };
    const QuadratureResult r = integrate(f, ring, 1e-10);
    if (!r.converged)
      throw QuadratureError("degenerate_ginibre_kernel: contour integral did not converge");
    return Complex(detail::kernel_real_part(
        r.value / Complex(0.0, 2.0 * pi), "degenerate_ginibre_kernel: residual imaginary part"));
  };
  return CorrelationKernel(eval, n, Interval::half_line());
}

namespace detail {

// Exact integer coefficients of the k-th monic-scaled polynomial of the
// truncated chain family: binomial alternating sum with rising factor
// products.  Accumulated in long double, exact up to 2^64.
inline Polynomial truncated_chain_poly(const std::vector<int>& nu, const std::vector<int>& mu,
                                       int k) {
  std::vector<Complex> c(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    long double val = 1.0L;
    for (int i = 1; i <= j; ++i)
      val = val * static_cast<long double>(k - j + i) / static_cast<long double>(i);
    for (std::size_t l = 0; l < nu.size(); ++l)
      for (int i = 1; i <= mu[l]; ++i)
        val *= static_cast<long double>(j + nu[l] + i);
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(j)] = Complex(sign * static_cast<double>(val));
  }
  return Polynomial(std::move(c));
}

// Dual function of the truncated chain family.  The defining integral is a
// rational Mellin inversion: all Gamma ratios collapse to finite linear
// factors, leaving integer poles at nu_l + i with multiplicity equal to the
// overlap between factors.  Residues come from small positively oriented
// circles, one per distinct pole, matching the line closed to the right.
// The circle radius shrinks as |log y| grows so the y^s samples stay within
// a fixed dynamic range; a fixed radius would drown deep-tail values in
// roundoff before the level ladder could settle.
inline std::function<double(double)> truncated_chain_dual(const std::vector<int>& nu,
                                                          const std::vector<int>& mu, int k) {
  std::vector<int> centers;
  for (std::size_t l = 0; l < nu.size(); ++l)
    for (int i = 0; i < mu[l]; ++i) centers.push_back(nu[l] + i);
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  const double scale = 1.0 / factorial(static_cast<long>(k));
  return [nu, mu, k, centers, scale](double y) -> double {
    if (!(y > 0.0) || y > 1.0) return 0.0;
    const double ln_y = std::log(y);
    const double radius = std::min(0.35, 0.45 / std::max(1.0, std::abs(ln_y)));
    auto f = [&](Complex s) {
      Complex num(1.0);
      for (int i = 1; i <= k; ++i) num *= -(s + static_cast<double>(i));
      Complex den(1.0);
      for (std::size_t l = 0; l < nu.size(); ++l)
        for (int i = 0; i < mu[l]; ++i) den *= Complex(static_cast<double>(nu[l] + i)) - s;
      return num * std::exp(s * ln_y) / den;
    };
    Complex total(0.0);
    for (int c : centers)
      total += integrate(f, Contour::circle(Complex(static_cast<double>(c)), radius, 32), 1e-13)
                   .value;
    return scale * kernel_real_part(-total / Complex(0.0, 2.0 * pi),
                                    "truncated chain dual: residual imaginary part");
  };
}

inline void check_truncated_chain(int n, const std::vector<int>& nu, const std::vector<int>& mu,
                                  const char* who) {
  if (n < 1) throw PreconditionError(std::string(who) + ": n must be >= 1");
  check_factor_lists(nu, who);
  check_surplus_list(nu, mu, who);
  if (n > surplus_total(mu))
    throw PreconditionError(
        std::string(who) +
        ": spectrum count exceeds the total truncation surplus, so the factor product "
        "deterministically keeps unit singular values and the squared singular values do not "
        "form a polynomial ensemble");
}

}  // namespace detail

// Biorthogonal pair for the squared singular values of a chain of truncated
// Haar unitary factors applied to the identity: exact integer polynomials
// against rational Mellin duals supported on [0, 1].  Requires the spectrum
// count not to exceed the total truncation surplus.
inline BiorthogonalSystem truncated_product_system(int n, const std::vector<int>& nu,
                                                   const std::vector<int>& mu) {
  detail::check_truncated_chain(n, nu, mu, "truncated_product_system");
  BiorthogonalSystem sys;
  sys.support = Interval::unit();
  for (int k = 0; k < n; ++k) {
    sys.P.push_back(detail::truncated_chain_poly(nu, mu, k));
    sys.Q.push_back(WeightedFunction(detail::truncated_chain_dual(nu, mu, k), Interval::unit(),
                                     "truncated chain dual"));
  }
  return sys;
}

// Evaluation route for the truncated chain kernel.
//  double_contour      keyhole around the negative poles against an ellipse
//                      around the nonnegative residues; arm length adapts to
//                      y so the algebraic tail is always resolved.
//  g_product_integral  single damped integral of the order-(n-1) polynomial
//                      against the order-n dual over the unit interval.
enum class TruncatedKernelForm { double_contour, g_product_integral };

inline CorrelationKernel truncated_product_kernel(
    int n, const std::vector<int>& nu, const std::vector<int>& mu,
    TruncatedKernelForm form = TruncatedKernelForm::double_contour) {
  detail::check_truncated_chain(n, nu, mu, "truncated_product_kernel");

  if (form == TruncatedKernelForm::g_product_integral) {
    const Polynomial lead = detail::truncated_chain_poly(nu, mu, n - 1);
    const auto dual = detail::truncated_chain_dual(nu, mu, n);
    auto eval = [n, lead, dual](double x, double y) -> Complex {
      if (!(x > 0.0) || !(y > 0.0) || !(y < 1.0)) return Complex(0.0);
      // substitute u = exp(-w); repeated dual poles contribute log u terms,
      // which the substitution turns into polynomial factors against e^-w
      auto f = [&](Complex w) {
        const double u = std::exp(-w.real());
        return Complex(lead.eval_real(u * x) * dual(u * y) * u);
      };
      const QuadratureResult r = integrate(f, Contour::half_line_laguerre(0.0, 128), 1e-9);
      if (!r.converged)
        throw QuadratureError("truncated_product_kernel: product integral did not converge");
      return Complex(-static_cast<double>(n) * r.value.real());
    };
    return CorrelationKernel(eval, n, Interval::unit());
  }

  auto eval = [n, nu, mu](double x, double y) -> Complex {
    if (!(x > 0.0) || !(y > 0.0) || !(y < 1.0)) return Complex(0.0);
    const double lx = std::log(x);
    const double ly = std::log(y);
    const double arm = std::max(60.0, 45.0 / std::abs(ly));
    const Contour keyhole = Contour::hankel(0.5, arm, 160, -1.0);
    // weighted residue vector of the left contour; the coupling to the right
    // contour is a single Cauchy factor, so the s discretization is settled
    // once at a probe point and then reused across the ellipse ladder
    auto left_weights = [&](std::size_t count) {
      const auto nodes = keyhole.nodes_at(count);
      std::vector<QuadNode> out(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Complex s = nodes[i].s;
        Complex num(1.0);
        for (int k = 0; k < n; ++k) num *= s - static_cast<double>(k);
        Complex den(1.0);
        for (std::size_t l = 0; l < nu.size(); ++l)
          for (int i2 = 0; i2 < mu[l]; ++i2)
            den *= s + 1.0 + static_cast<double>(nu[l] + i2);
        out[i].s = s;
        out[i].w = nodes[i].w * num / den * std::exp(-(s + 1.0) * ly);
      }
      return out;
    };
    auto couple = [](const std::vector<QuadNode>& lw, Complex t) {
      Complex acc(0.0);
      for (const QuadNode& q : lw) acc += q.w / (q.s - t);
      return acc;
    };
    // The arc pokes half a loop radius to the right of the branch point, so
    // the y power grows like exp(|log y| / 2) there and cancels back down in
    // the sum.  That cancellation sets a roundoff floor below which no node
    // count can push the level difference; the floor is tracked explicitly
    // so deep-tail arguments settle at their attainable accuracy.
    auto cancellation_floor = [](const std::vector<QuadNode>& lw, Complex t) {
      double tally = 0.0;
      for (const QuadNode& q : lw) tally += std::abs(q.w / (q.s - t));
      return 64.0 * std::numeric_limits<double>::epsilon() * tally;
    };
    const Complex probe_t = Complex(0.5 * static_cast<double>(n), 0.5);
    std::size_t count = 160;
    std::vector<QuadNode> lw = left_weights(count);
    Complex probe = couple(lw, probe_t);
    bool settled = false;
    while (2 * count <= 16384) {
      std::vector<QuadNode> lw2 = left_weights(2 * count);
      const Complex probe2 = couple(lw2, probe_t);
      const bool close =
          std::abs(probe2 - probe) <=
          std::max(1e-10 * std::max(1.0, std::abs(probe2)), cancellation_floor(lw2, probe_t));
      lw = std::move(lw2);
      probe = probe2;
      count *= 2;
      if (close) {
        settled = true;
        break;
      }
    }
    if (!settled)
      throw QuadratureError("truncated_product_kernel: keyhole discretization did not settle");
    auto outer = [&](Complex t) {
      Complex num(1.0);
      for (std::size_t l = 0; l < nu.size(); ++l)
        for (int i2 = 0; i2 < mu[l]; ++i2) num *= t + 1.0 + static_cast<double>(nu[l] + i2);
      Complex den(1.0);
      for (int k = 0; k < n; ++k) den *= t - static_cast<double>(k);
      return num / den * std::exp(t * lx) * couple(lw, t);
    };
    const Complex total = detail::integrate_ellipse(
        outer, Complex(0.5 * static_cast<double>(n)), 0.5 * static_cast<double>(n) + 0.25, 0.5,
        1e-9);
    return Complex(detail::kernel_real_part(
        total / (-4.0 * pi * pi), "truncated_product_kernel: residual imaginary part"));
  };
  return CorrelationKernel(eval, n, Interval::unit());
}

// Deterministic unit singular values of a truncated chain with spectrum count
// beyond the total surplus: the product of d-deficient truncations keeps at
// least n - sum(mu) singular values pinned at 1 in every realization.
struct RankAtOneReport {
  int guaranteed = 0;       // deterministic lower bound, clamped at zero
  int min_observed = 0;     // fewest unit singular values seen in any trial
  int max_observed = 0;
  std::vector<int> counts;  // per-trial unit singular value counts
  bool bound_met = false;   // every trial reached the guaranteed count
};

inline RankAtOneReport rank_at_one_check(int n, const std::vector<int>& nu,
                                         const std::vector<int>& mu, int trials,
                                         const RngStream& rng) {
  if (n < 1) throw PreconditionError("rank_at_one_check: n must be >= 1");
  if (trials < 1) throw PreconditionError("rank_at_one_check: need at least one trial");
  detail::check_factor_lists(nu, "rank_at_one_check");
  detail::check_surplus_list(nu, mu, "rank_at_one_check");
  const int r = static_cast<int>(nu.size());
  for (int j = 1; j < r; ++j)
    if (nu[static_cast<std::size_t>(j)] + mu[static_cast<std::size_t>(j)] <
        nu[static_cast<std::size_t>(j - 1)])
      throw PreconditionError("rank_at_one_check: factor sizes are not chain consistent");

  RankAtOneReport rep;
  rep.guaranteed = std::max(0, n - detail::surplus_total(mu));
  rep.counts.reserve(static_cast<std::size_t>(trials));
  rep.min_observed = n + 1;
  rep.max_observed = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream sub = rng.split(static_cast<std::uint64_t>(t));
    ComplexMatrix y = ComplexMatrix::Identity(n, n);
    int prev_offset = 0;
    for (int j = 0; j < r; ++j) {
      const int rows = n + nu[static_cast<std::size_t>(j)];
      const int full = rows + mu[static_cast<std::size_t>(j)];
      const ComplexMatrix u = sample_haar_unitary(full, sub);
      y = truncate(u, rows, n + prev_offset) * y;
      prev_offset = nu[static_cast<std::size_t>(j)];
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(y);
    int cnt = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (std::abs(svd.singularValues()(i) - 1.0) <= 1e-8) ++cnt;
    rep.counts.push_back(cnt);
    rep.min_observed = std::min(rep.min_observed, cnt);
    rep.max_observed = std::max(rep.max_observed, cnt);
  }
  rep.bound_met = rep.min_observed >= rep.guaranteed;
  return rep;
}

// Closed-form kernel selected by a validated product description.
inline CorrelationKernel product_kernel(const ProductSpec& spec, int n) {
  spec.validate();
  if (spec.family == ProductFamily::ginibre) {
    switch (spec.source) {
      case ProductSource::identity:
        return product_ginibre_kernel(n, spec.nu);
      case ProductSource::diagonal:
        if (static_cast<int>(spec.a.size()) != n)
          throw PreconditionError("product_kernel: diagonal source needs one entry per point");
        return degenerate_ginibre_kernel(spec.a, spec.nu);
      case ProductSource::ensemble:
        throw PreconditionError("product_kernel: ensemble sources go through the transform route");
    }
  }
  if (spec.source != ProductSource::identity)
    throw PreconditionError("product_kernel: truncated chains support the identity source only");
  return truncated_product_kernel(n, spec.nu, spec.mu, TruncatedKernelForm::double_contour);
}

}  // namespace pek
