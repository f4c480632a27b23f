// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

// Ensemble transforms: additive Gaussian convolution and multiplicative
// Mellin convolution against a fixed multiplier density.  Every transform
// acts in three coordinated ways: on joint densities, on biorthogonal
// systems, and on correlation kernels; the three routes are cross-checked
// against each other in the test suite.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pek/common.hpp"
#include "pek/contour.hpp"
#include "pek/ensemble.hpp"
#include "pek/orthopoly.hpp"
#include "pek/polynomial.hpp"
#include "pek/quadrature.hpp"
#include "pek/special_functions.hpp"
#include "pek/weighted_function.hpp"

namespace pek {

// Reciprocal moments of a multiplier density: entry j is the inverse of its
// j-th moment.  Backed by a generator so the sequence extends on demand;
// entries must be positive and finite.
class MomentSequence {
 public:
  explicit MomentSequence(std::function<double(int)> generator) : gen_(std::move(generator)) {
    if (!gen_) throw PreconditionError("MomentSequence: missing generator");
  }

  static MomentSequence from_values(std::vector<double> values) {
    auto stored = std::make_shared<std::vector<double>>(std::move(values));
    return MomentSequence([stored](int j) -> double {
      if (j >= static_cast<int>(stored->size()))
        throw PreconditionError("MomentSequence: index beyond the stored values");
      return (*stored)[static_cast<std::size_t>(j)];
    });
  }

  double at(int j) const {
    if (j < 0) throw PreconditionError("MomentSequence: negative index");
    const double v = gen_(j);
    if (!(v > 0.0) || !std::isfinite(v))
      throw PreconditionError("MomentSequence: entries must be positive and finite");
    return v;
  }

 private:
  std::function<double(int)> gen_;
};

// Laurent series sum_{j >= j_min} c_j x^j convergent on the annulus
// inner < |x| < outer.  Coefficients below j_min are zero.
class LaurentSeries {
 public:
  LaurentSeries(int j_min, std::function<double(int)> coefficient, double inner_radius,
                double outer_radius)
      : j_min_(j_min),
        coeff_(std::move(coefficient)),
        inner_(inner_radius),
        outer_(outer_radius) {
    if (!coeff_) throw PreconditionError("LaurentSeries: missing coefficient generator");
    if (!(inner_ >= 0.0) || !(outer_ > inner_))
      throw PreconditionError("LaurentSeries: empty convergence annulus");
  }

  int j_min() const { return j_min_; }
  double inner_radius() const { return inner_; }
  double outer_radius() const { return outer_; }

  double coefficient(int j) const { return j < j_min_ ? 0.0 : coeff_(j); }

  Complex operator()(Complex x) const {
    const double r = std::abs(x);
    if (!(r > inner_) || !(r < outer_))
      throw PreconditionError("LaurentSeries: argument outside the convergence annulus");
    Complex sum(0.0);
    Complex pw = std::pow(x, j_min_);
    int settled = 0;
    for (int j = j_min_; j < j_min_ + static_cast<int>(kTermCap); ++j) {
      const Complex term = coeff_(j) * pw;
      sum += term;
      pw *= x;
      if (j >= j_min_ + 8 && std::abs(term) <= 1e-17 * std::abs(sum)) {
        if (++settled >= 2) return sum;
      } else {
        settled = 0;
      }
    }
    throw QuadratureError("LaurentSeries: series did not settle within the term cap");
  }

  static constexpr std::size_t kTermCap = 500;

 private:
  int j_min_;
  std::function<double(int)> coeff_;
  double inner_;
  double outer_;
};

enum class TransformKind { gue_add, ginibre, truncated, general };

// Tolerances and truncation hints for Mellin convolution quadrature.  The
// cutoffs mark where each factor has decayed below roundoff relevance; a
// truncated edge whose integrand is not negligible raises an alarm instead
// of returning a silently windowed value.
struct MellinOptions {
  double tol = 1e-11;
  double f_cutoff = 250.0;
  double phi_cutoff = 250.0;
};

// One ensemble transform.  The additive kind carries no payload; the
// multiplicative kinds carry the multiplier density phi, its reciprocal
// moments, and the matching Laurent symbol psi used by contour routes.
class TransformSpec {
 public:
  static TransformSpec gue_add() { return TransformSpec(TransformKind::gue_add); }

  static TransformSpec ginibre(int nu) {
    if (nu < 0) throw PreconditionError("TransformSpec: ginibre nu must be >= 0");
    TransformSpec s(TransformKind::ginibre);
    s.nu_ = nu;
    s.phi_ = WeightedFunction(
        [nu](double t) { return std::pow(t, nu) * std::exp(-t); }, Interval::half_line(),
        "gamma-weight");
    s.b_.emplace([nu](int j) { return std::exp(-ln_factorial(j + nu)); });
    // psi(s) = s^{-nu} e^s written out coefficient-wise.
    s.psi_.emplace(-nu, [nu](int j) { return std::exp(-ln_factorial(j + nu)); }, 0.0,
                   std::numeric_limits<double>::infinity());
    s.radius_ = 1.0;
    s.phi_cutoff_ = 60.0 + 12.0 * nu;
    return s;
  }

  static TransformSpec truncated(int nu, int mu) {
    if (nu < 0) throw PreconditionError("TransformSpec: truncated nu must be >= 0");
    if (mu < 1) throw PreconditionError("TransformSpec: truncated mu must be >= 1");
    TransformSpec s(TransformKind::truncated);
    s.nu_ = nu;
    s.mu_ = mu;
    s.phi_ = WeightedFunction(
        [nu, mu](double t) { return std::pow(t, nu) * std::pow(1.0 - t, mu - 1); },
        Interval::unit(), "beta-weight");
    auto ratio = [nu, mu](int j) {
      double v = 1.0;
      for (int i = 1; i <= mu; ++i) v *= static_cast<double>(j + nu + i);
      return v / factorial(mu - 1);
    };
    s.b_.emplace(ratio);
    // psi(s) = mu s^{-nu} (1-s)^{-mu-1}; the binomial expansion reproduces
    // the same coefficient formula down to j = -nu.
    s.psi_.emplace(-nu, ratio, 0.0, 1.0);
    s.radius_ = 0.5;
    s.phi_cutoff_ = 1.0;
    return s;
  }

  // General multiplicative pair.  tail_power r hints that phi decays like
  // exp(-r t^(1/r)), so half-line quadrature substitutes t = u^r.  A
  // nonpositive phi_cutoff selects the support end when finite, else a
  // generic Gamma-type cutoff.
  static TransformSpec general(WeightedFunction phi, MomentSequence b, LaurentSeries psi,
                               int tail_power = 1, double phi_cutoff = 0.0) {
    if (!phi.valid()) throw PreconditionError("TransformSpec: invalid multiplier density");
    if (phi.support().lo < 0.0)
      throw PreconditionError("TransformSpec: multiplier support must lie in [0, inf)");
    if (tail_power < 1) throw PreconditionError("TransformSpec: tail power must be >= 1");
    for (int j = 0; j < 6; ++j) {
      const double bj = b.at(j);
      if (std::abs(psi.coefficient(j) - bj) > 1e-9 * bj)
        throw PreconditionError(
            "TransformSpec: Laurent coefficients disagree with the moment sequence");
    }
    TransformSpec s(TransformKind::general);
    s.phi_ = std::move(phi);
    s.b_ = std::move(b);
    s.psi_ = std::move(psi);
    s.tail_power_ = tail_power;
    const double hi = s.phi_.support().hi;
    s.phi_cutoff_ = phi_cutoff > 0.0 ? phi_cutoff : (std::isfinite(hi) ? hi : 250.0);
    const double outer = s.psi_->outer_radius();
    s.radius_ = std::isfinite(outer) ? 0.5 * (s.psi_->inner_radius() + outer)
                                     : std::max(1.0, 2.0 * s.psi_->inner_radius());
    return s;
  }

  TransformKind kind() const { return kind_; }
  bool additive() const { return kind_ == TransformKind::gue_add; }

  int nu() const {
    require_single();
    return nu_;
  }

  int mu() const {
    if (kind_ != TransformKind::truncated)
      throw PreconditionError("TransformSpec: mu is only defined for the truncated kind");
    return mu_;
  }

  const WeightedFunction& phi() const {
    require_multiplicative();
    return phi_;
  }

  const MomentSequence& moments() const {
    require_multiplicative();
    return *b_;
  }

  const LaurentSeries& psi() const {
    require_multiplicative();
    return *psi_;
  }

  double contour_radius() const {
    require_multiplicative();
    return radius_;
  }

  int tail_power() const { return tail_power_; }

  double phi_cutoff() const {
    require_multiplicative();
    return phi_cutoff_;
  }

  MellinOptions mellin_options() const { return MellinOptions{1e-11, 250.0, phi_cutoff()}; }

 private:
  explicit TransformSpec(TransformKind k) : kind_(k) {}

  void require_multiplicative() const {
    if (additive())
      throw PreconditionError("TransformSpec: additive transform carries no multiplier data");
  }

  void require_single() const {
    if (kind_ != TransformKind::ginibre && kind_ != TransformKind::truncated)
      throw PreconditionError("TransformSpec: parameter defined only for single multiplier kinds");
  }

  TransformKind kind_;
  int nu_ = 0;
  int mu_ = 0;
  WeightedFunction phi_;
  std::optional<MomentSequence> b_;
  std::optional<LaurentSeries> psi_;
  double radius_ = 1.0;
  int tail_power_ = 1;
  double phi_cutoff_ = 250.0;
};

// F(y) = int phi(t) f(y/t) dt/t on the log axis, where the measure dt/t is
// flat: F(y) = int phi(e^w) f(y e^{-w}) dw.  The window combines both
// supports with the decay cutoffs; the left edge is clamped 26 decades below
// the right so a divergent left end cannot stall the ladder, and truncated
// edges are re-checked for negligibility afterwards.
inline WeightedFunction mellin_convolve(const WeightedFunction& f, const WeightedFunction& phi,
                                        MellinOptions opts = {}) {
  if (!f.valid() || !phi.valid())
    throw PreconditionError("mellin_convolve: invalid factor");
  if (f.support().lo < 0.0 || phi.support().lo < 0.0)
    throw PreconditionError("mellin_convolve: factors must be supported in [0, inf)");

  auto eval = [f, phi, opts](double y) -> double {
    if (!(y >= 0.0)) return 0.0;
    const Interval fs = f.support();
    const Interval ps = phi.support();
    const double uf = std::min(fs.hi, opts.f_cutoff);
    const double t_hi = std::min(ps.hi, opts.phi_cutoff);
    double t_lo = std::max(ps.lo, y / uf);
    const double clamp = t_hi * 1e-26;
    const bool clamped = t_lo < clamp;
    if (clamped) t_lo = clamp;
    if (!(t_lo < t_hi)) return 0.0;

    const double w0 = std::log(t_lo), w1 = std::log(t_hi);
    auto integrand = [&](Complex w) {
      const double t = std::exp(w.real());
      return Complex(phi(t) * f(y / t), 0.0);
    };
    const Contour path = Contour::polyline({Complex(w0, 0.0), Complex(w1, 0.0)}, 64);
    const QuadratureResult r = integrate(integrand, path, opts.tol);
    if (!r.converged) throw QuadratureError("mellin_convolve: integral did not converge");

    const double scale = std::max(1.0, std::abs(r.value));
    auto edge_negligible = [&](double t_edge) {
      const double mass = std::abs(phi(t_edge) * f(y / t_edge)) * (w1 - w0);
      return mass <= 1e3 * opts.tol * scale;
    };
    const bool lo_truncated = clamped || (t_lo == y / uf && uf < fs.hi);
    if (lo_truncated && !edge_negligible(t_lo))
      throw QuadratureError("mellin_convolve: integrand not negligible at the lower cutoff");
    if (t_hi < ps.hi && !edge_negligible(t_hi))
      throw QuadratureError("mellin_convolve: integrand not negligible at the upper cutoff");
    return r.value.real();
  };

  Interval out = Interval::half_line();
  if (std::isfinite(f.support().hi) && std::isfinite(phi.support().hi))
    out.hi = f.support().hi * phi.support().hi;
  return WeightedFunction(eval, out, "mellin");
}

// Exact image of an atomic measure under the same convolution: an atom of
// weight w at location a contributes w phi(y/a) / a.
inline WeightedFunction mellin_convolve(const AtomicMeasureRow& atoms,
                                        const WeightedFunction& phi) {
  if (!phi.valid()) throw PreconditionError("mellin_convolve: invalid multiplier");
  double loc_max = 0.0;
  for (const auto& at : atoms.atoms) {
    if (!(at.location > 0.0))
      throw PreconditionError("mellin_convolve: atoms must sit at positive locations");
    loc_max = std::max(loc_max, at.location);
  }
  auto eval = [atoms, phi](double y) {
    double acc = 0.0;
    for (const auto& at : atoms.atoms) acc += at.weight * phi(y / at.location) / at.location;
    return acc;
  };
  Interval out = Interval::half_line();
  if (std::isfinite(phi.support().hi)) out.hi = loc_max * phi.support().hi;
  return WeightedFunction(eval, out, "mellin-atomic");
}

// Coefficient reweighting sum a_j x^j -> sum a_j b_j x^j.  Touches only the
// entries with j <= deg p, so any extension of b beyond that is inert.
inline Polynomial op_L(const Polynomial& p, const MomentSequence& b) {
  std::vector<Complex> c(p.coeffs());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= b.at(static_cast<int>(j));
  return Polynomial(std::move(c));
}

// Contour route for the same reweighting: P(x) = (1/2 pi i) oint psi(s)
// p(x/s) ds/s, recovered as a polynomial by evaluation at Chebyshev points
// and interpolation.  Agreement with op_L validates the Laurent symbol.
inline Polynomial op_L_contour(const Polynomial& p, const LaurentSeries& psi,
                               const Contour& sigma, double tol = 1e-11) {
  if (p.is_zero()) return Polynomial();
  for (const QuadNode& nd : sigma.nodes()) {
    const double r = std::abs(nd.s);
    if (!(r > psi.inner_radius()) || !(r < psi.outer_radius()))
      throw PreconditionError("op_L_contour: contour leaves the convergence annulus");
  }
  const int d = p.degree();
  const int m = d + 1;
  Eigen::MatrixXcd vander(m, m);
  Eigen::VectorXcd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double xi = m == 1 ? 1.0 : 2.0 * std::cos(pi * (i + 0.5) / m);
    auto f = [&](Complex s) { return psi(s) * p(Complex(xi, 0.0) / s) / s; };
    const QuadratureResult r = integrate(f, sigma, tol);
    if (!r.converged)
      throw QuadratureError("op_L_contour: contour integral did not converge");
    rhs(i) = r.value / Complex(0.0, 2.0 * pi);
    Complex pw(1.0);
    for (int j = 0; j < m; ++j) {
      vander(i, j) = pw;
      pw *= Complex(xi, 0.0);
    }
  }
  const Eigen::VectorXcd c = vander.colPivHouseholderQr().solve(rhs);
  return Polynomial(std::vector<Complex>(c.data(), c.data() + m));
}

// Closed form for the inverse Gaussian smoothing on polynomials: the
// preimage of x^k is the degree-k monic Hermite polynomial, so the map
// substitutes coefficient-wise and sends monic to monic of equal degree.
inline Polynomial inv_weierstrass(const Polynomial& p) {
  Polynomial out;
  for (int k = 0; k <= p.degree(); ++k) out += p.coeff(k) * hermite_monic(k);
  return out;
}

// Gaussian smoothing (1/sqrt(2 pi)) int q(t) exp(-(y-t)^2/2) dt.  The +-14
// window around y keeps the dropped Gaussian tail below 1e-42.
inline WeightedFunction weierstrass(const WeightedFunction& q, double tol = 1e-11) {
  if (!q.valid()) throw PreconditionError("weierstrass: invalid input");
  auto eval = [q, tol](double y) -> double {
    const Interval s = q.support();
    const double a = std::max(s.lo, y - 14.0);
    const double b = std::min(s.hi, y + 14.0);
    if (!(a < b)) return 0.0;
    auto f = [&](Complex w) {
      const double t = w.real();
      const double d = y - t;
      return Complex(q(t) * std::exp(-0.5 * d * d), 0.0);
    };
    const Contour seg = Contour::polyline({Complex(a, 0.0), Complex(b, 0.0)}, 64);
    const QuadratureResult r = integrate(f, seg, tol);
    if (!r.converged) throw QuadratureError("weierstrass: integral did not converge");
    return r.value.real() / std::sqrt(2.0 * pi);
  };
  return WeightedFunction(eval, Interval::real_line(), "weierstrass");
}

// Exact Gaussian smoothing of an atomic measure.
inline WeightedFunction weierstrass(const AtomicMeasureRow& atoms) {
  auto eval = [atoms](double y) {
    double acc = 0.0;
    for (const auto& at : atoms.atoms) {
      const double d = y - at.location;
      acc += at.weight * std::exp(-0.5 * d * d);
    }
    return acc / std::sqrt(2.0 * pi);
  };
  return WeightedFunction(eval, Interval::real_line(), "weierstrass-atomic");
}

// Transforms a biorthogonal system: polynomials go through the closed
// coefficient route, dual rows through the matching integral transform.
// Biorthogonality is preserved exactly in principle and within quadrature
// tolerance in practice.
inline BiorthogonalSystem transform_system(const BiorthogonalSystem& sys,
                                           const TransformSpec& spec) {
  if (sys.P.size() != sys.Q.size())
    throw PreconditionError("transform_system: mismatched list lengths");
  BiorthogonalSystem out;
  if (spec.additive()) {
    for (const Polynomial& p : sys.P) {
      if (p.max_imag_coeff() > 1e-12)
        throw PreconditionError("transform_system: additive route needs real coefficients");
      out.P.push_back(inv_weierstrass(p));
    }
    for (const DualRow& row : sys.Q) {
      if (std::holds_alternative<WeightedFunction>(row))
        out.Q.emplace_back(weierstrass(std::get<WeightedFunction>(row)));
      else
        out.Q.emplace_back(weierstrass(std::get<AtomicMeasureRow>(row)));
    }
    out.support = Interval::real_line();
    return out;
  }

  if (sys.support.lo < 0.0)
    throw PreconditionError("transform_system: multiplicative route needs support in [0, inf)");
  const MellinOptions opts = spec.mellin_options();
  for (const Polynomial& p : sys.P) out.P.push_back(op_L(p, spec.moments()));
  for (const DualRow& row : sys.Q) {
    if (std::holds_alternative<WeightedFunction>(row))
      out.Q.emplace_back(mellin_convolve(std::get<WeightedFunction>(row), spec.phi(), opts));
    else
      out.Q.emplace_back(mellin_convolve(std::get<AtomicMeasureRow>(row), spec.phi()));
  }
  out.support = Interval::half_line();
  if (std::isfinite(sys.support.hi) && std::isfinite(spec.phi().support().hi))
    out.support.hi = sys.support.hi * spec.phi().support().hi;
  return out;
}

// Transforms the joint density description: each row function is smoothed
// (additive) or Mellin-convolved (multiplicative).  The new normalization
// constant is left unknown.
inline PolynomialEnsemble transformed_density(const PolynomialEnsemble& ens,
                                              const TransformSpec& spec) {
  PolynomialEnsemble out;
  out.n = ens.n;
  out.z = std::numeric_limits<double>::quiet_NaN();
  if (spec.additive()) {
    for (const WeightedFunction& fk : ens.f) out.f.push_back(weierstrass(fk));
    out.support = Interval::real_line();
    return out;
  }
  if (ens.support.lo < 0.0)
    throw PreconditionError("transformed_density: multiplicative route needs support in [0, inf)");
  const MellinOptions opts = spec.mellin_options();
  for (const WeightedFunction& fk : ens.f) out.f.push_back(mellin_convolve(fk, spec.phi(), opts));
  out.support = Interval::half_line();
  if (std::isfinite(ens.support.hi) && std::isfinite(spec.phi().support().hi))
    out.support.hi = ens.support.hi * spec.phi().support().hi;
  return out;
}

// Average characteristic polynomial of the transformed ensemble, computed
// from the input's degree-n average characteristic polynomial.  The
// multiplicative route goes through the contour form and is rescaled by the
// reciprocal leading coefficient, so the output is exactly monic.
inline Polynomial avg_char_poly_transformed(const Polynomial& p_n, const TransformSpec& spec) {
  if (!p_n.is_monic(1e-12))
    throw PreconditionError("avg_char_poly_transformed: input must be monic");
  if (spec.additive()) return inv_weierstrass(p_n);
  const Contour sigma = Contour::circle(Complex(0.0, 0.0), spec.contour_radius());
  Polynomial out = op_L_contour(p_n, spec.psi(), sigma);
  const int n = p_n.degree();
  const Complex lead = out.coeff(n);
  const double expected = spec.moments().at(n);
  if (std::abs(lead - Complex(expected)) > 1e-6 * expected)
    throw QuadratureError("avg_char_poly_transformed: leading coefficient drifted");
  std::vector<Complex> c(out.coeffs());
  c.resize(static_cast<std::size_t>(n) + 1, Complex(0.0));
  for (Complex& v : c) v /= lead;
  c.back() = Complex(1.0);
  return Polynomial(std::move(c));
}

// Meijer parameter sets for products of several multipliers: the weight
// specs describe the convolved multiplier density, the series specs its
// Laurent symbol at negated argument.
inline MeijerGSpec ginibre_product_weight_spec(const std::vector<int>& nu) {
  MeijerGSpec s;
  s.m = static_cast<int>(nu.size());
  s.q = s.m;
  for (int v : nu) s.b.push_back(static_cast<double>(v));
  return s;
}

inline MeijerGSpec ginibre_product_series_spec(const std::vector<int>& nu) {
  MeijerGSpec s;
  s.m = 1;
  s.n = 1;
  s.p = 1;
  s.q = static_cast<int>(nu.size()) + 1;
  s.a = {0.0};
  s.b.push_back(0.0);
  for (int v : nu) s.b.push_back(static_cast<double>(-v));
  return s;
}

inline MeijerGSpec truncated_product_weight_spec(const std::vector<int>& nu,
                                                 const std::vector<int>& mu) {
  MeijerGSpec s;
  s.m = static_cast<int>(nu.size());
  s.p = s.m;
  s.q = s.m;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    s.a.push_back(static_cast<double>(nu[k] + mu[k]));
    s.b.push_back(static_cast<double>(nu[k]));
  }
  return s;
}

inline MeijerGSpec truncated_product_series_spec(const std::vector<int>& nu,
                                                 const std::vector<int>& mu) {
  MeijerGSpec s;
  s.m = 1;
  s.n = static_cast<int>(nu.size()) + 1;
  s.p = s.n;
  s.q = s.n;
  s.a.push_back(0.0);
  s.b.push_back(0.0);
  for (std::size_t k = 0; k < nu.size(); ++k) {
    s.a.push_back(static_cast<double>(-nu[k] - mu[k]));
    s.b.push_back(static_cast<double>(-nu[k]));
  }
  return s;
}

// Builds the single general multiplier equivalent to applying r single
// multipliers of one family in sequence.  The moments multiply across
// factors; the Laurent symbol keeps the coefficient formula down to index
// -min(nu), which reproduces the single-multiplier symbol exactly at r = 1.
inline TransformSpec iterated_spec(TransformKind kind, const std::vector<int>& nu,
                                   const std::vector<int>& mu = {}) {
  if (nu.empty()) throw PreconditionError("iterated_spec: empty parameter list");
  for (int v : nu)
    if (v < 0) throw PreconditionError("iterated_spec: nu entries must be >= 0");
  const int r = static_cast<int>(nu.size());
  const int nu_min = *std::min_element(nu.begin(), nu.end());
  const int nu_max = *std::max_element(nu.begin(), nu.end());
  const double inf = std::numeric_limits<double>::infinity();

  if (kind == TransformKind::ginibre) {
    if (!mu.empty())
      throw PreconditionError("iterated_spec: ginibre products take no second parameter list");
    const MeijerGSpec ws = ginibre_product_weight_spec(nu);
    WeightedFunction phi(
        [ws](double t) { return t > 0.0 ? meijer_g(ws, t) : 0.0; }, Interval::half_line(),
        "ginibre-product-weight");
    auto coeff = [nu](int j) {
      double s = 0.0;
      for (int v : nu) s += ln_factorial(j + v);
      return std::exp(-s);
    };
    MomentSequence b(coeff);
    LaurentSeries psi(-nu_min, coeff, 0.0, inf);
    const double cutoff =
        std::max(60.0, std::pow((55.0 + 8.0 * nu_max) / r, static_cast<double>(r)));
    return TransformSpec::general(std::move(phi), std::move(b), std::move(psi), r, cutoff);
  }

  if (kind == TransformKind::truncated) {
    if (mu.size() != nu.size())
      throw PreconditionError("iterated_spec: parameter lists must have equal length");
    for (int m : mu)
      if (m < 1) throw PreconditionError("iterated_spec: mu entries must be >= 1");
    const MeijerGSpec ws = truncated_product_weight_spec(nu, mu);
    WeightedFunction phi(
        [ws](double t) { return t > 0.0 && t <= 1.0 ? meijer_g(ws, t) : 0.0; },
        Interval::unit(), "truncated-product-weight");
    auto coeff = [nu, mu](int j) {
      double v = 1.0;
      for (std::size_t k = 0; k < nu.size(); ++k)
        for (int i = 1; i <= mu[k]; ++i) v *= static_cast<double>(j + nu[k] + i);
      return v;
    };
    MomentSequence b(coeff);
    LaurentSeries psi(-nu_min, coeff, 0.0, 1.0);
    return TransformSpec::general(std::move(phi), std::move(b), std::move(psi), 1, 1.0);
  }

  throw PreconditionError("iterated_spec: kind must be a multiplicative family");
}

// Contour and tolerance choices for the kernel transform routes.
struct KernelTransformOptions {
  double tol = 1e-8;
  // Additive route: vertical line offset from the first argument's real part,
  // its extent, and the half width of the real-axis window around the second
  // argument.  Centering the line on the evaluation point keeps the Gaussian
  // factor bounded by one on the contour; any offset gives the same integral.
  double abscissa = 0.0;
  double half_height = 12.0;
  double t_half_width = 12.0;
  // Multiplicative route: a positive value overrides the spec's circle
  // radius for the symbol contour.
  double circle_radius = 0.0;
};

namespace detail {

// Memoizing wrappers: quadrature levels revisit the same node coordinates
// across kernel evaluations, and general multiplier densities (line-integral
// Meijer evaluations) are costly per point.
struct TransformCaches {
  std::map<double, double> phi;
  std::map<std::pair<double, double>, Complex> psi;
};

inline double cached_phi(const WeightedFunction& phi, double t,
                         const std::shared_ptr<TransformCaches>& caches) {
  auto it = caches->phi.find(t);
  if (it != caches->phi.end()) return it->second;
  const double v = phi(t);
  caches->phi.emplace(t, v);
  return v;
}

inline Complex cached_psi(const LaurentSeries& psi, Complex s,
                          const std::shared_ptr<TransformCaches>& caches) {
  const auto key = std::make_pair(s.real(), s.imag());
  auto it = caches->psi.find(key);
  if (it != caches->psi.end()) return it->second;
  const Complex v = psi(s);
  caches->psi.emplace(key, v);
  return v;
}

}  // namespace detail

// Transforms a correlation kernel through the double-contour route.  The
// input must extend analytically in its first argument (biorthogonal-sum
// kernels do, polynomially).  The result again exposes an analytic first
// argument, so transforms compose.
inline CorrelationKernel transform_kernel(const CorrelationKernel& k, const TransformSpec& spec,
                                          KernelTransformOptions opts = {}) {
  if (!k.has_analytic_eval())
    throw PreconditionError(
        "transform_kernel: kernel must extend analytically in its first argument");
  const auto base = std::make_shared<CorrelationKernel>(k);

  if (spec.additive()) {
    auto core = [base, opts](Complex x, double y) -> Complex {
      const Contour line =
          Contour::vertical_line(opts.abscissa + x.real(), opts.half_height, 129);
      const Contour seg = Contour::polyline(
          {Complex(y - opts.t_half_width, 0.0), Complex(y + opts.t_half_width, 0.0)}, 64);
      auto f = [&](Complex s, Complex t) {
        const Complex dx = x - s;
        const double dy = y - t.real();
        return base->eval_analytic(s, t.real()) * std::exp(0.5 * (dx * dx - dy * dy));
      };
      const QuadratureResult r = integrate_double(f, line, seg, opts.tol);
      if (!r.converged)
        throw QuadratureError("transform_kernel: double integral did not converge");
      return r.value / Complex(0.0, 2.0 * pi);
    };
    CorrelationKernel out([core](double x, double y) { return core(Complex(x, 0.0), y); },
                          k.n(), Interval::real_line());
    out.set_analytic_eval(core);
    return out;
  }

  const double radius = opts.circle_radius > 0.0 ? opts.circle_radius : spec.contour_radius();
  const LaurentSeries psi = spec.psi();
  if (!(radius > psi.inner_radius()) || !(radius < psi.outer_radius()))
    throw PreconditionError("transform_kernel: symbol contour leaves the convergence annulus");
  const WeightedFunction phi = spec.phi();
  const int r_pow = spec.tail_power();
  const double cutoff = spec.phi_cutoff();
  const bool bounded = std::isfinite(phi.support().hi);
  const double base_hi = k.support().hi;
  auto caches = std::make_shared<detail::TransformCaches>();

  auto core = [base, psi, phi, radius, r_pow, cutoff, bounded, base_hi, caches,
               opts](Complex x, double y) -> Complex {
    const Contour sigma = Contour::circle(Complex(0.0, 0.0), radius, 64);
    // The input kernel vanishes beyond its support, so the substituted
    // integrand is exactly zero below t = y / base_hi; starting the bounded
    // contour there keeps the integrand analytic on the whole segment.
    double t_lo = phi.support().lo;
    if (std::isfinite(base_hi)) t_lo = std::max(t_lo, y / base_hi);
    if (bounded && !(t_lo < phi.support().hi)) return Complex(0.0);
    // Unbounded multipliers integrate in the substituted variable w = ln t,
    // so dt / t = dw and the head of the multiplier integral is resolved
    // uniformly in ln t down to where the substituted kernel argument y / t
    // exhausts every representable tail.  The upper end is where the
    // multiplier weight, with tail power r, has.
    if (!bounded && !(y > 0.0)) return Complex(0.0);
    double w_lo = bounded ? 0.0 : std::log(y) - 14.0;
    if (!bounded && std::isfinite(base_hi)) w_lo = std::max(w_lo, std::log(y / base_hi));
    const double w_hi = r_pow * std::log(760.0 / r_pow) + 2.0;
    if (!bounded && !(w_lo < w_hi)) return Complex(0.0);
    const Contour inner =
        bounded ? Contour::polyline({Complex(t_lo, 0.0), Complex(phi.support().hi, 0.0)}, 64)
                : Contour::polyline({Complex(w_lo, 0.0), Complex(w_hi, 0.0)}, 64);
    auto f = [&](Complex s, Complex tc) {
      const Complex symbol = detail::cached_psi(psi, s, caches) / s;
      double t = tc.real();
      double jac_over_t;
      if (bounded) {
        jac_over_t = 1.0 / t;
      } else {
        t = std::exp(tc.real());
        jac_over_t = 1.0;
      }
      if (t > cutoff) return Complex(0.0);
      const double w = detail::cached_phi(phi, t, caches);
      if (w == 0.0) return Complex(0.0);
      return symbol * w * jac_over_t * base->eval_analytic(x / s, y / t);
    };
    const QuadratureResult r = integrate_double(f, sigma, inner, opts.tol);
    if (!r.converged)
      throw QuadratureError("transform_kernel: double integral did not converge");
    return r.value / Complex(0.0, 2.0 * pi);
  };

  Interval support = Interval::half_line();
  if (std::isfinite(k.support().hi) && bounded) support.hi = k.support().hi * phi.support().hi;
  CorrelationKernel out([core](double x, double y) { return core(Complex(x, 0.0), y); }, k.n(),
                        support);
  out.set_analytic_eval(core);
  return out;
}

// Exact transform of a point-mass kernel: the polynomial masses pass through
// the closed coefficient routes and each atom location rescales the
// smoothing factor, so no quadrature is involved.
inline CorrelationKernel transform_kernel(const AtomicKernel& k, const TransformSpec& spec) {
  if (k.locations.size() != k.masses.size())
    throw PreconditionError("transform_kernel: malformed atomic kernel");

  if (spec.additive()) {
    std::vector<Polynomial> masses;
    masses.reserve(k.masses.size());
    for (const Polynomial& m : k.masses) masses.push_back(inv_weierstrass(m));
    const std::vector<double> locs = k.locations;
    auto core = [masses, locs](Complex x, double y) {
      Complex acc(0.0);
      for (std::size_t i = 0; i < masses.size(); ++i) {
        const double d = y - locs[i];
        acc += masses[i](x) * std::exp(-0.5 * d * d);
      }
      return acc / std::sqrt(2.0 * pi);
    };
    CorrelationKernel out([core](double x, double y) { return core(Complex(x, 0.0), y); }, k.n,
                          Interval::real_line());
    out.set_analytic_eval(core);
    return out;
  }

  for (double a : k.locations)
    if (!(a > 0.0))
      throw PreconditionError("transform_kernel: atomic locations must be positive");
  std::vector<Polynomial> masses;
  masses.reserve(k.masses.size());
  for (const Polynomial& m : k.masses) masses.push_back(op_L(m, spec.moments()));
  const std::vector<double> locs = k.locations;
  const WeightedFunction phi = spec.phi();
  auto core = [masses, locs, phi](Complex x, double y) {
    Complex acc(0.0);
    for (std::size_t i = 0; i < masses.size(); ++i)
      acc += masses[i](x) * (phi(y / locs[i]) / locs[i]);
    return acc;
  };
  Interval support = Interval::half_line();
  CorrelationKernel out([core](double x, double y) { return core(Complex(x, 0.0), y); }, k.n,
                        support);
  out.set_analytic_eval(core);
  return out;
}

}  // namespace pek
