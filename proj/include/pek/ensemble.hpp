// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

// Polynomial ensembles and their biorthogonal structure: joint-density
// descriptors, monic/dual pairs, correlation kernels as biorthogonal sums,
// and the built-in Hermite, Laguerre, Jacobi, and degenerate families.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pek/common.hpp"
#include "pek/linalg.hpp"
#include "pek/orthopoly.hpp"
#include "pek/polynomial.hpp"
#include "pek/weighted_function.hpp"

namespace pek {

// n-particle joint density (1/Z) * Vandermonde(x) * det[f_{k-1}(x_j)].
struct PolynomialEnsemble {
  int n = 0;
  Interval support;
  std::vector<WeightedFunction> f;
  double z = std::numeric_limits<double>::quiet_NaN();  // NaN when unknown

  bool z_known() const { return std::isfinite(z); }
};

// Finite linear combination of point masses; used for dual rows that are
// delta combinations rather than densities.  Atoms are exact values, never
// mollified.
struct AtomicMeasureRow {
  struct Atom {
    double location = 0.0;
    double weight = 0.0;
  };
  std::vector<Atom> atoms;
};

using DualRow = std::variant<WeightedFunction, AtomicMeasureRow>;

// P_k paired with dual rows Q_k, satisfying int P_j dQ_k = delta_jk.  In the
// monic variant deg P_k = k; the Lagrange variant of the degenerate family
// carries degree n-1 polynomials throughout.
struct BiorthogonalSystem {
  std::vector<Polynomial> P;
  std::vector<DualRow> Q;
  Interval support;

  int size() const { return static_cast<int>(P.size()); }
  bool atomic() const {
    return !Q.empty() && std::holds_alternative<AtomicMeasureRow>(Q.front());
  }
};

// Correlation kernel evaluator.  gauge_exponent records a known (y/x)^nu
// conjugation factor carried by contour-built kernels; correlations are
// gauge invariant, so comparisons go through determinants, not pointwise
// values.  Kernels built from biorthogonal sums also expose an evaluator
// analytic in the first argument for use inside transform integrals.
class CorrelationKernel {
 public:
  using Eval = std::function<Complex(double, double)>;
  using AnalyticEval = std::function<Complex(Complex, double)>;

  CorrelationKernel(Eval eval, int n, Interval support, int gauge_exponent = 0)
      : eval_(std::move(eval)), n_(n), support_(support), gauge_exponent_(gauge_exponent) {}

  Complex operator()(double x, double y) const { return eval_(x, y); }
  int n() const { return n_; }
  const Interval& support() const { return support_; }
  int gauge_exponent() const { return gauge_exponent_; }

  bool has_analytic_eval() const { return static_cast<bool>(analytic_); }
  Complex eval_analytic(Complex x, double y) const {
    if (!analytic_) throw PreconditionError("CorrelationKernel: no analytic evaluator");
    return analytic_(x, y);
  }
  void set_analytic_eval(AnalyticEval a) { analytic_ = std::move(a); }

 private:
  Eval eval_;
  AnalyticEval analytic_;
  int n_;
  Interval support_;
  int gauge_exponent_;
};

// Point-mass kernel row sum for atomic dual systems: k(x, .) is a measure
// with fixed atom locations whose masses are polynomials in x.
struct AtomicKernel {
  int n = 0;
  std::vector<double> locations;
  std::vector<Polynomial> masses;  // masses[i] = sum_k w_{k,i} P_k

  Complex mass(std::size_t i, Complex x) const { return masses[i](x); }
};

// k_n(x,y) = sum_j P_j(x) Q_j(y) for function-valued dual rows.
inline CorrelationKernel kernel_from_system(const BiorthogonalSystem& sys) {
  if (sys.P.size() != sys.Q.size())
    throw PreconditionError("kernel_from_system: mismatched list lengths");
  if (sys.atomic())
    throw PreconditionError("kernel_from_system: atomic rows need the atomic variant");
  std::vector<Polynomial> p = sys.P;
  std::vector<WeightedFunction> q;
  q.reserve(sys.Q.size());
  for (const auto& row : sys.Q) q.push_back(std::get<WeightedFunction>(row));

  auto eval = [p, q](double x, double y) {
    Complex acc(0.0);
    for (std::size_t j = 0; j < p.size(); ++j) acc += p[j].eval_real(x) * q[j](y);
    return acc;
  };
  auto analytic = [p, q](Complex x, double y) {
    Complex acc(0.0);
    for (std::size_t j = 0; j < p.size(); ++j) acc += p[j](x) * q[j](y);
    return acc;
  };
  CorrelationKernel k(eval, sys.size(), sys.support);
  k.set_analytic_eval(analytic);
  return k;
}

inline AtomicKernel atomic_kernel_from_system(const BiorthogonalSystem& sys) {
  if (sys.P.size() != sys.Q.size())
    throw PreconditionError("atomic_kernel_from_system: mismatched list lengths");
  if (!sys.atomic())
    throw PreconditionError("atomic_kernel_from_system: system is function-valued");
  AtomicKernel out;
  out.n = sys.size();
  for (const auto& row : sys.Q)
    for (const auto& atom : std::get<AtomicMeasureRow>(row).atoms) {
      std::size_t idx = 0;
      while (idx < out.locations.size() && out.locations[idx] != atom.location) ++idx;
      if (idx == out.locations.size()) {
        out.locations.push_back(atom.location);
        out.masses.emplace_back();
      }
    }
  for (std::size_t k = 0; k < sys.Q.size(); ++k)
    for (const auto& atom : std::get<AtomicMeasureRow>(sys.Q[k]).atoms) {
      std::size_t idx = 0;
      while (out.locations[idx] != atom.location) ++idx;
      out.masses[idx] += Complex(atom.weight) * sys.P[k];
    }
  return out;
}

// det[K(x_i, x_j)]; the gauge-invariant comparison primitive for kernels.
inline Complex correlation_determinant(const CorrelationKernel& k,
                                       const std::vector<double>& pts) {
  const int m = static_cast<int>(pts.size());
  Eigen::MatrixXcd mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mat(i, j) = k(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  return mat.determinant();
}

// Hermite ensemble: f_k(x) = x^k e^{-x^2/2} on R, Z_n = (2 pi)^{n/2} prod k!.
inline std::pair<PolynomialEnsemble, BiorthogonalSystem> gue_ensemble(int n) {
  if (n < 1) throw PreconditionError("gue_ensemble: n must be >= 1");
  PolynomialEnsemble ens;
  ens.n = n;
  ens.support = Interval::real_line();
  double z = std::pow(2.0 * pi, 0.5 * n);
  for (int k = 0; k < n; ++k) {
    z *= factorial(k + 1);
    ens.f.emplace_back([k](double x) { return std::pow(x, k) * std::exp(-0.5 * x * x); },
                       ens.support, "hermite-f");
  }
  ens.z = z;

  BiorthogonalSystem sys;
  sys.support = ens.support;
  for (int k = 0; k < n; ++k) {
    Polynomial pk = hermite_monic(k);
    const double hk = hermite_norm(k);
    sys.P.push_back(pk);
    sys.Q.emplace_back(WeightedFunction(
        [pk, hk](double y) { return pk.eval_real(y) * std::exp(-0.5 * y * y) / hk; },
        ens.support, "hermite-q"));
  }
  return {ens, sys};
}

// Laguerre ensemble: f_k(x) = x^{nu+k} e^{-x}, Z_n = prod k! Gamma(k+nu).
inline std::pair<PolynomialEnsemble, BiorthogonalSystem> laguerre_ensemble(int n, int nu) {
  if (n < 1) throw PreconditionError("laguerre_ensemble: n must be >= 1");
  if (nu < 0) throw PreconditionError("laguerre_ensemble: nu must be >= 0");
  PolynomialEnsemble ens;
  ens.n = n;
  ens.support = Interval::half_line();
  double z = 1.0;
  for (int k = 1; k <= n; ++k) z *= factorial(k) * std::tgamma(static_cast<double>(k) + nu);
  ens.z = z;
  for (int k = 0; k < n; ++k)
    ens.f.emplace_back(
        [k, nu](double x) { return std::pow(x, nu + k) * std::exp(-x); }, ens.support,
        "laguerre-f");

  BiorthogonalSystem sys;
  sys.support = ens.support;
  for (int k = 0; k < n; ++k) {
    Polynomial pk = laguerre_monic(k, nu);
    const double hk = laguerre_norm(k, nu);
    sys.P.push_back(pk);
    sys.Q.emplace_back(WeightedFunction(
        [pk, hk, nu](double y) {
          return pk.eval_real(y) * std::pow(y, nu) * std::exp(-y) / hk;
        },
        ens.support, "laguerre-q"));
  }
  return {ens, sys};
}

// Jacobi ensemble on [0,1]: f_k(x) = x^{nu+k} (1-x)^{m-2n-nu}.  Requires
// mu = m - n - nu >= n; below that the squared singular values stop being a
// determinantal point process and the monic system degenerates.
inline std::pair<PolynomialEnsemble, BiorthogonalSystem> jacobi_ensemble(int n, int nu, int m) {
  if (n < 1) throw PreconditionError("jacobi_ensemble: n must be >= 1");
  if (nu < 0) throw PreconditionError("jacobi_ensemble: nu must be >= 0");
  const int mu = m - n - nu;
  if (mu < n)
    throw PreconditionError(
        "jacobi_ensemble: m - n - nu < n, the truncated-product ensemble is degenerate");
  const int beta_exp = m - 2 * n - nu;
  PolynomialEnsemble ens;
  ens.n = n;
  ens.support = Interval::unit();
  double z = 1.0;
  for (int k = 1; k <= n; ++k)
    z *= factorial(k) * std::tgamma(static_cast<double>(k) + nu) *
         std::tgamma(static_cast<double>(k + beta_exp)) /
         std::tgamma(static_cast<double>(k + m - n));
  ens.z = z;
  for (int k = 0; k < n; ++k)
    ens.f.emplace_back(
        [k, nu, beta_exp](double x) {
          return std::pow(x, nu + k) * std::pow(1.0 - x, beta_exp);
        },
        ens.support, "jacobi-f");

  BiorthogonalSystem sys;
  sys.support = ens.support;
  for (int k = 0; k < n; ++k) {
    Polynomial pk = jacobi01_monic(k, nu, beta_exp);
    const double hk = jacobi01_norm(k, nu, beta_exp);
    sys.P.push_back(pk);
    sys.Q.emplace_back(WeightedFunction(
        [pk, hk, nu, beta_exp](double y) {
          return pk.eval_real(y) * std::pow(y, nu) * std::pow(1.0 - y, beta_exp) / hk;
        },
        ens.support, "jacobi-q"));
  }
  return {ens, sys};
}

enum class DegenerateVariant { monic, lagrange };

// Biorthogonal system for the spectrum fixed at distinct points a_1..a_n.
// Monic variant: P_k(x) = prod_{j<=k} (x - a_j) with divided-difference dual
// atoms; Lagrange variant: P_k the Lagrange basis with single-atom duals.
// Both produce the same atomic kernel.
inline BiorthogonalSystem degenerate_ensemble(const std::vector<double>& a,
                                              DegenerateVariant variant = DegenerateVariant::monic) {
  const std::size_t n = a.size();
  if (n == 0) throw PreconditionError("degenerate_ensemble: empty point list");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] > 0.0)) throw PreconditionError("degenerate_ensemble: points must be positive");
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i] == a[j])
        throw PreconditionError("degenerate_ensemble: repeated points (confluent limits are handled by the closed-kernel forms)");
  }
  BiorthogonalSystem sys;
  sys.support = Interval::half_line();
  if (variant == DegenerateVariant::lagrange) {
    sys.P = lagrange_basis(a);
    for (std::size_t k = 0; k < n; ++k) {
      AtomicMeasureRow row;
      row.atoms.push_back({a[k], 1.0});
      sys.Q.emplace_back(std::move(row));
    }
    return sys;
  }
  for (std::size_t k = 0; k < n; ++k) {
    sys.P.push_back(poly_from_roots(std::vector<double>(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k))));
    AtomicMeasureRow row;
    for (std::size_t i = 0; i <= k; ++i) {
      double w = 1.0;
      for (std::size_t l = 0; l <= k; ++l)
        if (l != i) w /= a[i] - a[l];
      row.atoms.push_back({a[i], w});
    }
    sys.Q.emplace_back(std::move(row));
  }
  return sys;
}

struct CharPolyEstimate {
  std::vector<double> estimate;
  std::vector<double> stderr_;
};

// Monte Carlo mean of prod_j (x - x_j) over spectrum samples, with
// leave-one-out (jackknife) standard errors; for the plain mean these
// reduce to sqrt(sum (v_i - vbar)^2 / (N (N-1))).
inline CharPolyEstimate average_char_poly_mc(const std::vector<SpectrumSample>& samples,
                                             const std::vector<double>& grid) {
  if (samples.empty()) throw PreconditionError("average_char_poly_mc: no samples");
  if (samples.size() < 100)
    throw PreconditionError("average_char_poly_mc: needs at least 100 samples");
  const double nd = static_cast<double>(samples.size());
  CharPolyEstimate out;
  for (double x : grid) {
    double mean = 0.0;
    std::vector<double> vals;
    vals.reserve(samples.size());
    for (const auto& s : samples) {
      double v = 1.0;
      for (double pt : s.points) v *= x - pt;
      vals.push_back(v);
      mean += v;
    }
    mean /= nd;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    out.estimate.push_back(mean);
    out.stderr_.push_back(std::sqrt(ss / (nd * (nd - 1.0))));
  }
  return out;
}

}  // namespace pek
