// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

// End-to-end statistical checks: draw spectra from the matrix models, bin
// them against a kernel's one-point density, and compare Monte Carlo
// characteristic-polynomial averages with the transformed prediction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pek/closed_kernels.hpp"
#include "pek/common.hpp"
#include "pek/ensemble.hpp"
#include "pek/linalg.hpp"
#include "pek/polynomial.hpp"
#include "pek/transform.hpp"

namespace pek {

// What is added to the GUE draw in the additive family.
enum class AddendSource { zero, gue, diagonal };

// Random matrix constructions the samplers draw spectra from: a GUE draw
// plus a source matrix (eigenvalues), or a chain of Ginibre or truncated
// unitary factors applied to a source (squared singular values).  Chain
// factor j is (n + nu[j]) x (n + nu[j-1]) with nu[-1] read as 0, truncated
// factors cut from a Haar unitary of size n + nu[j] + mu[j].  An empty
// factor list with a diagonal source is the bare fixed matrix; diagonal
// entries are given as squared singular values.
struct ModelSpec {
  enum class Construction { gue_plus, ginibre_chain, truncated_chain };

  Construction construction = Construction::gue_plus;
  int n = 1;

  AddendSource addend = AddendSource::zero;
  std::vector<double> shift;  // diagonal addend entries

  std::vector<int> nu;  // per-factor size offsets
  std::vector<int> mu;  // per-factor truncation surpluses
  ProductSource source = ProductSource::identity;
  std::vector<double> a;  // squared singular values of the diagonal source

  int r() const { return static_cast<int>(nu.size()); }

  void validate() const {
    if (n < 1) throw PreconditionError("ModelSpec: n must be >= 1");
    if (construction == Construction::gue_plus) {
      if (!nu.empty() || !mu.empty() || !a.empty())
        throw PreconditionError("ModelSpec: chain fields only apply to the chain families");
      if (addend == AddendSource::diagonal) {
        if (static_cast<int>(shift.size()) != n)
          throw PreconditionError("ModelSpec: diagonal addend needs one entry per row");
      } else if (!shift.empty()) {
        throw PreconditionError("ModelSpec: shift entries only apply to the diagonal addend");
      }
      return;
    }
    if (addend != AddendSource::zero || !shift.empty())
      throw PreconditionError("ModelSpec: addend fields only apply to the additive family");
    if (source == ProductSource::ensemble)
      throw PreconditionError("ModelSpec: ensemble sources go through the transform pipeline");
    for (int v : nu)
      if (v < 0) throw PreconditionError("ModelSpec: factor offsets must be nonnegative");
    if (source == ProductSource::diagonal) {
      if (static_cast<int>(a.size()) != n)
        throw PreconditionError("ModelSpec: diagonal source needs one entry per point");
      for (double v : a)
        if (!(v > 0.0)) throw PreconditionError("ModelSpec: diagonal entries must be positive");
    } else {
      if (!a.empty())
        throw PreconditionError("ModelSpec: source entries only apply to the diagonal source");
      if (nu.empty())
        throw PreconditionError("ModelSpec: an identity source needs at least one factor");
    }
    if (construction == Construction::ginibre_chain) {
      if (!mu.empty())
        throw PreconditionError("ModelSpec: truncation surpluses only apply to truncated chains");
      return;
    }
    if (mu.size() != nu.size())
      throw PreconditionError("ModelSpec: one truncation surplus per factor");
    for (int m : mu)
      if (m < 1) throw PreconditionError("ModelSpec: truncation surpluses must be >= 1");
    for (std::size_t j = 1; j < nu.size(); ++j)
      if (nu[j] + mu[j] < nu[j - 1])
        throw PreconditionError("ModelSpec: factor sizes are not chain consistent");
  }

  static ModelSpec gue(int n) {
    ModelSpec m;
    m.n = n;
    return m;
  }

  static ModelSpec gue_plus_gue(int n) {
    ModelSpec m;
    m.n = n;
    m.addend = AddendSource::gue;
    return m;
  }

  static ModelSpec gue_plus_diagonal(int n, std::vector<double> shift) {
    ModelSpec m;
    m.n = n;
    m.addend = AddendSource::diagonal;
    m.shift = std::move(shift);
    return m;
  }

  static ModelSpec ginibre(int n, std::vector<int> nu) {
    ModelSpec m;
    m.construction = Construction::ginibre_chain;
    m.n = n;
    m.nu = std::move(nu);
    return m;
  }

  static ModelSpec truncated(int n, std::vector<int> nu, std::vector<int> mu) {
    ModelSpec m;
    m.construction = Construction::truncated_chain;
    m.n = n;
    m.nu = std::move(nu);
    m.mu = std::move(mu);
    return m;
  }

  static ModelSpec fixed_diagonal(int n, std::vector<double> a) {
    ModelSpec m;
    m.construction = Construction::ginibre_chain;
    m.n = n;
    m.source = ProductSource::diagonal;
    m.a = std::move(a);
    return m;
  }
};

namespace detail {

// One draw of the model's matrix.  The draw order is fixed (addend after
// the GUE part, chain factors in order), so seeds reproduce exactly.
inline ComplexMatrix sample_model_matrix(const ModelSpec& m, RngStream& rng) {
  if (m.construction == ModelSpec::Construction::gue_plus) {
    ComplexMatrix h = sample_gue(m.n, rng);
    if (m.addend == AddendSource::gue) h += sample_gue(m.n, rng);
    if (m.addend == AddendSource::diagonal)
      for (int i = 0; i < m.n; ++i) h(i, i) += Complex(m.shift[static_cast<std::size_t>(i)]);
    return h;
  }
  ComplexMatrix x;
  if (m.source == ProductSource::diagonal) {
    x = ComplexMatrix::Zero(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
      x(i, i) = Complex(std::sqrt(m.a[static_cast<std::size_t>(i)]));
  } else {
    x = ComplexMatrix::Identity(m.n, m.n);
  }
  for (int j = 0; j < m.r(); ++j) {
    const int rows = m.n + m.nu[static_cast<std::size_t>(j)];
    const int cols = static_cast<int>(x.rows());
    if (m.construction == ModelSpec::Construction::ginibre_chain) {
      x = sample_ginibre(rows, cols, rng) * x;
    } else {
      const int order = m.n + m.nu[static_cast<std::size_t>(j)] + m.mu[static_cast<std::size_t>(j)];
      x = truncate(sample_haar_unitary(order, rng), rows, cols) * x;
    }
  }
  return x;
}

}  // namespace detail

// Independent spectra of the model.  Each draw runs on its own sub-stream
// keyed by the draw index, so the result is identical for any worker count
// and the workers need no coordination beyond disjoint slots.
inline std::vector<SpectrumSample> sample_model(const ModelSpec& spec, long draws,
                                                const RngStream& rng, int workers = 1) {
  spec.validate();
  if (draws < 1) throw PreconditionError("sample_model: need at least one draw");
  if (workers < 1) throw PreconditionError("sample_model: need at least one worker");
  std::vector<SpectrumSample> out(static_cast<std::size_t>(draws));
  auto run = [&spec, &rng, &out](long first, long stride, long limit) {
    for (long i = first; i < limit; i += stride) {
      RngStream sub = rng.split(static_cast<std::uint64_t>(i));
      const ComplexMatrix y = detail::sample_model_matrix(spec, sub);
      out[static_cast<std::size_t>(i)] = spec.construction == ModelSpec::Construction::gue_plus
                                             ? eigenvalues_hermitian(y)
                                             : squared_singular_values(y);
    }
  };
  if (workers == 1 || draws == 1) {
    run(0, 1, draws);
    return out;
  }
  const int pool_size = static_cast<int>(std::min<long>(workers, draws));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(pool_size));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(pool_size));
  for (int w = 0; w < pool_size; ++w)
    pool.emplace_back([&, w]() {
      try {
        run(w, pool_size, draws);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace detail {

// Upper regularized incomplete gamma Q(a, x); the chi-square right tail is
// Q(dof/2, chi2/2).  Series below the a + 1 crossover, modified Lentz
// continued fraction above it.
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0))
    throw PreconditionError("regularized_gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  const double pre = std::exp(a * std::log(x) - x - std::lgamma(a));
  if (x < a + 1.0) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return 1.0 - pre * sum;
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return pre * h;
}

inline void append_number(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

}  // namespace detail

// Binned comparison of sampled spectra against a kernel's one-point
// density.  Counts and predictions live on merged equal-mass bins; the
// z-scores and the chi-square statistic are multinomial.
struct DensityComparison {
  std::vector<double> bin_edges;         // merged, ascending, bins() + 1 entries
  std::vector<long> empirical_counts;    // points per merged bin
  std::vector<double> predicted_counts;  // draws times kernel mass per merged bin
  std::vector<double> z_scores;
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 1.0;
  long total_points = 0;  // binned points; excluded atoms and outliers not counted
  double predicted_total = 0.0;
  long outside_support = 0;
  int atoms_required = 0;
  bool atoms_ok = true;
  bool trace_ok = false;
  bool pass = false;

  int bins() const { return static_cast<int>(z_scores.size()); }
};

// Compares pooled sample points against n_draws * K(x, x) dx per bin.  Bins
// are equal-mass under the kernel density (inverted from its cumulative on
// a uniform grid), then merged left to right until every expected count
// reaches 10.  deterministic_unit_atoms peels that many points at 1 (within
// 1e-8) off each sample before binning; samples that lack them are flagged
// and fail the comparison.  Pass requires every |z| < 4, chi-square
// p > 0.001, predicted mass within 0.1% of the binned points, no points
// outside the kernel support, and the atom counts.
inline DensityComparison compare_density(const std::vector<SpectrumSample>& samples,
                                         const CorrelationKernel& kernel, int bins,
                                         int deterministic_unit_atoms = 0) {
  if (bins < 4) throw PreconditionError("compare_density: need at least 4 bins");
  if (deterministic_unit_atoms < 0)
    throw PreconditionError("compare_density: atom count must be nonnegative");
  if (samples.empty()) throw PreconditionError("compare_density: no samples");

  DensityComparison out;
  out.atoms_required = deterministic_unit_atoms;

  std::vector<double> pts;
  pts.reserve(samples.size() * samples.front().points.size());
  for (const SpectrumSample& s : samples) {
    int found = 0;
    for (double p : s.points) {
      if (deterministic_unit_atoms > 0 && std::abs(p - 1.0) <= 1e-8) {
        ++found;
        continue;
      }
      if (!kernel.support().contains(p)) {
        ++out.outside_support;
        continue;
      }
      pts.push_back(p);
    }
    if (found < deterministic_unit_atoms) out.atoms_ok = false;
  }
  out.total_points = static_cast<long>(pts.size());
  if (out.total_points < 10L * bins)
    throw PreconditionError("compare_density: too few samples for the requested binning");
  std::sort(pts.begin(), pts.end());

  // binning window: support ends where finite, sample range padded otherwise
  const Interval sup = kernel.support();
  const double span = pts.back() - pts.front();
  const double pad = 0.075 * span + 0.5;
  const double lo = std::isfinite(sup.lo) ? sup.lo : pts.front() - pad;
  const double hi = std::isfinite(sup.hi) ? sup.hi : pts.back() + pad;

  // one-point density on a grid clustered toward both window ends (node map
  // u - sin(2 pi u) / (2 pi), cubic spacing at the endpoints), so integrable
  // edge singularities of product densities are captured by the trapezoid
  // cumulative; the outermost evaluations sit a quarter panel inside so
  // support gates at the exact boundary do not zero them
  const int grid = std::max(2048, 96 * bins);
  std::vector<double> xs(static_cast<std::size_t>(grid) + 1);
  std::vector<double> rho(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) {
    const double u = static_cast<double>(i) / grid;
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * (u - std::sin(2.0 * pi * u) / (2.0 * pi));
  }
  xs.front() = lo;
  xs.back() = hi;
  for (int i = 0; i <= grid; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    double x = xs[k];
    if (i == 0) x += 0.25 * (xs[1] - xs[0]);
    if (i == grid) x -= 0.25 * (xs[k] - xs[k - 1]);
    const double v = kernel(x, x).real();
    rho[k] = v > 0.0 ? v : 0.0;
  }
  std::vector<double> cum(static_cast<std::size_t>(grid) + 1, 0.0);
  for (int i = 1; i <= grid; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    cum[k] = cum[k - 1] + 0.5 * (rho[k - 1] + rho[k]) * (xs[k] - xs[k - 1]);
  }
  const double mass = cum.back();
  if (!(mass > 0.0)) throw QuadratureError("compare_density: kernel density mass vanished");

  const double draws = static_cast<double>(samples.size());
  const double total = static_cast<double>(out.total_points);
  out.predicted_total = mass * draws;
  out.trace_ok = std::abs(out.predicted_total - total) <= 1e-3 * total;

  auto cdf_at = [&](double x) -> double {
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return mass;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double w = xs[k + 1] > xs[k] ? (x - xs[k]) / (xs[k + 1] - xs[k]) : 0.0;
    return cum[k] + w * (cum[k + 1] - cum[k]);
  };

  // equal-mass edges by inverting the piecewise-linear cumulative
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  edges.front() = lo;
  edges.back() = hi;
  std::size_t seg = 0;
  for (int b = 1; b < bins; ++b) {
    const double target = mass * b / bins;
    while (seg + 1 < cum.size() && cum[seg + 1] < target) ++seg;
    const double c0 = cum[seg];
    const double c1 = cum[seg + 1];
    const double t = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
    edges[static_cast<std::size_t>(b)] = xs[seg] + t * (xs[seg + 1] - xs[seg]);
  }

  std::vector<long> raw_counts(static_cast<std::size_t>(bins));
  std::vector<double> raw_pred(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    const std::size_t k = static_cast<std::size_t>(b);
    const auto lo_it = b == 0 ? pts.begin() : std::upper_bound(pts.begin(), pts.end(), edges[k]);
    const auto hi_it = std::upper_bound(pts.begin(), pts.end(), edges[k + 1]);
    raw_counts[k] = static_cast<long>(hi_it - lo_it);
    raw_pred[k] = (cdf_at(edges[k + 1]) - cdf_at(edges[k])) * draws;
  }

  // merge low-expectation bins left to right; a light trailing remainder
  // folds into the previous merged bin
  out.bin_edges.push_back(edges.front());
  long acc_obs = 0;
  double acc_pred = 0.0;
  for (int b = 0; b < bins; ++b) {
    const std::size_t k = static_cast<std::size_t>(b);
    acc_obs += raw_counts[k];
    acc_pred += raw_pred[k];
    const bool last = b == bins - 1;
    if (acc_pred >= 10.0 || last) {
      if (last && acc_pred < 10.0 && !out.empirical_counts.empty()) {
        out.empirical_counts.back() += acc_obs;
        out.predicted_counts.back() += acc_pred;
        out.bin_edges.back() = edges[k + 1];
      } else {
        out.empirical_counts.push_back(acc_obs);
        out.predicted_counts.push_back(acc_pred);
        out.bin_edges.push_back(edges[k + 1]);
      }
      acc_obs = 0;
      acc_pred = 0.0;
    }
  }

  bool z_ok = true;
  for (std::size_t b = 0; b < out.empirical_counts.size(); ++b) {
    const double e = out.predicted_counts[b];
    const double o = static_cast<double>(out.empirical_counts[b]);
    const double var = std::max(e * (1.0 - e / std::max(total, 1.0)), 1e-300);
    const double z = (o - e) / std::sqrt(var);
    out.z_scores.push_back(z);
    if (!(std::abs(z) < 4.0)) z_ok = false;
    out.chi_square += (o - e) * (o - e) / std::max(e, 1e-300);
  }
  out.dof = static_cast<int>(out.empirical_counts.size()) - 1;
  out.p_value = out.dof >= 1 ? detail::regularized_gamma_q(0.5 * out.dof, 0.5 * out.chi_square)
                             : 1.0;
  out.pass = z_ok && out.p_value > 0.001 && out.trace_ok && out.outside_support == 0 &&
             out.atoms_ok;
  return out;
}

// Density comparison plus the characteristic-polynomial cross-check for a
// transformed model.
struct PipelineReport {
  DensityComparison density;
  std::vector<double> grid;
  std::vector<double> mc_estimate;
  std::vector<double> mc_stderr;
  std::vector<double> predicted;
  bool char_poly_pass = true;
  bool pass = false;
};

// Applies one transform step to a base model, samples the lifted model, and
// tests it two ways against the transformed predictions: binned density
// against the transformed kernel, and the Monte Carlo mean characteristic
// polynomial against the transformed average characteristic polynomial at
// five sample quantiles (3 standard errors each).  Supported bases: plain
// GUE (additive step), a single identity-source Ginibre factor, or a bare
// diagonal source.
inline PipelineReport verify_transform_pipeline(const ModelSpec& base, const TransformSpec& spec,
                                                long draws, const RngStream& rng, int bins = 40,
                                                int workers = 1) {
  base.validate();
  const int n = base.n;

  ModelSpec lifted = base;
  if (spec.additive()) {
    if (base.construction != ModelSpec::Construction::gue_plus ||
        base.addend != AddendSource::zero)
      throw PreconditionError("verify_transform_pipeline: additive step needs a plain GUE base");
    lifted.addend = AddendSource::gue;
  } else {
    const bool trunc = spec.kind() == TransformKind::truncated;
    const ModelSpec::Construction family = trunc ? ModelSpec::Construction::truncated_chain
                                                 : ModelSpec::Construction::ginibre_chain;
    if (base.construction == ModelSpec::Construction::gue_plus)
      throw PreconditionError(
          "verify_transform_pipeline: multiplicative steps need a chain or diagonal base");
    if (base.r() == 0) {
      lifted.construction = family;
    } else if (base.construction != family) {
      throw PreconditionError(
          "verify_transform_pipeline: mixed factor families are not expressible as one model");
    }
    const int top = base.r() == 0 ? 0 : base.nu.back();
    lifted.nu.push_back(top + spec.nu());
    if (trunc) lifted.mu.push_back(spec.mu());
  }

  // base kernel and monic degree-n average characteristic polynomial
  std::optional<CorrelationKernel> transformed;
  Polynomial pn = Polynomial::constant(Complex(1.0));
  if (base.construction == ModelSpec::Construction::gue_plus) {
    transformed.emplace(transform_kernel(kernel_from_system(gue_ensemble(n).second), spec));
    pn = gue_ensemble(n + 1).second.P[static_cast<std::size_t>(n)];
  } else if (base.r() == 0) {
    transformed.emplace(transform_kernel(atomic_kernel_from_system(degenerate_ensemble(base.a)),
                                         spec));
    pn = poly_from_roots(base.a);
  } else if (base.construction == ModelSpec::Construction::ginibre_chain && base.r() == 1 &&
             base.source == ProductSource::identity) {
    const int nu0 = base.nu.front();
    transformed.emplace(
        transform_kernel(kernel_from_system(laguerre_ensemble(n, nu0).second), spec));
    pn = laguerre_ensemble(n + 1, nu0).second.P[static_cast<std::size_t>(n)];
  } else {
    throw PreconditionError("verify_transform_pipeline: no kernel route for this base model");
  }

  const std::vector<SpectrumSample> samples = sample_model(lifted, draws, rng, workers);

  PipelineReport rep;
  rep.density = compare_density(samples, *transformed, bins);

  std::vector<double> pool;
  pool.reserve(samples.size() * samples.front().points.size());
  for (const SpectrumSample& s : samples)
    pool.insert(pool.end(), s.points.begin(), s.points.end());
  std::sort(pool.begin(), pool.end());
  for (int j = 0; j < 5; ++j) {
    const double q = (2.0 * j + 1.0) / 10.0;
    rep.grid.push_back(pool[static_cast<std::size_t>(q * static_cast<double>(pool.size() - 1))]);
  }

  const CharPolyEstimate mc = average_char_poly_mc(samples, rep.grid);
  const Polynomial prediction = avg_char_poly_transformed(pn, spec);
  rep.mc_estimate = mc.estimate;
  rep.mc_stderr = mc.stderr_;
  for (std::size_t j = 0; j < rep.grid.size(); ++j) {
    rep.predicted.push_back(prediction.eval_real(rep.grid[j]));
    if (!(std::abs(rep.mc_estimate[j] - rep.predicted[j]) <= 3.0 * rep.mc_stderr[j]))
      rep.char_poly_pass = false;
  }
  rep.pass = rep.density.pass && rep.char_poly_pass;
  return rep;
}

// JSON report with the per-bin table and the summary statistics.
inline std::string density_report_json(const DensityComparison& c) {
  auto number_array = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      detail::append_number(s, v[i]);
    }
    s += "]";
    return s;
  };
  std::string s = "{\n";
  s += "  \"bin_edges\": " + number_array(c.bin_edges) + ",\n";
  s += "  \"empirical_counts\": [";
  for (std::size_t i = 0; i < c.empirical_counts.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(c.empirical_counts[i]);
  }
  s += "],\n";
  s += "  \"predicted_counts\": " + number_array(c.predicted_counts) + ",\n";
  s += "  \"z_scores\": " + number_array(c.z_scores) + ",\n";
  s += "  \"chi_square\": ";
  detail::append_number(s, c.chi_square);
  s += ",\n  \"dof\": " + std::to_string(c.dof) + ",\n";
  s += "  \"p_value\": ";
  detail::append_number(s, c.p_value);
  s += ",\n  \"total_points\": " + std::to_string(c.total_points) + ",\n";
  s += "  \"predicted_total\": ";
  detail::append_number(s, c.predicted_total);
  s += ",\n  \"outside_support\": " + std::to_string(c.outside_support) + ",\n";
  s += "  \"atoms_required\": " + std::to_string(c.atoms_required) + ",\n";
  s += std::string("  \"atoms_ok\": ") + (c.atoms_ok ? "true" : "false") + ",\n";
  s += std::string("  \"trace_ok\": ") + (c.trace_ok ? "true" : "false") + ",\n";
  s += std::string("  \"pass\": ") + (c.pass ? "true" : "false") + "\n}\n";
  return s;
}

// Histogram table for plotting, one row per merged bin.
inline std::string density_histogram_csv(const DensityComparison& c) {
  std::string s = "bin_lo,bin_hi,observed,predicted\r\n";
  for (std::size_t b = 0; b < c.empirical_counts.size(); ++b) {
    detail::append_number(s, c.bin_edges[b]);
    s += ",";
    detail::append_number(s, c.bin_edges[b + 1]);
    s += ",";
    s += std::to_string(c.empirical_counts[b]);
    s += ",";
    detail::append_number(s, c.predicted_counts[b]);
    s += "\r\n";
  }
  return s;
}

}  // namespace pek
