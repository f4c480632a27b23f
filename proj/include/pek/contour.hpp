// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "pek/common.hpp"
#include "pek/orthopoly.hpp"

namespace pek {

// One quadrature node: sum over w * f(s) approximates the plain contour
// integral of f with respect to ds (for weighted half-line / unit-interval
// rules the classical weight is divided back out of w, so the integrand
// carries its own decay).
struct QuadNode {
  Complex s;
  Complex w;
};

namespace detail {

inline std::pair<std::vector<double>, std::vector<double>> golub_welsch(const Recurrence& rec,
                                                                        std::size_t n) {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0));
  for (std::size_t k = 0; k < n; ++k) diag[static_cast<Eigen::Index>(k)] = rec.alpha[k];
  for (std::size_t k = 1; k < n; ++k)
    sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(rec.beta[k]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  std::vector<double> nodes(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    const double v0 = solver.eigenvectors()(0, static_cast<Eigen::Index>(i));
    weights[i] = rec.beta[0] * v0 * v0;
  }
  return {nodes, weights};
}

// Cached Gauss rules keyed by family parameters and node count.
struct GaussCache {
  std::mutex mu;
  std::map<std::tuple<int, double, double, std::size_t>,
           std::pair<std::vector<double>, std::vector<double>>>
      table;

  static GaussCache& instance() {
    static GaussCache c;
    return c;
  }

  std::pair<std::vector<double>, std::vector<double>> get(int family, double p1, double p2,
                                                          std::size_t n) {
    const auto key = std::make_tuple(family, p1, p2, n);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = table.find(key);
      if (it != table.end()) return it->second;
    }
    Recurrence rec;
    switch (family) {
      case 0: {  // Legendre on [-1,1]
        rec.alpha.assign(n, 0.0);
        rec.beta.resize(n);
        rec.beta[0] = 2.0;
        for (std::size_t k = 1; k < n; ++k)
          rec.beta[k] = static_cast<double>(k * k) / (4.0 * k * k - 1.0);
        break;
      }
      case 1:
        rec = laguerre_recurrence(static_cast<int>(n), p1);
        break;
      case 2:
        rec = jacobi01_recurrence(static_cast<int>(n), p1, p2);
        break;
      default:
        throw PreconditionError("unknown Gauss family");
    }
    auto rule = golub_welsch(rec, n);
    std::lock_guard<std::mutex> lock(mu);
    table.emplace(key, rule);
    return rule;
  }
};

inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  return GaussCache::instance().get(0, 0.0, 0.0, n);
}

}  // namespace detail

// Parameterized integration path with node/weight generation at any
// refinement level. Node counts below the minimum are promoted.
class Contour {
 public:
  enum class Kind { circle, vertical_line, hankel, half_line_laguerre, unit_interval_jacobi, polyline };

  static Contour circle(Complex center, double radius, std::size_t nodes = 64) {
    if (radius <= 0.0) throw PreconditionError("circle: radius must be positive");
    Contour c(Kind::circle, nodes);
    c.center_ = center;
    c.radius_ = radius;
    c.max_nodes_ = 16384;
    return c;
  }

  static Contour vertical_line(double abscissa, double half_height, std::size_t nodes = 129) {
    if (half_height <= 0.0) throw PreconditionError("vertical_line: half-height must be positive");
    Contour c(Kind::vertical_line, nodes);
    c.abscissa_ = abscissa;
    c.half_height_ = half_height;
    c.max_nodes_ = 32768;
    return c;
  }

  // Keyhole path around the half-line (-inf, center]: in along Im = -rho,
  // half circle of radius rho about center, out along Im = +rho. Positively
  // oriented; arms reach Re s = center - arm_length.
  static Contour hankel(double loop_radius, double arm_length, std::size_t nodes = 128,
                        double center = 0.0) {
    if (loop_radius <= 0.0) throw PreconditionError("hankel: loop radius must be positive");
    if (arm_length <= loop_radius) throw PreconditionError("hankel: arm length must exceed loop radius");
    Contour c(Kind::hankel, nodes);
    c.radius_ = loop_radius;
    c.arm_length_ = arm_length;
    c.center_ = Complex(center, 0.0);
    c.max_nodes_ = 16384;
    return c;
  }

  // Gauss-Laguerre points on [0, inf) with the weight t^nu e^{-t} divided out
  // of the quadrature weights; intended for integrands carrying that decay.
  static Contour half_line_laguerre(double weight_exponent, std::size_t nodes = 128) {
    if (weight_exponent < 0.0) throw PreconditionError("half_line_laguerre: negative exponent");
    Contour c(Kind::half_line_laguerre, nodes);
    c.nu_ = weight_exponent;
    c.max_nodes_ = 1024;
    return c;
  }

  // Gauss-Jacobi points on [0,1] with the weight t^alpha (1-t)^beta divided
  // out of the quadrature weights.
  static Contour unit_interval_jacobi(double alpha, double beta, std::size_t nodes = 128) {
    if (alpha < 0.0 || beta < 0.0) throw PreconditionError("unit_interval_jacobi: negative exponent");
    Contour c(Kind::unit_interval_jacobi, nodes);
    c.nu_ = alpha;
    c.mu_ = beta;
    c.max_nodes_ = 1024;
    return c;
  }

  static Contour polyline(std::vector<Complex> points, std::size_t nodes = 64) {
    if (points.size() < 2) throw PreconditionError("polyline: need at least two points");
    Contour c(Kind::polyline, nodes);
    c.points_ = std::move(points);
    c.max_nodes_ = 16384;
    return c;
  }

  Kind kind() const { return kind_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t max_nodes() const { return max_nodes_; }

  std::vector<QuadNode> nodes() const { return nodes_at(node_count_); }

  std::vector<QuadNode> nodes_at(std::size_t n) const {
    switch (kind_) {
      case Kind::circle:
        return circle_nodes(std::max<std::size_t>(n, 8));
      case Kind::vertical_line:
        return line_nodes(std::max<std::size_t>(n, 9));
      case Kind::hankel:
        return hankel_nodes(std::max<std::size_t>(n, 16));
      case Kind::half_line_laguerre:
        return laguerre_nodes(std::min(std::max<std::size_t>(n, 8), max_nodes_));
      case Kind::unit_interval_jacobi:
        return jacobi_nodes(std::min(std::max<std::size_t>(n, 8), max_nodes_));
      case Kind::polyline:
        return polyline_nodes(std::max<std::size_t>(n, 8));
    }
    throw PreconditionError("unreachable contour kind");
  }

 private:
  Contour(Kind k, std::size_t n) : kind_(k), node_count_(std::max<std::size_t>(n, 8)) {}

  std::vector<QuadNode> circle_nodes(std::size_t n) const {
    std::vector<QuadNode> out(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double th = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
      const Complex e(std::cos(th), std::sin(th));
      out[j].s = center_ + radius_ * e;
      out[j].w = Complex(0.0, 1.0) * radius_ * e * (2.0 * pi / static_cast<double>(n));
    }
    return out;
  }

  std::vector<QuadNode> line_nodes(std::size_t n) const {
    std::vector<QuadNode> out(n);
    const double h = 2.0 * half_height_ / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double tau = -half_height_ + h * static_cast<double>(j);
      out[j].s = Complex(abscissa_, tau);
      const double cw = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      out[j].w = Complex(0.0, cw * h);
    }
    return out;
  }

  // Straight segment from z0 to z1 with an m-point Gauss-Legendre rule.
  static void segment_nodes(Complex z0, Complex z1, std::size_t m, std::vector<QuadNode>& out) {
    auto [x, w] = detail::gauss_legendre(m);
    const Complex mid = 0.5 * (z0 + z1);
    const Complex half = 0.5 * (z1 - z0);
    for (std::size_t i = 0; i < m; ++i) {
      out.push_back({mid + half * x[i], half * w[i]});
    }
  }

  // Arms are graded geometrically: Re s = -rho (e^u - 1), so both e^s-type
  // and power-law integrands decay exponentially in the parameter u.
  std::vector<QuadNode> hankel_nodes(std::size_t n) const {
    const std::size_t arm = std::max<std::size_t>(n * 3 / 8, 8);
    const std::size_t arc = std::max<std::size_t>(n - 2 * arm, 8);
    std::vector<QuadNode> out;
    out.reserve(2 * arm + arc);
    const Complex c = center_;
    const double rho = radius_;
    const double umax = std::log(arm_length_ / rho + 1.0);
    auto [xu, wu] = detail::gauss_legendre(arm);
    auto arm_points = [&](double sign_im, bool inward) {
      for (std::size_t i = 0; i < arm; ++i) {
        const std::size_t idx = inward ? arm - 1 - i : i;
        const double u = 0.5 * umax * (xu[idx] + 1.0);
        const double x = rho * (std::exp(u) - 1.0);
        // ds = -dx along the inward (lower) arm, +dx outward (upper) arm
        const double dxdu = rho * std::exp(u) * 0.5 * umax * wu[idx];
        out.push_back({c + Complex(-x, sign_im * rho), Complex(inward ? dxdu : -dxdu, 0.0)});
      }
    };
    arm_points(-1.0, true);
    auto [x, w] = detail::gauss_legendre(arc);
    for (std::size_t i = 0; i < arc; ++i) {
      const double th = 0.5 * pi * x[i];  // theta in (-pi/2, pi/2)
      const Complex e(std::cos(th), std::sin(th));
      out.push_back({c + radius_ * e, Complex(0.0, 1.0) * radius_ * e * (0.5 * pi * w[i])});
    }
    arm_points(1.0, false);
    return out;
  }

  std::vector<QuadNode> laguerre_nodes(std::size_t n) const {
    auto [t, lam] = detail::GaussCache::instance().get(1, nu_, 0.0, n);
    std::vector<QuadNode> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i].s = Complex(t[i], 0.0);
      double w = 0.0;
      if (lam[i] > 0.0) {
        const double lw = std::log(lam[i]) + t[i] - nu_ * std::log(t[i]);
        if (lw < 700.0) w = std::exp(lw);
      }
      out[i].w = Complex(w, 0.0);
    }
    return out;
  }

  std::vector<QuadNode> jacobi_nodes(std::size_t n) const {
    auto [t, lam] = detail::GaussCache::instance().get(2, nu_, mu_, n);
    std::vector<QuadNode> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i].s = Complex(t[i], 0.0);
      double w = 0.0;
      if (lam[i] > 0.0) {
        const double lw = std::log(lam[i]) - nu_ * std::log(t[i]) - mu_ * std::log1p(-t[i]);
        if (lw < 700.0) w = std::exp(lw);
      }
      out[i].w = Complex(w, 0.0);
    }
    return out;
  }

  std::vector<QuadNode> polyline_nodes(std::size_t n) const {
    const std::size_t segs = points_.size() - 1;
    const std::size_t per = std::max<std::size_t>(n / segs, 4);
    std::vector<QuadNode> out;
    out.reserve(per * segs);
    for (std::size_t k = 0; k < segs; ++k) segment_nodes(points_[k], points_[k + 1], per, out);
    return out;
  }

  Kind kind_;
  std::size_t node_count_;
  std::size_t max_nodes_ = 16384;
  Complex center_{0.0, 0.0};
  double radius_ = 1.0;
  double abscissa_ = 0.0;
  double half_height_ = 12.0;
  double arm_length_ = 40.0;
  double nu_ = 0.0;
  double mu_ = 0.0;
  std::vector<Complex> points_;
};

}  // namespace pek
