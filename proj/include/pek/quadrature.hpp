// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "pek/common.hpp"
#include "pek/contour.hpp"

namespace pek {

struct QuadratureResult {
  Complex value{0.0, 0.0};
  double error_estimate = std::numeric_limits<double>::infinity();
  std::size_t nodes_used = 0;
  bool converged = false;
};

namespace detail {

template <class F>
Complex weighted_sum(F&& f, const std::vector<QuadNode>& nodes) {
  Complex acc(0.0);
  for (const QuadNode& nd : nodes) {
    const Complex v = f(nd.s);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw QuadratureError("integrate: non-finite integrand sample");
    acc += nd.w * v;
  }
  return acc;
}

}  // namespace detail

// Refines by doubling the node count until two consecutive levels agree
// within tol (relative to max(1, |value|)) or the contour's cap is reached;
// the error estimate is the last inter-level difference.
template <class F>
QuadratureResult integrate(F&& f, const Contour& c, double tol = 1e-10) {
  if (!(tol > 0.0)) throw PreconditionError("integrate: tolerance must be positive");
  std::size_t n = c.node_count();
  Complex prev = detail::weighted_sum(f, c.nodes_at(n));
  QuadratureResult res;
  res.value = prev;
  res.nodes_used = n;
  while (true) {
    const std::size_t next = n * 2;
    if (next > c.max_nodes()) break;
    const Complex cur = detail::weighted_sum(f, c.nodes_at(next));
    res.error_estimate = std::abs(cur - prev);
    res.value = cur;
    res.nodes_used = next;
    if (res.error_estimate <= tol * std::max(1.0, std::abs(cur))) {
      res.converged = true;
      return res;
    }
    prev = cur;
    n = next;
  }
  // Single-level rules (cap already at the initial count) get no estimate
  // refinement; report the best value unconverged unless a second level ran.
  return res;
}

struct DoubleIntegralOptions {
  bool check_separation = false;
  double min_separation = 1e-8;
};

// Tensor-product quadrature over two contours with per-axis refinement. The
// error estimate combines the last per-axis differences.
template <class F>
QuadratureResult integrate_double(F&& f, const Contour& c1, const Contour& c2, double tol = 1e-8,
                                  DoubleIntegralOptions opts = {}) {
  if (!(tol > 0.0)) throw PreconditionError("integrate_double: tolerance must be positive");
  std::size_t n1 = c1.node_count();
  std::size_t n2 = c2.node_count();

  auto tensor = [&](std::size_t a, std::size_t b) {
    const auto na = c1.nodes_at(a);
    const auto nb = c2.nodes_at(b);
    if (opts.check_separation) {
      for (const QuadNode& p : na)
        for (const QuadNode& q : nb)
          if (std::abs(p.s - q.s) < opts.min_separation)
            throw QuadratureError("integrate_double: contour collision");
    }
    Complex acc(0.0);
    for (const QuadNode& p : na) {
      Complex row(0.0);
      for (const QuadNode& q : nb) {
        const Complex v = f(p.s, q.s);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw QuadratureError("integrate_double: non-finite integrand sample");
        row += q.w * v;
      }
      acc += p.w * row;
    }
    return acc;
  };

  Complex base = tensor(n1, n2);
  QuadratureResult res;
  res.value = base;
  res.nodes_used = n1 + n2;
  for (int round = 0; round < 12; ++round) {
    const bool can1 = 2 * n1 <= c1.max_nodes();
    const bool can2 = 2 * n2 <= c2.max_nodes();
    if (!can1 && !can2) break;
    const Complex r1 = can1 ? tensor(2 * n1, n2) : base;
    const Complex r2 = can2 ? tensor(n1, 2 * n2) : base;
    const double e1 = std::abs(r1 - base);
    const double e2 = std::abs(r2 - base);
    res.error_estimate = e1 + e2;
    if (res.error_estimate <= tol * std::max(1.0, std::abs(base))) {
      res.value = can1 && can2 ? tensor(2 * n1, 2 * n2) : (can1 ? r1 : r2);
      res.nodes_used = (can1 ? 2 * n1 : n1) + (can2 ? 2 * n2 : n2);
      res.converged = true;
      return res;
    }
    if (can1 && (!can2 || e1 >= e2)) {
      n1 *= 2;
      base = r1;
    } else {
      n2 *= 2;
      base = r2;
    }
    res.value = base;
    res.nodes_used = n1 + n2;
  }
  return res;
}

}  // namespace pek
