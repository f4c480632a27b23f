// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cmath>
#include <vector>

#include "pek/common.hpp"
#include "pek/polynomial.hpp"

namespace pek {

// Three-term recurrence data for a family of monic orthogonal polynomials:
//   p_{k+1}(x) = (x - alpha_k) p_k(x) - beta_k p_{k-1}(x),   p_0 = 1,
// with beta_0 = integral of the weight (so squared norms are
// h_k = beta_0 * beta_1 * ... * beta_k).
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[0] = total weight mass
};

inline Polynomial polynomial_from_recurrence(const Recurrence& rec, int k) {
  Polynomial pm1;  // zero
  Polynomial p = Polynomial::constant(Complex(1.0));
  for (int j = 0; j < k; ++j) {
    Polynomial next = Polynomial({Complex(-rec.alpha[static_cast<std::size_t>(j)]), Complex(1.0)}) * p -
                      Complex(rec.beta[static_cast<std::size_t>(j)]) * pm1;
    pm1 = p;
    p = next;
  }
  return p;
}

// Probabilists' Hermite: weight e^{-x^2/2} on R; h_k = sqrt(2 pi) k!.
inline Recurrence hermite_recurrence(int count) {
  Recurrence rec;
  rec.alpha.assign(static_cast<std::size_t>(count), 0.0);
  rec.beta.resize(static_cast<std::size_t>(count));
  rec.beta[0] = std::sqrt(2.0 * pi);
  for (int k = 1; k < count; ++k) rec.beta[static_cast<std::size_t>(k)] = static_cast<double>(k);
  return rec;
}

inline Polynomial hermite_monic(int k) {
  if (k < 0) throw PreconditionError("hermite_monic: negative degree");
  return polynomial_from_recurrence(hermite_recurrence(k + 1), k);
}

inline double hermite_norm(int k) { return std::sqrt(2.0 * pi) * factorial(k); }

// Associated Laguerre (monic): weight x^nu e^{-x} on [0, inf); h_k = k! (k+nu)!.
inline Recurrence laguerre_recurrence(int count, double nu) {
  Recurrence rec;
  rec.alpha.resize(static_cast<std::size_t>(count));
  rec.beta.resize(static_cast<std::size_t>(count));
  rec.beta[0] = std::tgamma(nu + 1.0);
  for (int k = 0; k < count; ++k) {
    rec.alpha[static_cast<std::size_t>(k)] = 2.0 * k + nu + 1.0;
    if (k >= 1) rec.beta[static_cast<std::size_t>(k)] = k * (k + nu);
  }
  return rec;
}

inline Polynomial laguerre_monic(int k, int nu) {
  if (k < 0) throw PreconditionError("laguerre_monic: negative degree");
  if (nu < 0) throw PreconditionError("laguerre_monic: negative weight exponent");
  return polynomial_from_recurrence(laguerre_recurrence(k + 1, nu), k);
}

inline double laguerre_norm(int k, int nu) { return factorial(k) * factorial(k + nu); }

// Monic Jacobi on [0,1] with weight x^alpha (1-x)^beta. Obtained from the
// standard [-1,1] recurrence (weight (1-u)^A (1+u)^B, A = beta, B = alpha)
// under u = 2x - 1: alpha-coefficients map to (1+alpha_k)/2, beta to beta_k/4.
inline Recurrence jacobi01_recurrence(int count, double alpha, double beta) {
  const double A = beta, B = alpha;
  Recurrence rec;
  rec.alpha.resize(static_cast<std::size_t>(count));
  rec.beta.resize(static_cast<std::size_t>(count));
  rec.beta[0] = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
  for (int k = 0; k < count; ++k) {
    double a_std;
    if (k == 0) {
      a_std = (B - A) / (A + B + 2.0);
    } else {
      const double d = 2.0 * k + A + B;
      a_std = (B * B - A * A) / (d * (d + 2.0));
    }
    rec.alpha[static_cast<std::size_t>(k)] = (1.0 + a_std) / 2.0;
    if (k >= 1) {
      const double d = 2.0 * k + A + B;
      const double b_std = 4.0 * k * (k + A) * (k + B) * (k + A + B) / (d * d * (d + 1.0) * (d - 1.0));
      rec.beta[static_cast<std::size_t>(k)] = b_std / 4.0;
    }
  }
  return rec;
}

inline Polynomial jacobi01_monic(int k, int alpha, int beta) {
  if (k < 0) throw PreconditionError("jacobi01_monic: negative degree");
  if (alpha < 0 || beta < 0) throw PreconditionError("jacobi01_monic: negative weight exponent");
  return polynomial_from_recurrence(jacobi01_recurrence(k + 1, alpha, beta), k);
}

inline double jacobi01_norm(int k, int alpha, int beta) {
  Recurrence rec = jacobi01_recurrence(k + 1, alpha, beta);
  double h = rec.beta[0];
  for (int j = 1; j <= k; ++j) h *= rec.beta[static_cast<std::size_t>(j)];
  return h;
}

}  // namespace pek
