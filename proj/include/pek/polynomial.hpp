// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pek/common.hpp"

namespace pek {

// Dense polynomial over C, coefficients stored in increasing degree order:
// coeff(j) multiplies x^j. The zero polynomial has degree -1.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(Complex v) { return Polynomial({v}); }

  static Polynomial monomial(int k, Complex lead = Complex(1.0)) {
    std::vector<Complex> c(static_cast<std::size_t>(k) + 1, Complex(0.0));
    c.back() = lead;
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }

  Complex coeff(int j) const {
    if (j < 0 || j >= static_cast<int>(c_.size())) return Complex(0.0);
    return c_[static_cast<std::size_t>(j)];
  }

  const std::vector<Complex>& coeffs() const { return c_; }

  bool is_zero() const { return c_.empty(); }

  bool is_monic(double tol = 0.0) const {
    if (c_.empty()) return false;
    return std::abs(c_.back() - Complex(1.0)) <= tol;
  }

  Complex operator()(Complex x) const {
    Complex acc(0.0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  // Real Horner path for real coefficients evaluated on the real axis.
  double eval_real(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].real();
    return acc;
  }

  double max_imag_coeff() const {
    double m = 0.0;
    for (const Complex& v : c_) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Complex(0.0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Complex(0.0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }

  Polynomial& operator*=(Complex s) {
    for (Complex& v : c_) v *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Complex> c(a.c_.size() + b.c_.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  // p(scale * x), as a polynomial in x.
  Polynomial scaled_argument(Complex scale) const {
    std::vector<Complex> c(c_);
    Complex pw(1.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      c[j] *= pw;
      pw *= scale;
    }
    return Polynomial(std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
  }

  std::vector<Complex> c_;
};

// Monic polynomial with the prescribed roots.
inline Polynomial poly_from_roots(const std::vector<double>& roots) {
  Polynomial p = Polynomial::constant(Complex(1.0));
  for (double r : roots) p = p * Polynomial({Complex(-r), Complex(1.0)});
  return p;
}

// Lagrange interpolation basis on distinct nodes: result[k](a_j) = delta_{jk}.
inline std::vector<Polynomial> lagrange_basis(const std::vector<double>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i] == a[j]) throw PreconditionError("lagrange_basis: repeated node");
  std::vector<Polynomial> basis;
  basis.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Polynomial p = Polynomial::constant(Complex(1.0));
    double denom = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      p = p * Polynomial({Complex(-a[j]), Complex(1.0)});
      denom *= a[k] - a[j];
    }
    basis.push_back(p * Complex(1.0 / denom));
  }
  return basis;
}

}  // namespace pek
