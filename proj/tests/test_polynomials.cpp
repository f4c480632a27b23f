// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "pek/orthopoly.hpp"
#include "pek/polynomial.hpp"
#include "pek/weighted_function.hpp"

using pek::Complex;
using pek::Polynomial;

TEST_CASE("polynomial basics") {
  Polynomial p({Complex(1.0), Complex(0.0), Complex(3.0)});  // 1 + 3x^2
  CHECK(p.degree() == 2);
  CHECK(p.coeff(0) == Complex(1.0));
  CHECK(p.coeff(1) == Complex(0.0));
  CHECK(p.coeff(2) == Complex(3.0));
  CHECK(p.coeff(5) == Complex(0.0));
  CHECK(p.eval_real(2.0) == Catch::Approx(13.0));
  CHECK(std::abs(p(Complex(0.0, 1.0)) - Complex(-2.0, 0.0)) < 1e-15);

  Polynomial z;
  CHECK(z.degree() == -1);
  CHECK(z.is_zero());
  CHECK((p + z).degree() == 2);
  CHECK((p - p).is_zero());
}

TEST_CASE("polynomial trailing-zero trim") {
  Polynomial p({Complex(1.0), Complex(2.0), Complex(0.0)});
  CHECK(p.degree() == 1);
  Polynomial q({Complex(1.0), Complex(-1.0)});
  Polynomial r({Complex(1.0), Complex(1.0)});
  CHECK((q * r).degree() == 2);  // 1 - x^2
  CHECK((q * r).coeff(1) == Complex(0.0));
}

TEST_CASE("horner agrees with naive power sum") {
  Polynomial p({Complex(0.5), Complex(-1.25), Complex(2.0), Complex(0.75), Complex(-0.1),
                Complex(1.0 / 3.0), Complex(4.0), Complex(-2.5), Complex(0.2), Complex(1.1),
                Complex(-0.7), Complex(0.01), Complex(3.0), Complex(-0.33), Complex(0.9),
                Complex(2.2), Complex(-1.0), Complex(0.6), Complex(-0.05), Complex(1.5),
                Complex(0.8)});
  REQUIRE(p.degree() == 20);
  for (double x : {-10.0, -3.7, -1.0, -0.2, 0.0, 0.4, 1.0, 2.9, 6.5, 10.0}) {
    double naive = 0.0, pw = 1.0;
    for (int j = 0; j <= p.degree(); ++j) {
      naive += p.coeff(j).real() * pw;
      pw *= x;
    }
    const double scale = std::max(1.0, std::fabs(naive));
    CHECK(std::fabs(p.eval_real(x) - naive) < 1e-12 * scale);
  }
}

TEST_CASE("scaled argument substitution") {
  Polynomial p({Complex(1.0), Complex(2.0), Complex(3.0)});
  Polynomial q = p.scaled_argument(Complex(0.0, 1.0));  // p(ix)
  for (double x : {0.3, -1.7}) {
    CHECK(std::abs(q(Complex(x)) - p(Complex(0.0, x))) < 1e-14);
  }
}

TEST_CASE("poly_from_roots") {
  CHECK(pek::poly_from_roots({}).degree() == 0);
  CHECK(pek::poly_from_roots({}).coeff(0) == Complex(1.0));

  Polynomial d = pek::poly_from_roots({1.0, 1.0});
  CHECK(d.degree() == 2);
  CHECK(d.coeff(0) == Complex(1.0));
  CHECK(d.coeff(1) == Complex(-2.0));
  CHECK(d.coeff(2) == Complex(1.0));

  const std::vector<double> roots = {0.5, 1.25, 2.0, 3.75};
  Polynomial p = pek::poly_from_roots(roots);
  CHECK(p.is_monic());
  double scale = 0.0;
  for (int j = 0; j <= p.degree(); ++j) scale = std::max(scale, std::abs(p.coeff(j)));
  for (double r : roots) CHECK(std::fabs(p.eval_real(r)) < 1e-10 * scale);
}

TEST_CASE("lagrange basis") {
  auto single = pek::lagrange_basis({1.0});
  REQUIRE(single.size() == 1);
  CHECK(single[0].degree() == 0);
  CHECK(single[0].coeff(0) == Complex(1.0));

  auto two = pek::lagrange_basis({1.0, 2.0});
  REQUIRE(two.size() == 2);
  // 2 - x and x - 1
  CHECK(std::abs(two[0].coeff(0) - Complex(2.0)) < 1e-15);
  CHECK(std::abs(two[0].coeff(1) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(two[1].coeff(0) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(two[1].coeff(1) - Complex(1.0)) < 1e-15);

  const std::vector<double> nodes = {0.5, 1.0, 2.5, 4.0};
  auto basis = pek::lagrange_basis(nodes);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    CHECK(basis[k].degree() == static_cast<int>(nodes.size()) - 1);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double expect = (j == k) ? 1.0 : 0.0;
      CHECK(std::fabs(basis[k].eval_real(nodes[j]) - expect) < 1e-12);
    }
  }

  CHECK_THROWS_AS(pek::lagrange_basis({1.0, 1.0}), pek::PreconditionError);
}

TEST_CASE("monic hermite") {
  CHECK(pek::hermite_monic(0).degree() == 0);
  CHECK(pek::hermite_monic(0).coeff(0) == Complex(1.0));

  Polynomial h2 = pek::hermite_monic(2);
  CHECK(h2.coeff(2) == Complex(1.0));
  CHECK(h2.coeff(1) == Complex(0.0));
  CHECK(std::abs(h2.coeff(0) - Complex(-1.0)) < 1e-15);

  Polynomial h3 = pek::hermite_monic(3);
  const double cross = oracle::integrate_gaussian_decay(
      [&](double x) { return h2.eval_real(x) * h3.eval_real(x) * std::exp(-x * x / 2.0); });
  CHECK(std::fabs(cross) < 1e-10);

  for (int k = 0; k <= 6; ++k) {
    Polynomial hk = pek::hermite_monic(k);
    CHECK(hk.is_monic());
    const double norm = oracle::integrate_gaussian_decay(
        [&](double x) { return hk.eval_real(x) * hk.eval_real(x) * std::exp(-x * x / 2.0); });
    CHECK(norm == Catch::Approx(pek::hermite_norm(k)).epsilon(1e-9));
  }
}

TEST_CASE("monic laguerre") {
  CHECK(pek::laguerre_monic(0, 3).coeff(0) == Complex(1.0));

  Polynomial l1 = pek::laguerre_monic(1, 0);
  CHECK(l1.coeff(1) == Complex(1.0));
  CHECK(std::abs(l1.coeff(0) - Complex(-1.0)) < 1e-15);

  Polynomial l2 = pek::laguerre_monic(2, 1);
  for (int low = 0; low <= 1; ++low) {
    Polynomial pl = pek::laguerre_monic(low, 1);
    const double cross = oracle::integrate_exponential_decay(
        [&](double x) { return l2.eval_real(x) * pl.eval_real(x) * x * std::exp(-x); });
    CHECK(std::fabs(cross) < 1e-10);
  }

  for (int nu : {0, 2}) {
    for (int k = 0; k <= 5; ++k) {
      Polynomial lk = pek::laguerre_monic(k, nu);
      CHECK(lk.is_monic());
      const double norm = oracle::integrate_exponential_decay([&](double x) {
        return lk.eval_real(x) * lk.eval_real(x) * std::pow(x, nu) * std::exp(-x);
      });
      CHECK(norm == Catch::Approx(pek::laguerre_norm(k, nu)).epsilon(1e-9));
    }
  }
}

TEST_CASE("monic jacobi on the unit interval") {
  CHECK(pek::jacobi01_monic(0, 2, 3).coeff(0) == Complex(1.0));

  Polynomial j1 = pek::jacobi01_monic(1, 0, 0);
  CHECK(j1.coeff(1) == Complex(1.0));
  CHECK(std::abs(j1.coeff(0) - Complex(-0.5)) < 1e-15);

  // Gram off-diagonals for alpha=1, beta=2 through degree 2.
  for (int a = 0; a <= 2; ++a) {
    for (int b = a + 1; b <= 2; ++b) {
      Polynomial pa = pek::jacobi01_monic(a, 1, 2);
      Polynomial pb = pek::jacobi01_monic(b, 1, 2);
      const double cross = oracle::integrate(
          [&](double x) {
            return pa.eval_real(x) * pb.eval_real(x) * x * (1.0 - x) * (1.0 - x);
          },
          0.0, 1.0);
      CHECK(std::fabs(cross) < 1e-10);
    }
  }

  for (int k = 0; k <= 5; ++k) {
    Polynomial jk = pek::jacobi01_monic(k, 2, 1);
    CHECK(jk.is_monic());
    const double expect = pek::jacobi01_norm(k, 2, 1);
    const double norm = oracle::integrate(
        [&](double x) {
          double v = jk.eval_real(x);
          return v * v * x * x * (1.0 - x);
        },
        0.0, 1.0, 1e-9 * expect);
    CHECK(norm == Catch::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("weighted function support clipping") {
  pek::WeightedFunction w([](double x) { return x * x; }, pek::Interval::unit(), "square");
  CHECK(w(0.5) == Catch::Approx(0.25));
  CHECK(w(1.5) == 0.0);
  CHECK(w(-0.5) == 0.0);
  CHECK(w.tag() == "square");
}
