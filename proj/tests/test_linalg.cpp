// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pek/linalg.hpp"

using pek::Complex;
using pek::ComplexMatrix;
using pek::RngStream;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("gue samples are hermitian with the right scale") {
  RngStream rng(1234);
  const ComplexMatrix h = pek::sample_gue(4, rng);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  const int draws = 100000;
  double var1 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ComplexMatrix m = pek::sample_gue(1, rng);
    var1 += m(0, 0).real() * m(0, 0).real();
  }
  var1 /= draws;
  CHECK(std::abs(var1 - 1.0) < 0.03);

  double tr2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ComplexMatrix m = pek::sample_gue(2, rng);
    tr2 += (m * m).trace().real();
  }
  tr2 /= draws;
  CHECK(std::abs(tr2 - 4.0) < 0.05 * 4.0);

  CHECK_THROWS_AS(pek::sample_gue(0, rng), pek::PreconditionError);
}

TEST_CASE("ginibre samples have unit entry variance") {
  RngStream rng(99);
  CHECK(pek::sample_ginibre(2, 3, rng).rows() == 2);
  CHECK(pek::sample_ginibre(2, 3, rng).cols() == 3);

  const int draws = 100000;
  double second = 0.0;
  double sqsv = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ComplexMatrix g = pek::sample_ginibre(1, 1, rng);
    second += std::norm(g(0, 0));
    sqsv += pek::squared_singular_values(g).points[0];
  }
  CHECK(std::abs(second / draws - 1.0) < 0.03);
  CHECK(std::abs(sqsv / draws - 1.0) < 0.03);

  CHECK_THROWS_AS(pek::sample_ginibre(0, 2, rng), pek::PreconditionError);
}

TEST_CASE("haar unitaries are unitary and phase balanced") {
  RngStream rng(7);
  for (int m : {1, 2, 5}) {
    const ComplexMatrix u = pek::sample_haar_unitary(m, rng);
    const ComplexMatrix i = ComplexMatrix::Identity(m, m);
    CHECK((u.adjoint() * u - i).cwiseAbs().maxCoeff() < 1e-12);
  }

  const int draws = 100000;
  Complex mean1(0.0);
  double abs11 = 0.0;
  for (int i = 0; i < draws; ++i) {
    mean1 += pek::sample_haar_unitary(1, rng)(0, 0);
    abs11 += std::norm(pek::sample_haar_unitary(2, rng)(0, 0));
  }
  CHECK(std::abs(mean1 / static_cast<double>(draws)) < 0.02);
  CHECK(std::abs(abs11 / draws - 0.5) < 0.05 * 0.5);

  CHECK_THROWS_AS(pek::sample_haar_unitary(0, rng), pek::PreconditionError);
}

TEST_CASE("truncation extracts the top left block") {
  RngStream rng(5);
  const ComplexMatrix u = pek::sample_haar_unitary(3, rng);
  CHECK((pek::truncate(u, 3, 3) - u).cwiseAbs().maxCoeff() == 0.0);

  const ComplexMatrix t = pek::truncate(u, 2, 2);
  CHECK(t.rows() == 2);
  CHECK(t(1, 0) == u(1, 0));
  const auto sq = pek::squared_singular_values(t);
  for (double v : sq.points) {
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }

  CHECK_THROWS_AS(pek::truncate(u, 4, 2), pek::PreconditionError);
}

TEST_CASE("squared singular values match direct eigenvalues") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = std::sqrt(2.0);
  d(1, 1) = std::sqrt(0.5);
  d(2, 2) = std::sqrt(7.0);
  const auto sq = pek::squared_singular_values(d);
  REQUIRE(sq.points.size() == 3);
  CHECK(std::abs(sq.points[0] - 0.5) < 1e-12);
  CHECK(std::abs(sq.points[1] - 2.0) < 1e-12);
  CHECK(std::abs(sq.points[2] - 7.0) < 1e-12);

  RngStream rng(21);
  const ComplexMatrix u = pek::sample_haar_unitary(4, rng);
  for (double v : pek::squared_singular_values(u).points) CHECK(std::abs(v - 1.0) < 1e-12);

  const ComplexMatrix x = pek::sample_ginibre(3, 2, rng);
  const auto direct = pek::eigenvalues_hermitian(x.adjoint() * x);
  const auto viasvd = pek::squared_singular_values(x);
  REQUIRE(viasvd.points.size() == 2);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(viasvd.points[i] - direct.points[i]) < 1e-10 * std::max(1.0, direct.points[i]));

  // Wide input: same spectrum as its adjoint.
  const ComplexMatrix w = pek::sample_ginibre(2, 5, rng);
  const auto a = pek::squared_singular_values(w);
  const auto b = pek::squared_singular_values(ComplexMatrix(w.adjoint()));
  REQUIRE(a.points.size() == 2);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(a.points[i] - b.points[i]) < 1e-10);

  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(pek::squared_singular_values(bad), pek::PreconditionError);
}

TEST_CASE("hermitian eigenvalues are ascending with small residuals") {
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  for (double v : pek::eigenvalues_hermitian(id).points) CHECK(v == 1.0);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 2.0;
  const auto dv = pek::eigenvalues_hermitian(d).points;
  CHECK(dv[0] == -1.0);
  CHECK(dv[1] == 2.0);

  RngStream rng(31);
  const ComplexMatrix h = pek::sample_gue(4, rng);
  const auto ev = pek::eigenvalues_hermitian(h);
  CHECK(std::is_sorted(ev.points.begin(), ev.points.end()));
  double sum = 0.0;
  for (double v : ev.points) sum += v;
  CHECK(std::abs(sum - h.trace().real()) < 1e-10);

  // Residual ||Hv - lambda v|| per pair, with eigenvectors from a separate
  // decomposition matched to the returned ascending values.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  for (int i = 0; i < 4; ++i) {
    const auto v = es.eigenvectors().col(i);
    CHECK((h * v - ev.points[i] * v).norm() < 1e-9);
  }

  ComplexMatrix nh = ComplexMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(pek::eigenvalues_hermitian(nh), pek::PreconditionError);
}

TEST_CASE("singular value spectrum is unitarily invariant") {
  RngStream rng(77);
  const ComplexMatrix x = pek::sample_ginibre(4, 3, rng);
  const ComplexMatrix u = pek::sample_haar_unitary(4, rng);
  const ComplexMatrix v = pek::sample_haar_unitary(3, rng);
  const auto base = pek::squared_singular_values(x);
  const auto rotated = pek::squared_singular_values(u * x * v);
  for (std::size_t i = 0; i < base.points.size(); ++i)
    CHECK(std::abs(base.points[i] - rotated.points[i]) < 1e-9);
}

TEST_CASE("gue spectrum distribution is conjugation invariant") {
  RngStream rng(2024);
  RngStream wrng(5150);
  const ComplexMatrix w = pek::sample_haar_unitary(2, wrng);
  const int draws = 10000;
  std::vector<double> top_direct, top_conj;
  top_direct.reserve(draws);
  top_conj.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    const ComplexMatrix h1 = pek::sample_gue(2, rng);
    top_direct.push_back(pek::eigenvalues_hermitian(h1).points.back());
    const ComplexMatrix h2 = pek::sample_gue(2, rng);
    const ComplexMatrix c = w * h2 * w.adjoint();
    top_conj.push_back(pek::eigenvalues_hermitian(c).points.back());
  }
  // 1% critical value for the two-sample statistic.
  const double crit = 1.628 * std::sqrt(2.0 / draws);
  CHECK(ks_statistic(top_direct, top_conj) < crit);
}

TEST_CASE("seeded sampling is reproducible") {
  RngStream r1(42);
  RngStream r2(42);
  const ComplexMatrix a = pek::sample_gue(3, r1);
  const ComplexMatrix b = pek::sample_gue(3, r2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  RngStream s1 = r1.split(9);
  RngStream s2 = r2.split(9);
  const ComplexMatrix c = pek::sample_ginibre(2, 2, s1);
  const ComplexMatrix d = pek::sample_ginibre(2, 2, s2);
  CHECK((c - d).cwiseAbs().maxCoeff() == 0.0);

  // Split streams are independent of the parent's consumed state.
  RngStream parent(616);
  RngStream before = parent.split(1);
  parent.normal();
  RngStream after = parent.split(1);
  CHECK(before.raw() == after.raw());
}
