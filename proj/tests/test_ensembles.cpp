// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "pek/ensemble.hpp"

using pek::Complex;
using pek::RngStream;

namespace {

// Gram entry int P_j(x) Q_k(x) dx over a bounded window covering the decay.
double gram_entry(const pek::BiorthogonalSystem& sys, int j, int k, double lo, double hi) {
  const auto& pj = sys.P[static_cast<std::size_t>(j)];
  const auto& qk = std::get<pek::WeightedFunction>(sys.Q[static_cast<std::size_t>(k)]);
  return oracle::integrate([&](double x) { return pj.eval_real(x) * qk(x); }, lo, hi, 1e-11);
}

void check_gram_identity(const pek::BiorthogonalSystem& sys, double lo, double hi, double tol) {
  for (int j = 0; j < sys.size(); ++j)
    for (int k = 0; k < sys.size(); ++k) {
      const double target = j == k ? 1.0 : 0.0;
      INFO("gram entry (" << j << "," << k << ")");
      CHECK(std::abs(gram_entry(sys, j, k, lo, hi) - target) < tol);
    }
}

}  // namespace

TEST_CASE("hermite ensemble basics") {
  auto [ens, sys] = pek::gue_ensemble(2);
  CHECK(std::abs(ens.z - 4.0 * pek::pi) < 1e-12 * ens.z);
  CHECK(ens.f[0](0.5) == std::exp(-0.125));
  CHECK(ens.support.contains(-3.0));

  auto [ens1, sys1] = pek::gue_ensemble(1);
  auto k1 = pek::kernel_from_system(sys1);
  CHECK(std::abs(k1(0.0, 0.0).real() - 1.0 / std::sqrt(2.0 * pek::pi)) < 1e-12);

  CHECK_THROWS_AS(pek::gue_ensemble(0), pek::PreconditionError);
}

TEST_CASE("hermite sum kernel equals christoffel-darboux form") {
  const int n = 4;
  auto [ens, sys] = pek::gue_ensemble(n);
  auto kern = pek::kernel_from_system(sys);
  const double x = 0.3, y = -0.7;
  const auto pn = pek::hermite_monic(n);
  const auto pn1 = pek::hermite_monic(n - 1);
  const double cd = std::exp(-0.5 * y * y) *
                    (pn.eval_real(x) * pn1.eval_real(y) - pn1.eval_real(x) * pn.eval_real(y)) /
                    (pek::hermite_norm(n - 1) * (x - y));
  CHECK(std::abs(kern(x, y).real() - cd) < 1e-10);
}

TEST_CASE("hermite gram matrix is the identity") {
  auto [ens, sys] = pek::gue_ensemble(6);
  check_gram_identity(sys, -16.0, 16.0, 1e-9);
}

TEST_CASE("laguerre ensemble basics") {
  auto [ens, sys] = pek::laguerre_ensemble(2, 0);
  CHECK(std::abs(ens.z - 2.0) < 1e-14);
  CHECK(ens.f[1](-0.5) == 0.0);  // weights vanish off the support

  auto [ens1, sys1] = pek::laguerre_ensemble(1, 0);
  auto k1 = pek::kernel_from_system(sys1);
  CHECK(std::abs(k1(1.0, 1.0).real() - std::exp(-1.0)) < 1e-12);

  check_gram_identity(pek::laguerre_ensemble(5, 0).second, 0.0, 140.0, 1e-9);
  check_gram_identity(pek::laguerre_ensemble(5, 2).second, 0.0, 140.0, 1e-9);

  CHECK_THROWS_AS(pek::laguerre_ensemble(2, -1), pek::PreconditionError);
}

TEST_CASE("jacobi ensemble basics") {
  auto [ens, sys] = pek::jacobi_ensemble(1, 0, 3);
  CHECK(std::abs(ens.z - 0.5) < 1e-14);

  check_gram_identity(pek::jacobi_ensemble(4, 1, 10).second, 0.0, 1.0, 1e-9);

  auto kern = pek::kernel_from_system(pek::jacobi_ensemble(2, 1, 7).second);
  CHECK(kern(1.2, 1.2) == Complex(0.0));
  CHECK(std::abs(kern(0.4, 0.4)) > 0.0);

  // mu = m - n - nu < n leaves no determinantal structure.
  CHECK_THROWS_AS(pek::jacobi_ensemble(2, 0, 3), pek::PreconditionError);
}

TEST_CASE("ensemble weight family is nondegenerate") {
  auto [ens, sys] = pek::laguerre_ensemble(3, 1);
  Eigen::MatrixXd g(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      g(j, k) = oracle::integrate(
          [&](double x) { return std::pow(x, j) * ens.f[static_cast<std::size_t>(k)](x); }, 0.0,
          120.0, 1e-10);
  CHECK(std::abs(g.determinant()) > 1e-6);
}

TEST_CASE("degenerate ensemble variants agree atom-wise") {
  auto single = pek::degenerate_ensemble({1.0});
  REQUIRE(single.size() == 1);
  CHECK(single.P[0].degree() == 0);
  CHECK(single.P[0].coeff(0) == Complex(1.0));
  const auto& row = std::get<pek::AtomicMeasureRow>(single.Q[0]);
  REQUIRE(row.atoms.size() == 1);
  CHECK(row.atoms[0].location == 1.0);
  CHECK(row.atoms[0].weight == 1.0);

  const std::vector<double> a{1.0, 2.0};
  auto monic = pek::atomic_kernel_from_system(pek::degenerate_ensemble(a));
  auto lagr = pek::atomic_kernel_from_system(
      pek::degenerate_ensemble(a, pek::DegenerateVariant::lagrange));
  REQUIRE(monic.locations == lagr.locations);
  for (double x : {0.3, 1.7}) {
    for (std::size_t i = 0; i < monic.locations.size(); ++i)
      CHECK(std::abs(monic.mass(i, Complex(x)) - lagr.mass(i, Complex(x))) < 1e-12);
  }

  CHECK_THROWS_AS(pek::degenerate_ensemble({1.0, 1.0}), pek::PreconditionError);
  CHECK_THROWS_AS(pek::degenerate_ensemble({-1.0, 2.0}), pek::PreconditionError);
  CHECK_THROWS_AS(pek::degenerate_ensemble({}), pek::PreconditionError);
}

TEST_CASE("degenerate biorthogonality is exact") {
  const std::vector<double> a{0.5, 1.0, 2.5};
  for (auto variant : {pek::DegenerateVariant::monic, pek::DegenerateVariant::lagrange}) {
    auto sys = pek::degenerate_ensemble(a, variant);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const auto& qk = std::get<pek::AtomicMeasureRow>(sys.Q[static_cast<std::size_t>(k)]);
        double sum = 0.0;
        for (const auto& atom : qk.atoms)
          sum += sys.P[static_cast<std::size_t>(j)].eval_real(atom.location) * atom.weight;
        CHECK(std::abs(sum - (j == k ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("kernel construction rejects mixed or mismatched systems") {
  auto sys = pek::gue_ensemble(2).second;
  CHECK_THROWS_AS(pek::atomic_kernel_from_system(sys), pek::PreconditionError);

  auto atomic = pek::degenerate_ensemble({1.0, 2.0});
  CHECK_THROWS_AS(pek::kernel_from_system(atomic), pek::PreconditionError);

  sys.Q.pop_back();
  CHECK_THROWS_AS(pek::kernel_from_system(sys), pek::PreconditionError);
}

TEST_CASE("trace of the kernel recovers the particle count") {
  auto trace = [](const pek::CorrelationKernel& k, double lo, double hi) {
    return oracle::integrate([&](double x) { return k(x, x).real(); }, lo, hi, 1e-10);
  };
  auto gue = pek::kernel_from_system(pek::gue_ensemble(4).second);
  CHECK(std::abs(trace(gue, -16.0, 16.0) - 4.0) < 1e-7);
  auto lag = pek::kernel_from_system(pek::laguerre_ensemble(3, 2).second);
  CHECK(std::abs(trace(lag, 0.0, 140.0) - 3.0) < 1e-7);
  auto jac = pek::kernel_from_system(pek::jacobi_ensemble(3, 1, 9).second);
  CHECK(std::abs(trace(jac, 0.0, 1.0) - 3.0) < 1e-7);
}

TEST_CASE("kernel satisfies the reproducing property") {
  auto kern = pek::kernel_from_system(pek::gue_ensemble(3).second);
  RngStream rng(555);
  for (int trial = 0; trial < 5; ++trial) {
    const double x = -2.0 + 4.0 * rng.uniform();
    const double y = -2.0 + 4.0 * rng.uniform();
    const double composed = oracle::integrate(
        [&](double t) { return (kern(x, t) * kern(t, y)).real(); }, -16.0, 16.0, 1e-9);
    CHECK(std::abs(composed - kern(x, y).real()) < 1e-6);
  }
}

TEST_CASE("conjugated kernels give identical correlation determinants") {
  auto base = pek::kernel_from_system(pek::laguerre_ensemble(3, 1).second);
  auto gauged = pek::CorrelationKernel(
      [&base](double x, double y) {
        return std::exp(0.3 * (x - y)) * base(x, y);
      },
      base.n(), base.support());
  const std::vector<double> pts{0.4, 1.1, 2.3};
  for (std::size_t k = 1; k <= pts.size(); ++k) {
    const std::vector<double> sub(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(k));
    const Complex d1 = pek::correlation_determinant(base, sub);
    const Complex d2 = pek::correlation_determinant(gauged, sub);
    REQUIRE(std::abs(d1) > 0.0);
    CHECK(std::abs(d1 - d2) < 1e-8 * std::abs(d1));
  }
}

TEST_CASE("average characteristic polynomial estimator") {
  // Deterministic samples: exact value, zero spread.
  pek::SpectrumSample fixed;
  fixed.points = {1.5};
  std::vector<pek::SpectrumSample> det_samples(200, fixed);
  auto flat = pek::average_char_poly_mc(det_samples, {0.0, 2.0});
  CHECK(flat.estimate[0] == -1.5);
  CHECK(flat.estimate[1] == 0.5);
  CHECK(flat.stderr_[0] == 0.0);
  CHECK(flat.stderr_[1] == 0.0);

  CHECK_THROWS_AS(pek::average_char_poly_mc({}, {0.0}), pek::PreconditionError);
  CHECK_THROWS_AS(pek::average_char_poly_mc(std::vector<pek::SpectrumSample>(50, fixed), {0.0}),
                  pek::PreconditionError);

  RngStream rng(8080);
  const int draws = 100000;
  std::vector<pek::SpectrumSample> g1, g2;
  g1.reserve(draws);
  g2.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    g1.push_back(pek::eigenvalues_hermitian(pek::sample_gue(1, rng)));
    g2.push_back(pek::eigenvalues_hermitian(pek::sample_gue(2, rng)));
  }
  auto e1 = pek::average_char_poly_mc(g1, {2.0});
  CHECK(std::abs(e1.estimate[0] - 2.0) < 3.0 * e1.stderr_[0]);

  // E prod(0 - x_j) for the 2x2 Hermitian ensemble is the monic
  // second-degree orthogonal value at 0, which is -1.
  auto e2 = pek::average_char_poly_mc(g2, {0.0});
  CHECK(std::abs(e2.estimate[0] - (-1.0)) < 3.0 * e2.stderr_[0]);
}
