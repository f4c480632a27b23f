// Copyright (c) 2026 the pek authors
// SPDX-License-Identifier: BSD-3-Clause
#pragma once

// Complex dense linear algebra and matrix-ensemble sampling: GUE, Ginibre,
// Haar unitary, truncations, and spectra.  Backed by Eigen; the accuracy
// contracts (residual bounds), not the algorithms, are the interface.

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "pek/common.hpp"

namespace pek {

using ComplexMatrix = Eigen::MatrixXcd;

struct SpectrumSample {
  enum class Kind { eigenvalues, squared_singular_values };
  std::vector<double> points;  // ascending
  Kind kind = Kind::eigenvalues;
};

// Hermitian n x n with real N(0,1) diagonal and standard complex normal
// strictly-upper entries mirrored by conjugation.  Draw order is fixed
// (row-major over the upper triangle) so seeds reproduce exactly.
inline ComplexMatrix sample_gue(int n, RngStream& rng) {
  if (n < 1) throw PreconditionError("sample_gue: n must be >= 1");
  ComplexMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = Complex(rng.normal(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const Complex z = rng.cnormal();
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

// i.i.d. standard complex normal entries, E|g_ij|^2 = 1.
inline ComplexMatrix sample_ginibre(int rows, int cols, RngStream& rng) {
  if (rows < 1 || cols < 1) throw PreconditionError("sample_ginibre: dimensions must be >= 1");
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  return g;
}

// Haar unitary via QR of a Ginibre matrix with the R-diagonal phases
// divided out; this makes the factorization unique and the Q factor exactly
// Haar distributed.
inline ComplexMatrix sample_haar_unitary(int m, RngStream& rng) {
  if (m < 1) throw PreconditionError("sample_haar_unitary: m must be >= 1");
  const ComplexMatrix g = sample_ginibre(m, m, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix u = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    // A zero R diagonal has probability zero; treat it as a degenerate draw.
    const Complex phase = mag > 0.0 ? d / mag : Complex(1.0);
    u.col(j) *= phase;
  }
  return u;
}

// Top-left block.
inline ComplexMatrix truncate(const ComplexMatrix& u, int rows, int cols) {
  if (rows < 1 || cols < 1 || rows > u.rows() || cols > u.cols())
    throw PreconditionError("truncate: block size out of range");
  return u.topLeftCorner(rows, cols);
}

// Ascending eigenvalues of X*X (equivalently XX* when X is wide); count is
// the smaller dimension.
inline SpectrumSample squared_singular_values(const ComplexMatrix& x) {
  if (!x.allFinite()) throw PreconditionError("squared_singular_values: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  const auto& sv = svd.singularValues();
  SpectrumSample out;
  out.kind = SpectrumSample::Kind::squared_singular_values;
  out.points.resize(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) out.points[i] = sv(i) * sv(i);
  std::sort(out.points.begin(), out.points.end());
  return out;
}

// Ascending real spectrum of a Hermitian matrix.
inline SpectrumSample eigenvalues_hermitian(const ComplexMatrix& h) {
  if (!h.allFinite()) throw PreconditionError("eigenvalues_hermitian: non-finite entries");
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw PreconditionError("eigenvalues_hermitian: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw QuadratureError("eigenvalues_hermitian: eigensolver failed");
  SpectrumSample out;
  out.kind = SpectrumSample::Kind::eigenvalues;
  out.points.assign(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  return out;
}

}  // namespace pek
