// Copyright 2026 The qtel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace qtel {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// All stochastic operations take an explicit generator so that every
// experiment is reproducible from a single seed.
using Rng = std::mt19937_64;

enum class Subsystem { A, B };

// Composite index convention used throughout: |i>|j> lives at i*d_B + j.
// Every bipartite operation below assumes it.

inline double uniform_unit(Rng& rng) {
  // 53-bit mantissa uniform in [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard complex Gaussian with independent N(0,1) real and imaginary parts
// (Box-Muller; avoids the implementation-defined std::normal_distribution).
inline Complex complex_gaussian(Rng& rng) {
  const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
  const double v = uniform_unit(rng);
  const double r = std::sqrt(-2.0 * std::log(u));
  const double theta = 2.0 * std::numbers::pi * v;
  return {r * std::cos(theta), r * std::sin(theta)};
}

inline ComplexMatrix ginibre_matrix(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = complex_gaussian(rng);
  return g;
}

inline ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

inline ComplexVector basis_ket(int d, int i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a - b);
}

inline ComplexMatrix hermitize(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

// Kronecker product under the i*d_B + j index convention.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline void require_bipartite_dims(const ComplexMatrix& m, int d_a, int d_b) {
  if (d_a < 1 || d_b < 1 || m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(d_a) * d_b)
    throw std::invalid_argument("matrix dimension does not match d_a * d_b");
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, int d_a, int d_b,
                                   Subsystem keep) {
  require_bipartite_dims(m, d_a, d_b);
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(d_a, d_a);
    for (int i = 0; i < d_a; ++i)
      for (int k = 0; k < d_a; ++k)
        for (int j = 0; j < d_b; ++j) out(i, k) += m(i * d_b + j, k * d_b + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_b, d_b);
  for (int j = 0; j < d_b; ++j)
    for (int l = 0; l < d_b; ++l)
      for (int i = 0; i < d_a; ++i) out(j, l) += m(i * d_b + j, i * d_b + l);
  return out;
}

// Transposes the second-factor indices only.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int d_a, int d_b) {
  require_bipartite_dims(m, d_a, d_b);
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_b; ++j)
      for (int k = 0; k < d_a; ++k)
        for (int l = 0; l < d_b; ++l)
          out(i * d_b + j, k * d_b + l) = m(i * d_b + l, k * d_b + j);
  return out;
}

// Eigenvalues ascending, of the symmetrized input.
inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigensystem(
    const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  return solver;
}

inline double min_eigenvalue(const ComplexMatrix& m) {
  return hermitian_eigensystem(m).eigenvalues()(0);
}

inline double operator_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

// (1/2)||a - b||_1 for Hermitian arguments.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const RealVector eig = hermitian_eigensystem(a - b).eigenvalues();
  return 0.5 * eig.cwiseAbs().sum();
}

inline constexpr double kSchmidtRankCutoff = 1e-8;  // relative to largest coefficient

struct SchmidtDecomposition {
  RealVector coefficients;      // singular values, descending
  ComplexMatrix left_vectors;   // d_A x k, orthonormal columns
  ComplexMatrix right_vectors;  // d_B x k, orthonormal columns

  int rank() const {
    if (coefficients.size() == 0) return 0;
    const double cutoff = kSchmidtRankCutoff * coefficients(0);
    int r = 0;
    while (r < coefficients.size() && coefficients(r) > cutoff) ++r;
    return r;
  }

  ComplexVector reconstruct() const {
    ComplexVector v = ComplexVector::Zero(left_vectors.rows() * right_vectors.rows());
    for (Eigen::Index k = 0; k < coefficients.size(); ++k)
      v += coefficients(k) *
           tensor(ComplexVector(left_vectors.col(k)), ComplexVector(right_vectors.col(k)));
    return v;
  }
};

inline SchmidtDecomposition schmidt(const ComplexVector& v, int d_a, int d_b) {
  if (v.size() != static_cast<Eigen::Index>(d_a) * d_b)
    throw std::invalid_argument("vector length does not match d_a * d_b");
  if (v.norm() < 1e-300) throw std::invalid_argument("cannot decompose the zero vector");
  ComplexMatrix coeff(d_a, d_b);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_b; ++j) coeff(i, j) = v(i * d_b + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition dec;
  dec.coefficients = svd.singularValues();
  dec.left_vectors = svd.matrixU();
  dec.right_vectors = svd.matrixV().conjugate();
  return dec;
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// phases folded into Q (plain QR alone is not Haar).
inline ComplexMatrix haar_unitary(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  const ComplexMatrix g = ginibre_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= (a > 0.0) ? rii / a : Complex(1.0, 0.0);
  }
  return q;
}

// Uniform pure state: normalized vector of complex Gaussians.
inline ComplexVector haar_state(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = complex_gaussian(rng);
  const double n = v.norm();
  if (n < 1e-300) return haar_state(d, rng);
  return v / n;
}

}  // namespace qtel
