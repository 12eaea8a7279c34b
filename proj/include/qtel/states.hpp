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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtel/qmath.hpp"

namespace qtel {

// Raised when a value fails one of its declared invariants. The invariant
// name is machine-readable so loaders can report exactly what was violated.
class validation_error : public std::runtime_error {
 public:
  validation_error(std::string invariant, const std::string& message)
      : std::runtime_error(message), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPositivityTol = 1e-9;

// Hermitian, PSD, unit-trace matrix. Invariants are checked on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
      throw validation_error("square", "density matrix must be square and nonempty");
    if (!matrix_.allFinite())
      throw validation_error("finite_entries", "density matrix has NaN or Inf entries");
    if (max_abs_diff(matrix_, matrix_.adjoint()) > kHermitianTol)
      throw validation_error("hermitian", "density matrix is not Hermitian");
    if (std::abs(matrix_.trace().real() - 1.0) > kTraceTol ||
        std::abs(matrix_.trace().imag()) > kTraceTol)
      throw validation_error("unit_trace", "density matrix trace is not 1");
    if (min_eigenvalue(matrix_) < -kPositivityTol)
      throw validation_error("positive_semidefinite",
                             "density matrix has a negative eigenvalue");
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

// Density matrix on C^{d_A} (x) C^{d_B} with the factor dimensions pinned,
// so that every reduced/transposed/filtered view agrees on the indexing.
class BipartiteState {
 public:
  BipartiteState(int d_a, int d_b, ComplexMatrix m)
      : d_a_(d_a), d_b_(d_b), state_(std::move(m)) {
    if (static_cast<Eigen::Index>(d_a) * d_b != state_.matrix().rows())
      throw validation_error("factor_dimensions",
                             "d_a * d_b does not match the matrix dimension");
  }
  BipartiteState(int d_a, int d_b, DensityMatrix state)
      : d_a_(d_a), d_b_(d_b), state_(std::move(state)) {
    if (static_cast<Eigen::Index>(d_a) * d_b != state_.matrix().rows())
      throw validation_error("factor_dimensions",
                             "d_a * d_b does not match the matrix dimension");
  }

  int dim_a() const { return d_a_; }
  int dim_b() const { return d_b_; }
  bool square() const { return d_a_ == d_b_; }
  const DensityMatrix& density() const { return state_; }
  const ComplexMatrix& matrix() const { return state_.matrix(); }

 private:
  int d_a_;
  int d_b_;
  DensityMatrix state_;
};

inline BipartiteState pure_state(int d_a, int d_b, const ComplexVector& psi) {
  if (psi.size() != static_cast<Eigen::Index>(d_a) * d_b)
    throw std::invalid_argument("vector length does not match d_a * d_b");
  const double n = psi.norm();
  if (n < 1e-300) throw std::invalid_argument("cannot form a state from the zero vector");
  const ComplexVector u = psi / n;
  return BipartiteState(d_a, d_b, ComplexMatrix(u * u.adjoint()));
}

inline ComplexMatrix reduced_matrix(const BipartiteState& rho, Subsystem keep) {
  return partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), keep);
}

// (1/sqrt(d)) sum_i |ii>
inline ComplexVector max_entangled(int d) {
  if (d < 2) throw std::invalid_argument("maximally entangled state needs d >= 2");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline ComplexMatrix max_entangled_projector(int d) {
  const ComplexVector v = max_entangled(d);
  return v * v.adjoint();
}

// Rank-m maximally entangled vector embedded on the first m basis vectors
// of each factor of C^{d_A} (x) C^{d_B}.
inline ComplexVector max_entangled_embedded(int d_a, int d_b, int m) {
  if (m < 1 || m > std::min(d_a, d_b))
    throw std::invalid_argument("embedded rank must satisfy 1 <= m <= min(d_a, d_b)");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d_a) * d_b);
  for (int i = 0; i < m; ++i) v(i * d_b + i) = 1.0 / std::sqrt(static_cast<double>(m));
  return v;
}

// Overlap with the rank-m embedded maximally entangled state.
inline double singlet_fraction_m(const BipartiteState& rho, int m) {
  const ComplexVector v = max_entangled_embedded(rho.dim_a(), rho.dim_b(), m);
  return (v.adjoint() * rho.matrix() * v)(0).real();
}

inline double singlet_fraction(const BipartiteState& rho) {
  if (!rho.square())
    throw std::invalid_argument("singlet fraction requires equal factor dimensions");
  return singlet_fraction_m(rho, rho.dim_a());
}

// The one-parameter family p*P+ + (1-p)*I/d^2, the unique U(x)U* invariant
// states. p may run over the full PSD range [-1/(d^2-1), 1]; the convex
// sub-family has p in [0, 1].
struct NoisySinglet {
  int d;
  double p;

  NoisySinglet(int d_, double p_) : d(d_), p(p_) {
    if (d < 2) throw std::invalid_argument("noisy singlet needs d >= 2");
    if (p < min_weight(d) - 1e-12 || p > 1.0 + 1e-12)
      throw std::invalid_argument("noisy singlet weight outside the PSD range");
  }

  static double min_weight(int d) {
    return -1.0 / (static_cast<double>(d) * d - 1.0);
  }

  double fraction() const {
    const double dd = static_cast<double>(d) * d;
    return p + (1.0 - p) / dd;
  }

  BipartiteState state() const {
    const double dd = static_cast<double>(d) * d;
    ComplexMatrix m = p * max_entangled_projector(d) +
                      ((1.0 - p) / dd) * identity(d * d);
    return BipartiteState(d, d, hermitize(m));
  }
};

inline BipartiteState noisy_singlet(int d, double p) {
  return NoisySinglet(d, p).state();
}

// f = (F d + 1)/(d + 1): teleportation fidelity from singlet fraction.
inline double fidelity_from_fraction(int d, double fraction) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (fraction < -1e-12 || fraction > 1.0 + 1e-12)
    throw std::invalid_argument("singlet fraction outside [0, 1]");
  return (fraction * d + 1.0) / (d + 1.0);
}

inline double fraction_from_fidelity(int d, double fidelity) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (fidelity < 1.0 / d - 1e-12 || fidelity > 1.0 + 1e-12)
    throw std::invalid_argument("fidelity outside [1/d, 1]");
  return (fidelity * (d + 1.0) - 1.0) / d;
}

inline NoisySinglet noisy_singlet_from_fraction(int d, double fraction) {
  if (fraction < -1e-12 || fraction > 1.0 + 1e-12)
    throw std::invalid_argument("singlet fraction outside [0, 1]");
  const double dd = static_cast<double>(d) * d;
  const double p = (fraction - 1.0 / dd) / (1.0 - 1.0 / dd);
  return NoisySinglet(d, p);
}

inline bool is_ppt(const BipartiteState& rho, double tol = kPositivityTol) {
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b());
  return min_eigenvalue(pt) >= -tol;
}

inline bool noisy_singlet_separable(int d, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("weight outside [0, 1]");
  return p <= 1.0 / (d + 1.0);
}

// --- samplers used by diagnostics and property tests ---

// Hilbert-Schmidt random density matrix: G G^dag / Tr.
inline DensityMatrix random_density_matrix(int dim, Rng& rng) {
  const ComplexMatrix g = ginibre_matrix(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitize(rho));
}

inline BipartiteState random_bipartite_state(int d_a, int d_b, Rng& rng) {
  return BipartiteState(d_a, d_b, random_density_matrix(d_a * d_b, rng));
}

inline ComplexVector random_product_vector(int d_a, int d_b, Rng& rng) {
  return tensor(haar_state(d_a, rng), haar_state(d_b, rng));
}

// Convex mixture of Haar-random product pure states with flat-Dirichlet
// weights; samples the interior of the separable set.
inline BipartiteState random_separable_state(int d_a, int d_b, Rng& rng,
                                             int components = 50) {
  if (components < 1) throw std::invalid_argument("need at least one component");
  std::vector<double> weights(components);
  double total = 0.0;
  for (double& w : weights) {
    w = -std::log((static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53);
    total += w;
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(d_a) * d_b;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (const double w : weights) {
    const ComplexVector v = random_product_vector(d_a, d_b, rng);
    rho += (w / total) * (v * v.adjoint());
  }
  return BipartiteState(d_a, d_b, hermitize(rho));
}

// Random PPT state: mix a random state toward I/d^2 until the partial
// transpose is positive (bisection on the mixing weight).
inline BipartiteState random_ppt_state(int d_a, int d_b, Rng& rng) {
  const Eigen::Index dim = static_cast<Eigen::Index>(d_a) * d_b;
  const ComplexMatrix base = random_density_matrix(static_cast<int>(dim), rng).matrix();
  const ComplexMatrix noise = identity(static_cast<int>(dim)) / static_cast<double>(dim);
  auto mix = [&](double t) {
    return BipartiteState(d_a, d_b, hermitize((1.0 - t) * base + t * noise));
  };
  if (is_ppt(mix(0.0))) return mix(0.0);
  double lo = 0.0, hi = 1.0;  // mix(hi) PPT, mix(lo) not
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (is_ppt(mix(mid)) ? hi : lo) = mid;
  }
  return mix(hi);
}

}  // namespace qtel
