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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qtel/channels.hpp"
#include "qtel/states.hpp"
#include "qtel/weyl.hpp"

namespace qtel {

// Bell-type basis vector (I (x) W(m,n)) |Psi+>; the d^2 of them are
// orthonormal and label the measurement outcomes of the standard protocol.
inline ComplexVector bell_vector(int d, int m, int n) {
  const ComplexMatrix w = weyl(d, m, n);
  ComplexVector v(static_cast<Eigen::Index>(d) * d);
  const double root_d = std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) v(j * d + i) = w(i, j) / root_d;
  return v;
}

namespace detail {

// Kraus operator of the standard protocol for resource eigenvector chi
// (weight q) and measurement outcome (m,n):
//   sqrt(q/d) * W^T * X^T * W'*,   X(a,b) = chi[a*d+b].
// Bob's correction W^T is fixed by requiring the protocol to be the identity
// channel on a maximally entangled resource; the calibration tests pin the
// convention.
inline ComplexMatrix teleport_kraus(const ComplexMatrix& w, const ComplexMatrix& chi_mat,
                                    double weight, int d) {
  return std::sqrt(weight / d) * w.transpose() * chi_mat.transpose() * w.conjugate();
}

inline ComplexMatrix reshape_pair_vector(const ComplexVector& chi, int d) {
  ComplexMatrix x(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) x(a, b) = chi(a * d + b);
  return x;
}

}  // namespace detail

// The channel realized by teleporting through the resource state: Alice
// measures (input, A) in the Bell basis, Bob applies the outcome-dependent
// Weyl correction. Always trace-preserving.
inline Channel standard_teleport_channel(const BipartiteState& rho) {
  if (!rho.square())
    throw std::invalid_argument("teleportation needs equal factor dimensions");
  const int d = rho.dim_a();
  const auto eig = hermitian_eigensystem(rho.matrix());
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < eig.eigenvalues().size(); ++k) {
    const double q = eig.eigenvalues()(k);
    if (q < kChannelEigCutoff) continue;
    const ComplexMatrix x = detail::reshape_pair_vector(eig.eigenvectors().col(k), d);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        kraus.push_back(detail::teleport_kraus(weyl(d, m, n), x, q, d));
  }
  return Channel(std::move(kraus));
}

struct TeleportOutcome {
  int m = 0;
  int n = 0;
  double probability = 0.0;
  ComplexMatrix bob_state;  // conditional state after correction; I/d when
                            // the outcome has (numerically) zero probability
};

// Full outcome distribution for teleporting the pure input psi through rho.
// Probabilities sum to 1; the probability-weighted average of bob_state is
// the action of standard_teleport_channel(rho) on |psi><psi|.
inline std::vector<TeleportOutcome> teleport_outcomes(const BipartiteState& rho,
                                                      const ComplexVector& psi) {
  if (!rho.square())
    throw std::invalid_argument("teleportation needs equal factor dimensions");
  const int d = rho.dim_a();
  if (psi.size() != d) throw std::invalid_argument("input dimension does not match");
  const double n2 = psi.squaredNorm();
  if (n2 < 1e-300) throw std::invalid_argument("input state is the zero vector");
  const ComplexVector input = psi / std::sqrt(n2);

  const auto eig = hermitian_eigensystem(rho.matrix());
  std::vector<ComplexMatrix> resource;
  std::vector<double> weight;
  for (int k = 0; k < eig.eigenvalues().size(); ++k) {
    const double q = eig.eigenvalues()(k);
    if (q < kChannelEigCutoff) continue;
    resource.push_back(detail::reshape_pair_vector(eig.eigenvectors().col(k), d));
    weight.push_back(q);
  }

  std::vector<TeleportOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(d) * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const ComplexMatrix w = weyl(d, m, n);
      ComplexMatrix acc = ComplexMatrix::Zero(d, d);
      for (std::size_t r = 0; r < resource.size(); ++r) {
        const ComplexVector v =
            detail::teleport_kraus(w, resource[r], weight[r], d) * input;
        acc += v * v.adjoint();
      }
      TeleportOutcome out;
      out.m = m;
      out.n = n;
      out.probability = acc.trace().real();
      out.bob_state = (out.probability > 1e-14)
                          ? ComplexMatrix(hermitize(acc / out.probability))
                          : ComplexMatrix(identity(d) / static_cast<double>(d));
      outcomes.push_back(std::move(out));
    }
  return outcomes;
}

inline TeleportOutcome teleport_sample(const BipartiteState& rho, const ComplexVector& psi,
                                       Rng& rng) {
  const std::vector<TeleportOutcome> outcomes = teleport_outcomes(rho, psi);
  const double u = uniform_unit(rng);
  double cumulative = 0.0;
  for (const TeleportOutcome& out : outcomes) {
    cumulative += out.probability;
    if (u < cumulative) return out;
  }
  return outcomes.back();
}

// Best fidelity achievable through a state whose maximal attainable singlet
// fraction is known: f = (F d + 1)/(d + 1).
inline double optimal_fidelity_from_fraction(int d, double max_fraction) {
  return fidelity_from_fraction(d, max_fraction);
}

// Fidelity of teleportation over a purely classical channel, 2/(d+1).
inline double classical_fidelity(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  return 2.0 / (d + 1.0);
}

}  // namespace qtel
