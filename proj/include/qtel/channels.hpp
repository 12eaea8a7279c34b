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
#include <utility>
#include <vector>

#include "qtel/qmath.hpp"
#include "qtel/states.hpp"
#include "qtel/weyl.hpp"

namespace qtel {

inline constexpr double kKrausCompletenessTol = 1e-9;
inline constexpr double kChannelEigCutoff = 1e-12;  // Kraus terms below this vanish
inline constexpr double kReductionTol = 1e-8;

// Completely positive map in Kraus form. Trace preservation is deduced from
// sum K^dag K = I; maps extracted from states with a non-maximally-mixed
// reduction are valid CP maps whose Kraus sum differs from I.
class Channel {
 public:
  explicit Channel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw validation_error("kraus_nonempty", "channel has no Kraus operators");
    d_out_ = static_cast<int>(kraus_.front().rows());
    d_in_ = static_cast<int>(kraus_.front().cols());
    ComplexMatrix sum = ComplexMatrix::Zero(d_in_, d_in_);
    for (const ComplexMatrix& k : kraus_) {
      if (k.rows() != d_out_ || k.cols() != d_in_)
        throw validation_error("kraus_dimensions", "Kraus operators disagree in dimension");
      if (!k.allFinite())
        throw validation_error("finite_entries", "Kraus operator has NaN or Inf entries");
      sum += k.adjoint() * k;
    }
    trace_preserving_ = max_abs_diff(sum, identity(d_in_)) <= kKrausCompletenessTol;
  }

  int input_dim() const { return d_in_; }
  int output_dim() const { return d_out_; }
  bool square() const { return d_in_ == d_out_; }
  bool trace_preserving() const { return trace_preserving_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  // Linear action sum_k K rho K^dag; accepts any operator of matching size.
  ComplexMatrix apply(const ComplexMatrix& rho) const {
    if (rho.rows() != d_in_ || rho.cols() != d_in_)
      throw std::invalid_argument("operator dimension does not match the channel input");
    ComplexMatrix out = ComplexMatrix::Zero(d_out_, d_out_);
    for (const ComplexMatrix& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  DensityMatrix apply(const DensityMatrix& rho) const {
    if (!trace_preserving_)
      throw std::invalid_argument("applying a non-trace-preserving map needs the raw overload");
    return DensityMatrix(hermitize(apply(rho.matrix())));
  }

 private:
  std::vector<ComplexMatrix> kraus_;
  int d_in_ = 0;
  int d_out_ = 0;
  bool trace_preserving_ = false;
};

// p*sigma + (1-p)*I/d realized on the Weyl basis: weight p + (1-p)/d^2 on the
// identity, (1-p)/d^2 on each displacement. CP for p >= -1/(d^2-1).
inline Channel depolarizing(int d, double p) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  const double dd = static_cast<double>(d) * d;
  if (p < -1.0 / (dd - 1.0) - 1e-12 || p > 1.0 + 1e-12)
    throw std::invalid_argument("depolarizing weight outside the CP range");
  const double rest = (1.0 - p) / dd;
  const double head = p + rest;
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(d) * d);
  if (head > kChannelEigCutoff) kraus.push_back(std::sqrt(head) * identity(d));
  if (rest > kChannelEigCutoff) {
    const double c = std::sqrt(rest);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        if (m == 0 && n == 0) continue;
        kraus.push_back(c * weyl(d, m, n));
      }
  }
  return Channel(std::move(kraus));
}

inline ComplexMatrix choi_matrix(const Channel& channel) {
  if (!channel.square()) throw std::invalid_argument("Choi state needs d_in == d_out");
  const int d = channel.input_dim();
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  const double root_d = std::sqrt(static_cast<double>(d));
  for (const ComplexMatrix& k : channel.kraus()) {
    ComplexVector w(dim);  // (I (x) K) |Psi+>
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) w(j * d + i) = k(i, j) / root_d;
    rho += w * w.adjoint();
  }
  return hermitize(rho);
}

// Half of a maximally entangled pair sent through the channel.
inline BipartiteState choi(const Channel& channel) {
  const int d = channel.input_dim();
  return BipartiteState(d, d, choi_matrix(channel));
}

// Inverts the Choi map: Kraus operators from the spectral decomposition of
// the state. The result reproduces the state exactly and is trace-preserving
// precisely when the first reduction is I/d.
inline Channel channel_from_state(const BipartiteState& rho,
                                  bool require_trace_preserving = false) {
  if (!rho.square())
    throw std::invalid_argument("channel extraction needs equal factor dimensions");
  const int d = rho.dim_a();
  if (require_trace_preserving) {
    const ComplexMatrix red = reduced_matrix(rho, Subsystem::A);
    if (max_abs_diff(red, identity(d) / static_cast<double>(d)) > kReductionTol)
      throw std::invalid_argument(
          "trace-preserving extraction needs the first reduction equal to I/d");
  }
  const auto eig = hermitian_eigensystem(rho.matrix());
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < eig.eigenvalues().size(); ++k) {
    const double p = eig.eigenvalues()(k);
    if (p < kChannelEigCutoff) continue;
    const ComplexVector psi = eig.eigenvectors().col(k);
    ComplexMatrix op(d, d);  // sqrt(p*d) * reshape(psi)^T
    const double c = std::sqrt(p * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) op(i, j) = c * psi(j * d + i);
    kraus.push_back(std::move(op));
  }
  Channel channel(std::move(kraus));
  if (require_trace_preserving && !channel.trace_preserving())
    throw std::invalid_argument("extracted channel failed the completeness check");
  return channel;
}

inline double entanglement_fidelity(const Channel& channel) {
  return singlet_fraction(choi(channel));
}

// Haar-average input-output fidelity, closed form (F d + 1)/(d + 1).
inline double channel_fidelity_exact(const Channel& channel) {
  if (!channel.square()) throw std::invalid_argument("channel fidelity needs d_in == d_out");
  if (!channel.trace_preserving())
    throw std::invalid_argument("channel fidelity is defined for trace-preserving maps");
  return fidelity_from_fraction(channel.input_dim(), entanglement_fidelity(channel));
}

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

// Monte-Carlo estimate of the Haar-average fidelity over pure inputs.
inline McEstimate channel_fidelity_mc(const Channel& channel, long samples, Rng& rng) {
  if (!channel.square()) throw std::invalid_argument("channel fidelity needs d_in == d_out");
  if (!channel.trace_preserving())
    throw std::invalid_argument("channel fidelity is defined for trace-preserving maps");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const int d = channel.input_dim();
  double sum = 0.0, sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    const ComplexVector phi = haar_state(d, rng);
    const ComplexMatrix out = channel.apply(ComplexMatrix(phi * phi.adjoint()));
    const double f = (phi.adjoint() * out * phi)(0).real();
    sum += f;
    sum_sq += f * f;
  }
  McEstimate est;
  est.mean = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * sum / samples) / static_cast<double>(samples - 1));
    est.std_err = std::sqrt(var / static_cast<double>(samples));
  }
  return est;
}

// Random trace-preserving channel: Haar unitary on system (x) environment
// (environment of the same dimension, fixed initial state |0>).
inline Channel random_channel(int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  const ComplexMatrix u = haar_unitary(d * d, rng);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(d);
  for (int e = 0; e < d; ++e) {
    ComplexMatrix k(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) k(i, j) = u(i * d + e, j * d);
    kraus.push_back(std::move(k));
  }
  return Channel(std::move(kraus));
}

}  // namespace qtel
