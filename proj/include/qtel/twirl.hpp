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

#include <stdexcept>

#include "qtel/channels.hpp"
#include "qtel/states.hpp"

namespace qtel {

// U (x) U* conjugation; the star is entrywise conjugation in the same basis
// that defines the maximally entangled state.
inline BipartiteState conjugate_uu_star(const BipartiteState& rho, const ComplexMatrix& u) {
  if (!rho.square()) throw std::invalid_argument("twirl conjugation needs equal dimensions");
  const ComplexMatrix op = tensor(u, u.conjugate());
  return BipartiteState(rho.dim_a(), rho.dim_b(), hermitize(op * rho.matrix() * op.adjoint()));
}

// Haar average of U (x) U* conjugations, in closed form: the average lands on
// the invariant family with the singlet fraction unchanged. Fractions below
// 1/d^2 map to negative weights, still a valid state.
inline NoisySinglet twirl_state_exact(const BipartiteState& rho) {
  if (!rho.square()) throw std::invalid_argument("twirling needs equal factor dimensions");
  return noisy_singlet_from_fraction(rho.dim_a(), singlet_fraction(rho));
}

inline BipartiteState twirl_state_mc(const BipartiteState& rho, long samples, Rng& rng) {
  if (!rho.square()) throw std::invalid_argument("twirling needs equal factor dimensions");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const int d = rho.dim_a();
  ComplexMatrix acc = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (long s = 0; s < samples; ++s) {
    const ComplexMatrix u = haar_unitary(d, rng);
    const ComplexMatrix op = tensor(u, u.conjugate());
    acc += op * rho.matrix() * op.adjoint();
  }
  return BipartiteState(d, d, hermitize(acc / static_cast<double>(samples)));
}

// Channel twirl (random unitary before the channel, its inverse after),
// computed through the state picture: the twirled channel is the
// depolarizing channel with the same entanglement fidelity.
inline Channel twirl_channel(const Channel& channel) {
  if (!channel.square() || !channel.trace_preserving())
    throw std::invalid_argument("channel twirl needs a square trace-preserving channel");
  const int d = channel.input_dim();
  const double fraction = entanglement_fidelity(channel);
  const double dd = static_cast<double>(d) * d;
  const double p = (fraction - 1.0 / dd) / (1.0 - 1.0 / dd);
  return depolarizing(d, p);
}

// Monte-Carlo channel twirl. Per sample, the Choi state of U^dag o Lambda o U
// is a U (x) U* conjugate of the channel's Choi state, so the average is the
// state twirl of the Choi state converted back to a channel.
inline Channel twirl_channel_mc(const Channel& channel, long samples, Rng& rng) {
  if (!channel.square() || !channel.trace_preserving())
    throw std::invalid_argument("channel twirl needs a square trace-preserving channel");
  const BipartiteState averaged = twirl_state_mc(choi(channel), samples, rng);
  return channel_from_state(averaged, /*require_trace_preserving=*/true);
}

}  // namespace qtel
