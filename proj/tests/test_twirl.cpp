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

#include <catch2/catch.hpp>

#include "qtel/twirl.hpp"
#include "test_helpers.hpp"

using namespace qtel;
using qtel::testing::matrix_near;

TEST_CASE("exact state twirl lands on the invariant family", "[twirl]") {
  const NoisySinglet top = twirl_state_exact(pure_state(2, 2, max_entangled(2)));
  CHECK(top.p == Approx(1.0).margin(1e-12));

  // |00><00| has fraction |<Psi+|00>|^2 = 1/2, the separability edge
  const NoisySinglet half =
      twirl_state_exact(pure_state(2, 2, tensor(basis_ket(2, 0), basis_ket(2, 0))));
  CHECK(half.fraction() == Approx(0.5).margin(1e-12));
  CHECK(half.p == Approx(1.0 / 3.0).margin(1e-12));

  // fraction 1/d^2 forces the flat member: |0><0| (x) I/2 scores (1/d)Tr(rho sigma^T) = 1/4
  ComplexMatrix product = ComplexMatrix::Zero(4, 4);
  product(0, 0) = product(1, 1) = 0.5;
  const NoisySinglet flat = twirl_state_exact(BipartiteState(2, 2, product));
  CHECK(flat.p == Approx(0.0).margin(1e-12));
  CHECK(matrix_near(flat.state().matrix(), identity(4) / 4.0, 1e-12));

  // fraction 0 forces the negative-weight edge of the family
  const BipartiteState cross = pure_state(3, 3, tensor(basis_ket(3, 0), basis_ket(3, 1)));
  const NoisySinglet edge = twirl_state_exact(cross);
  CHECK(edge.p == Approx(-1.0 / 8.0).margin(1e-12));
  CHECK(min_eigenvalue(edge.state().matrix()) >= -1e-12);

  // the Monte-Carlo integral lands on the same family member
  Rng rng(293);
  CHECK(trace_distance(twirl_state_mc(cross, 4000, rng).matrix(),
                       edge.state().matrix()) < 0.05);
}

TEST_CASE("twirl preserves the singlet fraction exactly", "[twirl]") {
  Rng rng(301);
  for (const int d : {2, 3})
    for (int rep = 0; rep < 6; ++rep) {
      const BipartiteState rho = random_bipartite_state(d, d, rng);
      const NoisySinglet twirled = twirl_state_exact(rho);
      CHECK(singlet_fraction(twirled.state()) ==
            Approx(singlet_fraction(rho)).margin(1e-12));
      // idempotence
      CHECK(twirl_state_exact(twirled.state()).p == Approx(twirled.p).margin(1e-12));
    }
}

TEST_CASE("each conjugation leaves the fraction invariant", "[twirl]") {
  Rng rng(307);
  for (int rep = 0; rep < 8; ++rep) {
    const BipartiteState rho = random_bipartite_state(3, 3, rng);
    const BipartiteState rotated = conjugate_uu_star(rho, haar_unitary(3, rng));
    CHECK(singlet_fraction(rotated) == Approx(singlet_fraction(rho)).margin(1e-12));
  }
}

TEST_CASE("monte carlo twirl converges to the closed form", "[twirl]") {
  Rng rng(311);
  const BipartiteState rho = random_bipartite_state(2, 2, rng);
  const BipartiteState averaged = twirl_state_mc(rho, 10000, rng);
  CHECK(trace_distance(averaged.matrix(), twirl_state_exact(rho).state().matrix()) < 0.02);
}

TEST_CASE("the invariant family is a fixed point sample by sample", "[twirl]") {
  Rng rng(313);
  const BipartiteState ns = noisy_singlet(2, 0.6);
  const BipartiteState averaged = twirl_state_mc(ns, 50, rng);
  CHECK(trace_distance(averaged.matrix(), ns.matrix()) < 1e-10);
}

TEST_CASE("channel twirl produces the matching depolarizing channel", "[twirl]") {
  // depolarizing channels are fixed points
  const Channel dep = depolarizing(3, 0.4);
  CHECK(matrix_near(choi(twirl_channel(dep)).matrix(), choi(dep).matrix(), 1e-12));

  // unitary conjugation: F = |Tr V|^2 / d^2
  Rng rng(317);
  for (const int d : {2, 3}) {
    const ComplexMatrix v = haar_unitary(d, rng);
    const Channel rotation = Channel({v});
    const double expected_f = std::norm(v.trace()) / (static_cast<double>(d) * d);
    CHECK(entanglement_fidelity(rotation) == Approx(expected_f).margin(1e-12));
    const Channel twirled = twirl_channel(rotation);
    CHECK(entanglement_fidelity(twirled) == Approx(expected_f).margin(1e-12));
    CHECK(matrix_near(choi(twirled).matrix(),
                      noisy_singlet_from_fraction(d, expected_f).state().matrix(), 1e-12));
  }
}

TEST_CASE("channel fidelity is invariant under twirling", "[twirl]") {
  Rng rng(331);
  for (const int d : {2, 3})
    for (int rep = 0; rep < 6; ++rep) {
      const Channel channel = random_channel(d, rng);
      CHECK(channel_fidelity_exact(twirl_channel(channel)) ==
            Approx(channel_fidelity_exact(channel)).margin(1e-12));
    }
}

TEST_CASE("twirl commutes with the state-channel correspondence", "[twirl]") {
  Rng rng(337);
  for (const int d : {2, 3}) {
    const Channel channel = random_channel(d, rng);
    CHECK(max_abs_diff(choi(twirl_channel(channel)).matrix(),
                       twirl_state_exact(choi(channel)).state().matrix()) < 1e-9);
  }
}

TEST_CASE("monte carlo channel twirl tracks the state twirl", "[twirl]") {
  Rng rng_channel(41), rng_state(43);
  const Channel channel = random_channel(2, rng_channel);
  const Channel averaged = twirl_channel_mc(channel, 3000, rng_channel);
  CHECK(averaged.trace_preserving());

  const BipartiteState state_side = twirl_state_mc(choi(channel), 3000, rng_state);
  CHECK(trace_distance(choi(averaged).matrix(), state_side.matrix()) < 0.1);
  CHECK(entanglement_fidelity(averaged) ==
        Approx(entanglement_fidelity(channel)).margin(0.05));
}
