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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qtel/json_io.hpp"
#include "test_helpers.hpp"

using namespace qtel;
using qtel::testing::matrix_near;

TEST_CASE("state serialization uses the declared field names and layout", "[json]") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 0.4;
  m(1, 1) = 0.3;
  m(2, 2) = 0.2;
  m(3, 3) = 0.1;
  m(0, 1) = Complex(0.05, 0.025);
  m(1, 0) = Complex(0.05, -0.025);
  const Json j = state_to_json(BipartiteState(2, 2, m));

  CHECK(j.at("d_a") == 2);
  CHECK(j.at("d_b") == 2);
  REQUIRE(j.at("matrix").size() == 16);
  // row-major: entry 1 is (row 0, col 1)
  CHECK(j.at("matrix")[1][0].get<double>() == Approx(0.05));
  CHECK(j.at("matrix")[1][1].get<double>() == Approx(0.025));
  CHECK(j.at("matrix")[5][0].get<double>() == Approx(0.3));
}

TEST_CASE("state round trip", "[json]") {
  Rng rng(601);
  const BipartiteState rho = random_bipartite_state(2, 3, rng);
  const BipartiteState back = state_from_json(state_to_json(rho));
  CHECK(back.dim_a() == 2);
  CHECK(back.dim_b() == 3);
  CHECK(matrix_near(back.matrix(), rho.matrix(), 1e-15));
}

TEST_CASE("loading re-validates every invariant", "[json]") {
  Rng rng(607);
  Json good = state_to_json(random_bipartite_state(2, 2, rng));

  Json bad_trace = good;
  bad_trace["matrix"][0][0] = bad_trace["matrix"][0][0].get<double>() + 0.5;
  CHECK_THROWS_MATCHES(state_from_json(bad_trace), validation_error,
                       qtel::testing::invariant_is("unit_trace"));

  Json bad_herm = good;
  bad_herm["matrix"][1][1] = bad_herm["matrix"][1][1].get<double>() + 0.5;
  CHECK_THROWS_MATCHES(state_from_json(bad_herm), validation_error,
                       qtel::testing::invariant_is("hermitian"));

  Json bad_psd = state_to_json(noisy_singlet(2, 1.0));
  // tilt two diagonal entries to keep trace/hermiticity but break positivity
  bad_psd["matrix"][5][0] = bad_psd["matrix"][5][0].get<double>() - 0.1;
  bad_psd["matrix"][10][0] = bad_psd["matrix"][10][0].get<double>() + 0.1;
  CHECK_THROWS_MATCHES(state_from_json(bad_psd), validation_error,
                       qtel::testing::invariant_is("positive_semidefinite"));

  Json missing = good;
  missing.erase("d_b");
  CHECK_THROWS_MATCHES(state_from_json(missing), validation_error,
                       qtel::testing::invariant_is("state_fields"));

  Json short_matrix = good;
  short_matrix["matrix"].erase(0);
  CHECK_THROWS_MATCHES(state_from_json(short_matrix), validation_error,
                       qtel::testing::invariant_is("matrix_shape"));
}

TEST_CASE("channel round trip", "[json]") {
  Rng rng(613);
  const Channel channel = random_channel(3, rng);
  const Json j = channel_to_json(channel);
  CHECK(j.at("d_in") == 3);
  CHECK(j.at("d_out") == 3);
  CHECK(j.at("trace_preserving") == true);

  const Channel back = channel_from_json(j);
  REQUIRE(back.kraus().size() == channel.kraus().size());
  for (std::size_t k = 0; k < back.kraus().size(); ++k)
    CHECK(matrix_near(back.kraus()[k], channel.kraus()[k], 1e-15));
}

TEST_CASE("channel completeness is checked against the declared flag", "[json]") {
  Json j;
  j["d_in"] = 2;
  j["d_out"] = 2;
  j["trace_preserving"] = true;
  j["kraus"] = Json::array({matrix_to_json(0.5 * identity(2))});
  CHECK_THROWS_MATCHES(channel_from_json(j), validation_error,
                       qtel::testing::invariant_is("kraus_completeness"));
  j["trace_preserving"] = false;
  CHECK_NOTHROW(channel_from_json(j));
}

TEST_CASE("file round trip and malformed input", "[json]") {
  const auto dir = std::filesystem::temp_directory_path() / "qtel_json_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "state.json").string();

  const BipartiteState rho = noisy_singlet(2, 0.5);
  save_state(path, rho);
  CHECK(matrix_near(load_state(path).matrix(), rho.matrix(), 1e-15));

  const std::string broken = (dir / "broken.json").string();
  std::ofstream(broken) << "{ not json";
  CHECK_THROWS_MATCHES(load_state(broken), validation_error,
                       qtel::testing::invariant_is("json_syntax"));

  CHECK_THROWS_AS(load_state((dir / "missing.json").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}
