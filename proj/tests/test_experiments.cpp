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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtel/experiments.hpp"

using namespace qtel;

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qtel_experiments" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig base_config(const std::string& experiment, const fs::path& out) {
  ExperimentConfig config;
  config.experiment = experiment;
  config.seed = 20260808;
  config.seed_set = true;
  config.out_dir = out.string();
  return config;
}

}  // namespace

TEST_CASE("experiments are byte-reproducible", "[experiments]") {
  const fs::path dir = fresh_dir("repro");

  ExperimentConfig config = base_config("fidelity-theorem-sweep", dir);
  config.d = 2;
  config.samples = 500;
  REQUIRE(run(config) == 0);
  const std::string first_csv = read_file(dir / "fidelity-theorem-sweep.csv");
  const std::string first_manifest = read_file(dir / "fidelity-theorem-sweep-manifest.json");

  REQUIRE(run(config) == 0);
  CHECK(read_file(dir / "fidelity-theorem-sweep.csv") == first_csv);
  CHECK(read_file(dir / "fidelity-theorem-sweep-manifest.json") == first_manifest);

  // the exact column follows (F d + 1)/(d + 1) row by row
  std::istringstream table(first_csv);
  std::string line;
  std::getline(table, line);
  CHECK(line == "p,F,f_exact,f_mc,std_err");
  while (std::getline(table, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == 5);
    CHECK(row[2] == Approx((row[1] * config.d + 1.0) / (config.d + 1.0)).margin(1e-10));
  }
}

TEST_CASE("configuration is validated", "[experiments]") {
  ExperimentConfig config = base_config("no-such-experiment", fresh_dir("bad"));
  CHECK_THROWS_AS(run(config), std::invalid_argument);

  config.experiment = "classical-baseline";
  config.seed_set = false;
  CHECK_THROWS_AS(run(config), std::invalid_argument);
}

TEST_CASE("quasi-distillation sweep emits a monotone trace", "[experiments]") {
  const fs::path dir = fresh_dir("sigma");
  ExperimentConfig config = base_config("sigma-quasi-distill", dir);
  config.parameters["F"] = 0.5;
  config.n_max = 40;
  REQUIRE(run(config) == 0);

  std::ifstream in(dir / "sigma-quasi-distill.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,fraction,probability");
  double prev_fraction = 0.0, prev_probability = 2.0;
  int rows = 0;
  for (std::string line; std::getline(in, line); ++rows) {
    std::istringstream cells(line);
    std::string n, fraction, probability;
    std::getline(cells, n, ',');
    std::getline(cells, fraction, ',');
    std::getline(cells, probability, ',');
    const double f = std::stod(fraction);
    const double p = std::stod(probability);
    CHECK(f >= prev_fraction - 1e-12);
    CHECK(p <= prev_probability + 1e-12);
    prev_fraction = f;
    prev_probability = p;
  }
  CHECK(rows == 40);
  CHECK(prev_fraction > 0.99);
}

TEST_CASE("witness demo reports the constructed filter", "[experiments]") {
  const fs::path dir = fresh_dir("witness");
  ExperimentConfig config = base_config("witness-demo", dir);
  config.trials = 100;
  REQUIRE(run(config) == 0);

  const Json j = load_json_file((dir / "witness-demo.json").string());
  REQUIRE(j.at("found") == true);
  CHECK(j.at("fraction").get<double>() == Approx(1.0).margin(1e-9));
  CHECK(j.at("probability").get<double>() > 0.0);
}

TEST_CASE("threshold search report stays below the ceiling", "[experiments]") {
  const fs::path dir = fresh_dir("threshold");
  ExperimentConfig config = base_config("rho-threshold", dir);
  config.parameters["F"] = 0.5;
  config.trials = 500;
  REQUIRE(run(config) == 0);

  const Json j = load_json_file((dir / "rho-threshold.json").string());
  CHECK(j.at("best_fraction").get<double>() < 1.0 - 1e-6);
  CHECK(j.at("trials").size() == 500);
}

TEST_CASE("experiments can run on a state loaded from disk", "[experiments]") {
  const fs::path dir = fresh_dir("loaded");
  const std::string state_path = (dir / "state.json").string();
  save_state(state_path, quasi_distillable_state(0.6));

  ExperimentConfig config = base_config("sigma-quasi-distill", dir);
  config.state_file = state_path;
  config.n_max = 5;
  REQUIRE(run(config) == 0);
  CHECK(fs::exists(dir / "sigma-quasi-distill.csv"));

  // a malformed state file surfaces as a named invariant violation
  std::ofstream(state_path) << "{ \"d_a\": 3, \"d_b\": 3, \"matrix\": [] }";
  CHECK_THROWS_AS(run(config), validation_error);
}

TEST_CASE("calibration sweep reports machine-precision distances", "[experiments]") {
  const fs::path dir = fresh_dir("calibration");
  ExperimentConfig config = base_config("teleport-calibration", dir);
  config.d = 2;
  REQUIRE(run(config) == 0);

  std::ifstream in(dir / "teleport-calibration.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "resource,p,choi_distance");
  int rows = 0;
  while (std::getline(in, line)) {
    const double distance = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(distance < 1e-10);
    ++rows;
  }
  CHECK(rows == 6);  // the calibration row plus five mixing weights
}

TEST_CASE("convergence checkpoints stop at the sample budget", "[experiments]") {
  const fs::path dir = fresh_dir("checkpoints");
  ExperimentConfig config = base_config("twirl-convergence", dir);
  config.d = 2;
  config.samples = 50;
  REQUIRE(run(config) == 0);

  std::ifstream in(dir / "twirl-convergence.csv");
  std::string line;
  std::getline(in, line);
  std::vector<long> seen;
  while (std::getline(in, line)) seen.push_back(std::stol(line.substr(0, line.find(','))));
  CHECK(seen == std::vector<long>{10, 30, 50});
}

TEST_CASE("roundtrip experiment extracts a channel file from a state", "[experiments]") {
  const fs::path dir = fresh_dir("extract");
  const std::string state_path = (dir / "state.json").string();
  save_state(state_path, noisy_singlet(2, 0.5));

  ExperimentConfig config = base_config("isomorphism-roundtrip", dir);
  config.state_file = state_path;
  REQUIRE(run(config) == 0);

  const Channel extracted =
      load_channel((dir / "isomorphism-roundtrip-channel.json").string());
  CHECK(extracted.trace_preserving());
  CHECK(max_abs_diff(choi(extracted).matrix(), noisy_singlet(2, 0.5).matrix()) < 1e-9);
}

TEST_CASE("manifest echoes the configuration", "[experiments]") {
  const fs::path dir = fresh_dir("manifest");
  ExperimentConfig config = base_config("classical-baseline", dir);
  config.d = 5;
  REQUIRE(run(config) == 0);
  const Json manifest =
      load_json_file((dir / "classical-baseline-manifest.json").string());
  CHECK(manifest.at("experiment") == "classical-baseline");
  CHECK(manifest.at("d") == 5);
  CHECK(manifest.at("seed") == 20260808);
}
