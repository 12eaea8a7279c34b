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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtel/experiments.hpp"

namespace {

struct CliOptions {
  qtel::ExperimentConfig config;
  double p = -1.0;
  double fraction = -1.0;
  double witness_rank = -1.0;
};

void add_shared_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--seed", opts.config.seed, "random seed (required, no implicit entropy)")
      ->required();
  cmd->add_option("--d", opts.config.d, "local dimension");
  cmd->add_option("--samples", opts.config.samples, "Monte-Carlo sample count");
  cmd->add_option("--trials", opts.config.trials, "trial budget (0 = experiment default)");
  cmd->add_option("--out", opts.config.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reproducible teleportation-channel and distillation experiments"};
  app.require_subcommand(1);

  CliOptions opts;
  opts.config.d = 3;

  for (const std::string& name : qtel::experiment_names()) {
    CLI::App* cmd = app.add_subcommand(name, "run the " + name + " experiment");
    add_shared_options(cmd, opts);
    if (name == "sigma-quasi-distill" || name == "rho-threshold") {
      cmd->add_option("--F", opts.fraction, "singlet fraction of the test state");
      cmd->add_option("--state", opts.config.state_file, "input state JSON file");
    }
    if (name == "isomorphism-roundtrip")
      cmd->add_option("--state", opts.config.state_file,
                      "state JSON file; its channel is extracted and saved");
    if (name == "sigma-quasi-distill")
      cmd->add_option("--n-max", opts.config.n_max, "last filter index");
    if (name == "witness-demo") {
      cmd->add_option("--p", opts.p, "entangled weight of the demo state");
      cmd->add_option("--m", opts.witness_rank, "target Schmidt rank");
      cmd->add_option("--state", opts.config.state_file, "input state JSON file");
    }
    cmd->callback([&opts, name] { opts.config.experiment = name; });
  }

  CLI11_PARSE(app, argc, argv);

  opts.config.seed_set = true;
  if (opts.p >= 0.0) opts.config.parameters["p"] = opts.p;
  if (opts.fraction >= 0.0) opts.config.parameters["F"] = opts.fraction;
  if (opts.witness_rank >= 0.0) opts.config.parameters["m"] = opts.witness_rank;

  try {
    return qtel::run(opts.config);
  } catch (const qtel::validation_error& e) {
    std::cerr << "error: invariant '" << e.invariant() << "' violated: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
