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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtel/distill.hpp"
#include "qtel/json_io.hpp"
#include "qtel/teleport.hpp"
#include "qtel/twirl.hpp"

namespace qtel {

// Everything an experiment needs, echoed verbatim into the manifest. A seed
// must always be supplied; there is no implicit entropy anywhere.
struct ExperimentConfig {
  std::string experiment;
  int d = 3;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long samples = 10000;
  long trials = 0;  // 0 selects the per-experiment default
  int n_max = 100;
  std::map<std::string, double> parameters;
  std::string out_dir = ".";
  std::string state_file;  // optional JSON input state
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline double param_or(const ExperimentConfig& config, const std::string& name,
                       double fallback) {
  const auto it = config.parameters.find(name);
  return it == config.parameters.end() ? fallback : it->second;
}

inline long trials_or(const ExperimentConfig& config, long fallback) {
  return config.trials > 0 ? config.trials : fallback;
}

inline Json filter_to_json(const LocalFilter& filter) {
  return Json{{"alice", matrix_to_json(filter.alice)},
              {"bob", matrix_to_json(filter.bob)}};
}

inline std::optional<BipartiteState> maybe_load_state(const ExperimentConfig& config) {
  if (config.state_file.empty()) return std::nullopt;
  return load_state(config.state_file);
}

}  // namespace detail

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "isomorphism-roundtrip", "fidelity-theorem-sweep", "twirl-convergence",
      "teleport-calibration",  "classical-baseline",     "ppt-bound",
      "sigma-quasi-distill",   "rho-threshold",          "witness-demo"};
  return names;
}

namespace detail {

inline void run_isomorphism_roundtrip(const ExperimentConfig& config, Rng& rng,
                                      CsvWriter& csv, const std::string& channel_path) {
  csv.row({"trial", "roundtrip_error", "completeness_error"});
  const auto report = [&](long t, const BipartiteState& rho, bool demand_tp) {
    const Channel extracted = channel_from_state(rho, demand_tp);
    const double roundtrip = max_abs_diff(choi_matrix(extracted), rho.matrix());
    const int d = rho.dim_a();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const ComplexMatrix& k : extracted.kraus()) sum += k.adjoint() * k;
    const double completeness =
        extracted.trace_preserving() ? max_abs_diff(sum, identity(d)) : 0.0;
    csv.row({std::to_string(t), fmt(roundtrip), fmt(completeness)});
    return extracted;
  };
  if (const auto loaded = maybe_load_state(config)) {
    // extract the channel of the supplied state and keep it on disk
    save_channel(channel_path, report(0, *loaded, false));
    return;
  }
  const long trials = trials_or(config, 20);
  for (long t = 0; t < trials; ++t)
    report(t, choi(random_channel(config.d, rng)), true);
}

inline void run_fidelity_theorem_sweep(const ExperimentConfig& config, Rng& rng,
                                       CsvWriter& csv) {
  csv.row({"p", "F", "f_exact", "f_mc", "std_err"});
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const Channel channel = depolarizing(config.d, p);
    const double fraction = entanglement_fidelity(channel);
    const double exact = channel_fidelity_exact(channel);
    const McEstimate mc = channel_fidelity_mc(channel, config.samples, rng);
    csv.row({fmt(p), fmt(fraction), fmt(exact), fmt(mc.mean), fmt(mc.std_err)});
  }
}

inline void run_twirl_convergence(const ExperimentConfig& config, Rng& rng,
                                  CsvWriter& csv) {
  csv.row({"samples", "trace_distance"});
  const BipartiteState rho = random_bipartite_state(config.d, config.d, rng);
  const ComplexMatrix target = twirl_state_exact(rho).state().matrix();
  ComplexMatrix acc = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  long done = 0;
  for (const long checkpoint : {10L, 30L, 100L, 300L, 1000L, 3000L, config.samples}) {
    if (checkpoint <= done || checkpoint > config.samples) continue;
    for (; done < checkpoint; ++done) {
      const ComplexMatrix u = haar_unitary(config.d, rng);
      const ComplexMatrix op = tensor(u, u.conjugate());
      acc += op * rho.matrix() * op.adjoint();
    }
    csv.row({std::to_string(done),
             fmt(trace_distance(acc / static_cast<double>(done), target))});
  }
}

inline void run_teleport_calibration(const ExperimentConfig& config, CsvWriter& csv) {
  csv.row({"resource", "p", "choi_distance"});
  const int d = config.d;
  const BipartiteState ideal = pure_state(d, d, max_entangled(d));
  const double calib = trace_distance(choi(standard_teleport_channel(ideal)).matrix(),
                                      max_entangled_projector(d));
  csv.row({"max_entangled", fmt(1.0), fmt(calib)});
  for (const double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Channel teleport = standard_teleport_channel(noisy_singlet(d, p));
    const double dist =
        trace_distance(choi(teleport).matrix(), choi(depolarizing(d, p)).matrix());
    csv.row({"noisy_singlet", fmt(p), fmt(dist)});
  }
}

inline void run_classical_baseline(const ExperimentConfig& config, CsvWriter& csv) {
  csv.row({"d", "f_classical", "f_from_separable_bound"});
  for (int d = 2; d <= std::max(2, config.d); ++d)
    csv.row({std::to_string(d), fmt(classical_fidelity(d)),
             fmt(optimal_fidelity_from_fraction(d, 1.0 / d))});
}

inline void run_ppt_bound(const ExperimentConfig& config, Rng& rng, CsvWriter& csv) {
  csv.row({"trial", "singlet_fraction", "fraction_bound", "implied_fidelity",
           "classical_fidelity"});
  const long trials = trials_or(config, 200);
  for (long t = 0; t < trials; ++t) {
    const BipartiteState rho = random_ppt_state(config.d, config.d, rng);
    const double fraction = singlet_fraction(rho);
    csv.row({std::to_string(t), fmt(fraction), fmt(1.0 / config.d),
             fmt(optimal_fidelity_from_fraction(config.d, fraction)),
             fmt(classical_fidelity(config.d))});
  }
}

inline void run_sigma_quasi_distill(const ExperimentConfig& config, CsvWriter& csv) {
  csv.row({"n", "fraction", "probability"});
  const double fraction = param_or(config, "F", 0.5);
  const BipartiteState rho =
      maybe_load_state(config).value_or(quasi_distillable_state(fraction));
  const auto reports =
      quasi_distill_sequence(rho, [](int n) { return quasi_distillation_filter(n); },
                             config.n_max);
  for (const QuasiDistillReport& r : reports) {
    if (r.succeeded)
      csv.row({std::to_string(r.n), fmt(r.fraction), fmt(r.probability)});
    else
      csv.row({std::to_string(r.n), "nan", "0"});
  }
}

inline Json run_rho_threshold(const ExperimentConfig& config, Rng& rng) {
  const double fraction = param_or(config, "F", 0.5);
  const BipartiteState rho = maybe_load_state(config).value_or(threshold_state(fraction));
  const ThresholdReport report =
      threshold_experiment(rho, trials_or(config, 10000), rng);
  Json trials = Json::array();
  for (const FilterTrial& t : report.trace)
    trials.push_back(Json{{"trial", t.trial},
                          {"filter", filter_to_json(t.filter)},
                          {"fraction", t.succeeded ? Json(t.fraction) : Json()},
                          {"probability", t.succeeded ? Json(t.probability) : Json()}});
  return Json{{"best_fraction", report.best_fraction},
              {"best_trial", report.best_trial},
              {"best_filter", filter_to_json(report.best_filter)},
              {"trials", trials}};
}

inline Json run_witness_demo(const ExperimentConfig& config, Rng& rng) {
  const double weight = param_or(config, "p", 0.5);
  const BipartiteState rho =
      maybe_load_state(config).value_or(distillable_rectangular_state(weight));
  const int m = static_cast<int>(
      param_or(config, "m", std::min(rho.dim_a(), rho.dim_b())));
  const auto witness = witness_search(rho, m, trials_or(config, 500), rng);
  if (!witness) return Json{{"found", false}};
  const auto result = apply_filter(rho, witness->filter);
  Json j{{"found", true},
         {"projector_a", matrix_to_json(witness->projector_a)},
         {"projector_b", matrix_to_json(witness->projector_b)},
         {"filter", filter_to_json(witness->filter)}};
  if (result) {
    j["fraction"] = singlet_fraction_m(result->post_state, m);
    j["probability"] = result->success_probability;
  }
  return j;
}

inline Json manifest_json(const ExperimentConfig& config, const std::string& output) {
  Json params = Json::object();
  for (const auto& [k, v] : config.parameters) params[k] = v;
  return Json{{"experiment", config.experiment},
              {"d", config.d},
              {"seed", config.seed},
              {"samples", config.samples},
              {"trials", config.trials},
              {"n_max", config.n_max},
              {"parameters", params},
              {"state_file", config.state_file},
              {"output", output}};
}

}  // namespace detail

// Runs one named experiment, writing its data file and a manifest echoing
// the full configuration into the output directory. Deterministic: the same
// configuration produces byte-identical files.
inline int run(const ExperimentConfig& config) {
  if (!config.seed_set)
    throw std::invalid_argument("a seed is required; there is no implicit entropy");
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), config.experiment) == names.end())
    throw std::invalid_argument("unknown experiment: " + config.experiment);

  std::filesystem::create_directories(config.out_dir);
  const auto path = [&](const std::string& suffix) {
    return (std::filesystem::path(config.out_dir) / (config.experiment + suffix)).string();
  };
  Rng rng(config.seed);

  std::string output;
  if (config.experiment == "rho-threshold") {
    output = path(".json");
    save_json_file(output, detail::run_rho_threshold(config, rng));
  } else if (config.experiment == "witness-demo") {
    output = path(".json");
    save_json_file(output, detail::run_witness_demo(config, rng));
  } else {
    output = path(".csv");
    detail::CsvWriter csv(output);
    if (config.experiment == "isomorphism-roundtrip")
      detail::run_isomorphism_roundtrip(config, rng, csv, path("-channel.json"));
    else if (config.experiment == "fidelity-theorem-sweep")
      detail::run_fidelity_theorem_sweep(config, rng, csv);
    else if (config.experiment == "twirl-convergence")
      detail::run_twirl_convergence(config, rng, csv);
    else if (config.experiment == "teleport-calibration")
      detail::run_teleport_calibration(config, csv);
    else if (config.experiment == "classical-baseline")
      detail::run_classical_baseline(config, csv);
    else if (config.experiment == "ppt-bound")
      detail::run_ppt_bound(config, rng, csv);
    else if (config.experiment == "sigma-quasi-distill")
      detail::run_sigma_quasi_distill(config, csv);
  }
  save_json_file(path("-manifest.json"), detail::manifest_json(config, output));
  return 0;
}

}  // namespace qtel
