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

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtel/channels.hpp"
#include "qtel/states.hpp"

namespace qtel {

using Json = nlohmann::json;

// Matrices travel as flat row-major lists of [re, im] pairs.
inline Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
  return entries;
}

inline ComplexMatrix matrix_from_json(const Json& entries, int rows, int cols) {
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows) * cols)
    throw validation_error("matrix_shape", "matrix entry count does not match dimensions");
  ComplexMatrix m(rows, cols);
  std::size_t idx = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Json& e = entries[idx++];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw validation_error("matrix_entry", "matrix entries must be [re, im] pairs");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

inline Json state_to_json(const BipartiteState& rho) {
  return Json{{"d_a", rho.dim_a()},
              {"d_b", rho.dim_b()},
              {"matrix", matrix_to_json(rho.matrix())}};
}

inline BipartiteState state_from_json(const Json& j) {
  if (!j.contains("d_a") || !j.contains("d_b") || !j.contains("matrix"))
    throw validation_error("state_fields", "state needs d_a, d_b and matrix fields");
  const int d_a = j.at("d_a").get<int>();
  const int d_b = j.at("d_b").get<int>();
  if (d_a < 1 || d_b < 1)
    throw validation_error("factor_dimensions", "factor dimensions must be positive");
  const int dim = d_a * d_b;
  // BipartiteState re-validates every density matrix invariant on load.
  return BipartiteState(d_a, d_b, matrix_from_json(j.at("matrix"), dim, dim));
}

inline Json channel_to_json(const Channel& channel) {
  Json kraus = Json::array();
  for (const ComplexMatrix& k : channel.kraus()) kraus.push_back(matrix_to_json(k));
  return Json{{"d_in", channel.input_dim()},
              {"d_out", channel.output_dim()},
              {"kraus", kraus},
              {"trace_preserving", channel.trace_preserving()}};
}

inline Channel channel_from_json(const Json& j) {
  if (!j.contains("d_in") || !j.contains("d_out") || !j.contains("kraus") ||
      !j.contains("trace_preserving"))
    throw validation_error("channel_fields",
                           "channel needs d_in, d_out, kraus and trace_preserving fields");
  const int d_in = j.at("d_in").get<int>();
  const int d_out = j.at("d_out").get<int>();
  if (d_in < 1 || d_out < 1)
    throw validation_error("channel_dimensions", "channel dimensions must be positive");
  std::vector<ComplexMatrix> kraus;
  for (const Json& k : j.at("kraus")) kraus.push_back(matrix_from_json(k, d_out, d_in));
  Channel channel(std::move(kraus));
  if (j.at("trace_preserving").get<bool>() && !channel.trace_preserving())
    throw validation_error("kraus_completeness",
                           "channel declared trace-preserving but sum K^dag K != I");
  return channel;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw validation_error("json_syntax", std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

inline BipartiteState load_state(const std::string& path) {
  return state_from_json(load_json_file(path));
}

inline Channel load_channel(const std::string& path) {
  return channel_from_json(load_json_file(path));
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

inline void save_state(const std::string& path, const BipartiteState& rho) {
  save_json_file(path, state_to_json(rho));
}

inline void save_channel(const std::string& path, const Channel& channel) {
  save_json_file(path, channel_to_json(channel));
}

}  // namespace qtel
