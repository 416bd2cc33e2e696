// Copyright 2026 The cvgate Authors
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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cvgate/cluster.hpp"
#include "cvgate/gaussian_state.hpp"
#include "cvgate/protocol.hpp"

// Text formats. JSON is written with round-trip precision, CSV with 17
// significant digits; both are byte-identical across runs for equal input.
namespace cvgate {

/// {"n_modes": n, "mean": [...], "cov": [[...], ...]} (row-major).
std::string state_to_json(const GaussianState& state);
/// Throws std::invalid_argument on malformed input, InvalidState on an
/// asymmetric covariance.
GaussianState state_from_json(std::string_view text);

/// {"nodes": n, "edges": [[j, k, w], ...]}
std::string graph_to_json(const GraphSpec& graph);

/// One line of a theta sweep.
struct SweepRow {
  double theta_deg = 0.0;
  double t = 0.0;
  double squeezing_db = 0.0;
  Eigen::Vector4d means = Eigen::Vector4d::Zero();      // x_mu, p_mu, x_nu, p_nu
  Eigen::Vector4d variances = Eigen::Vector4d::Zero();
  double lambda_minus = 0.0;
  double log_negativity = 0.0;
  bool entangled = false;
  double lambda_minus_ideal = 0.0;  // infinite squeezing
  double log_negativity_ideal = 0.0;
  std::optional<double> lambda_se;  // Monte-Carlo only
  std::optional<Separability> separability;
};

SweepRow summarize(const ProtocolConfig& config, const ProtocolResult& result);

/// Column-oriented table; CSV writes one line per row, JSON one array per
/// column ({"column": [...], ...} in column order).
struct Table {
  using Cell = std::variant<double, bool, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

/// theta_deg, t, var_*, mean_*, lambda_minus, E_N, db_*, entangled,
/// lambda_minus_ideal, E_N_ideal, squeezing_db (+ lambda_se, separability
/// for Monte-Carlo rows).
Table sweep_table(const std::vector<SweepRow>& rows);

/// Full result record: output moments, entanglement, excess noise and
/// Monte-Carlo statistics when present.
std::string result_to_json(const ProtocolResult& result);

}  // namespace cvgate
