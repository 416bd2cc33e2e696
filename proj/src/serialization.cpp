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

#include "cvgate/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <type_traits>

#include <json.hpp>

#include "cvgate/conventions.hpp"

namespace cvgate {

namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

// NaN has no JSON spelling; emit null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string state_to_json(const GaussianState& state) {
  json j;
  j["n_modes"] = state.n_modes();
  j["mean"] = vector_json(state.mean());
  j["cov"] = matrix_json(state.cov());
  return j.dump(2);
}

GaussianState state_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    const auto n = j.at("n_modes").get<std::size_t>();
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto cov = j.at("cov").get<std::vector<std::vector<double>>>();
    if (n == 0 || mean.size() != 2 * n || cov.size() != 2 * n) {
      throw std::invalid_argument("state JSON: dimensions do not match n_modes");
    }
    Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    Eigen::MatrixXd c(2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      if (cov[i].size() != 2 * n) throw std::invalid_argument("state JSON: covariance row has wrong length");
      for (std::size_t k = 0; k < 2 * n; ++k) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cov[i][k];
    }
    return GaussianState(std::move(m), std::move(c));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state JSON: ") + e.what());
  }
}

std::string graph_to_json(const GraphSpec& graph) {
  json j;
  j["nodes"] = graph.size();
  j["edges"] = json::array();
  for (const auto& [a, b, w] : graph.edges()) j["edges"].push_back({a, b, w});
  return j.dump(2);
}

SweepRow summarize(const ProtocolConfig& config, const ProtocolResult& result) {
  SweepRow r;
  r.theta_deg = radians_to_degrees(config.theta);
  r.t = std::tan(config.theta);
  r.squeezing_db = squeezing_db_from_r(config.squeezing(0));
  r.means = result.means();
  r.variances = result.variances();
  r.lambda_minus = result.entanglement.lambda_minus;
  r.log_negativity = result.entanglement.log_negativity;
  r.entangled = result.entanglement.entangled;
  r.lambda_minus_ideal = lambda_minus_closed_form(r.t, 0.0);
  r.log_negativity_ideal = log_negativity(r.lambda_minus_ideal);
  if (result.monte_carlo) {
    r.lambda_se = result.monte_carlo->lambda_se;
    r.separability = result.monte_carlo->separability;
    r.entangled = *r.separability == Separability::kEntangled;
  }
  return r;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table row has the wrong number of cells");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) out << fmt(v);
            else if constexpr (std::is_same_v<T, bool>) out << (v ? "true" : "false");
            else out << v;
          },
          row[c]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  json j = json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    json col = json::array();
    for (const auto& row : table.rows) {
      std::visit(
          [&col](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) col.push_back(number(v));
            else col.push_back(v);
          },
          row[c]);
    }
    j[table.columns[c]] = std::move(col);
  }
  out << j.dump(2) << '\n';
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t;
  t.columns = {"theta_deg", "t", "var_x_mu", "var_p_mu", "var_x_nu", "var_p_nu", "mean_x_mu", "mean_p_mu",
               "mean_x_nu", "mean_p_nu", "lambda_minus", "E_N", "db_x_mu", "db_p_mu", "db_x_nu", "db_p_nu",
               "entangled", "lambda_minus_ideal", "E_N_ideal", "squeezing_db"};
  const bool mc = !rows.empty() && rows.front().lambda_se.has_value();
  if (mc) {
    t.columns.push_back("lambda_se");
    t.columns.push_back("separability");
  }
  for (const SweepRow& r : rows) {
    std::vector<Table::Cell> cells{r.theta_deg, r.t};
    for (Eigen::Index i = 0; i < 4; ++i) cells.emplace_back(r.variances(i));
    for (Eigen::Index i = 0; i < 4; ++i) cells.emplace_back(r.means(i));
    cells.emplace_back(r.lambda_minus);
    cells.emplace_back(r.log_negativity);
    for (Eigen::Index i = 0; i < 4; ++i) cells.emplace_back(variance_to_db(r.variances(i)));
    cells.emplace_back(r.entangled);
    cells.emplace_back(r.lambda_minus_ideal);
    cells.emplace_back(r.log_negativity_ideal);
    cells.emplace_back(r.squeezing_db);
    if (mc) {
      cells.emplace_back(r.lambda_se.value_or(std::nan("")));
      cells.emplace_back(std::string(to_string(r.separability.value_or(Separability::kInconclusive))));
    }
    t.add_row(std::move(cells));
  }
  return t;
}

std::string result_to_json(const ProtocolResult& result) {
  json j;
  j["output"] = {{"mean", vector_json(result.output.mean())}, {"cov", matrix_json(result.output.cov())}};
  j["lambda_minus"] = result.entanglement.lambda_minus;
  j["E_N"] = result.entanglement.log_negativity;
  j["entangled"] = result.entanglement.entangled;
  j["powers_db"] = vector_json(result.powers_db());
  j["variances_db"] = vector_json(result.variances_db());
  j["excess_noise_cov"] = matrix_json(result.excess_noise_cov);
  if (result.monte_carlo) {
    const MonteCarloStats& st = *result.monte_carlo;
    j["monte_carlo"] = {{"trajectories", st.trajectories},
                        {"mean_se", vector_json(st.mean_se)},
                        {"cov_se", matrix_json(st.cov_se)},
                        {"lambda_se", number(st.lambda_se)},
                        {"separability", to_string(st.separability)}};
  }
  return j.dump(2);
}

}  // namespace cvgate
