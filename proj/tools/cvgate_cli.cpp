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

// cvgate: scenario runner for the T_Z cluster gate.
//
//   cvgate sweep --theta-deg 0,26.6,45 --squeezing-db 4.5 --out sweep.csv
//   cvgate coherent --input x_alpha --power-db 13.8
//   cvgate cluster-info --squeezing-db 4.5
//   cvgate selftest
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical failure, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvgate/acceptance.hpp"
#include "cvgate/cluster.hpp"
#include "cvgate/conventions.hpp"
#include "cvgate/errors.hpp"
#include "cvgate/protocol.hpp"
#include "cvgate/serialization.hpp"

namespace {

using nlohmann::json;

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalError = 2, kIoError = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> default_angles() {
  const auto a = cvgate::reference_angles_deg();
  return {a.begin(), a.end()};
}

// Everything a command can be configured with. Field names double as the
// keys of the JSON config document.
struct Scenario {
  std::vector<double> theta_deg = default_angles();
  std::vector<double> squeezing_db{cvgate::kReferenceSqueezingDb};
  std::optional<std::vector<double>> squeezing_db_modes;  // per resource mode
  std::string mode = "det";
  std::size_t trajectories = 100000;
  std::uint64_t seed = 1;
  std::vector<double> loss;  // empty, one value, or five per-mode values
  std::string out;
  std::string format = "csv";
  std::vector<std::string> input{"x_alpha"};
  std::optional<double> power_db;
  std::string trajectory_log;
  std::string graph = "line:3";
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", first + used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("invalid number in ") + what + ": '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> parse_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::vector<T> number_or_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

void load_config_file(const std::string& path, Scenario& s) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "theta_deg") s.theta_deg = number_or_list<double>(v);
      else if (key == "squeezing_db") s.squeezing_db = number_or_list<double>(v);
      else if (key == "squeezing_db_modes") s.squeezing_db_modes = v.get<std::vector<double>>();
      else if (key == "mode") s.mode = v.get<std::string>();
      else if (key == "trajectories") s.trajectories = v.get<std::size_t>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "loss") s.loss = number_or_list<double>(v);
      else if (key == "out") s.out = v.get<std::string>();
      else if (key == "format") s.format = v.get<std::string>();
      else if (key == "input") s.input = number_or_list<std::string>(v);
      else if (key == "power_db") s.power_db = v.get<double>();
      else if (key == "trajectory_log") s.trajectory_log = v.get<std::string>();
      else if (key == "graph") s.graph = v.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file has a value of the wrong type: ") + e.what());
  }
}

// Raw flag values; only flags that were given override the config file.
struct Flags {
  std::string config;
  std::string theta_deg, squeezing_db, squeezing_db_modes, mode, loss, out, format, input, trajectory_log, graph;
  std::size_t trajectories = 0;
  std::uint64_t seed = 0;
  double power_db = 0.0;
};

struct FlagOptions {
  CLI::Option *theta_deg = nullptr, *squeezing_db = nullptr, *squeezing_db_modes = nullptr, *mode = nullptr,
              *trajectories = nullptr, *seed = nullptr, *loss = nullptr, *out = nullptr, *format = nullptr,
              *input = nullptr, *power_db = nullptr, *trajectory_log = nullptr, *graph = nullptr;
};

FlagOptions add_common_flags(CLI::App& cmd, Flags& f) {
  FlagOptions o;
  cmd.add_option("--config", f.config, "JSON config file; flags given on the command line win");
  o.theta_deg = cmd.add_option("--theta-deg", f.theta_deg, "Comma-separated measurement angles in degrees");
  o.squeezing_db = cmd.add_option("--squeezing-db", f.squeezing_db,
                                  "Resource squeezing magnitude in dB (comma-separated list sweeps it)");
  o.squeezing_db_modes = cmd.add_option("--squeezing-db-modes", f.squeezing_db_modes,
                                        "Per-mode squeezing in dB for C1,C2,C3 (overrides --squeezing-db)");
  o.mode = cmd.add_option("--mode", f.mode, "Evaluation mode: det or mc");
  o.trajectories = cmd.add_option("--trajectories", f.trajectories, "Monte-Carlo trajectory count");
  o.seed = cmd.add_option("--seed", f.seed, "Monte-Carlo seed");
  o.loss = cmd.add_option("--loss", f.loss, "Transmission eta: one value for all modes or five (alpha,beta,C1,C2,C3)");
  o.out = cmd.add_option("--out", f.out, "Output path (default stdout)");
  o.format = cmd.add_option("--format", f.format, "Output format: csv or json");
  o.trajectory_log = cmd.add_option("--trajectory-log", f.trajectory_log, "Monte-Carlo measurement record CSV");
  return o;
}

Scenario resolve(const Flags& f, const FlagOptions& o) {
  Scenario s;
  if (!f.config.empty()) load_config_file(f.config, s);
  auto given = [](CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
  if (given(o.theta_deg)) s.theta_deg = parse_list(f.theta_deg, "--theta-deg");
  if (given(o.squeezing_db)) s.squeezing_db = parse_list(f.squeezing_db, "--squeezing-db");
  if (given(o.squeezing_db_modes)) s.squeezing_db_modes = parse_list(f.squeezing_db_modes, "--squeezing-db-modes");
  if (given(o.mode)) s.mode = f.mode;
  if (given(o.trajectories)) s.trajectories = f.trajectories;
  if (given(o.seed)) s.seed = f.seed;
  if (given(o.loss)) s.loss = parse_list(f.loss, "--loss");
  if (given(o.out)) s.out = f.out;
  if (given(o.format)) s.format = f.format;
  if (given(o.trajectory_log)) s.trajectory_log = f.trajectory_log;
  if (given(o.input)) s.input = parse_words(f.input);
  if (given(o.power_db)) s.power_db = f.power_db;
  if (given(o.graph)) s.graph = f.graph;

  if (s.mode != "det" && s.mode != "mc") throw ConfigError("--mode must be det or mc");
  if (s.format != "csv" && s.format != "json") throw ConfigError("--format must be csv or json");
  if (s.mode == "mc" && s.trajectories == 0) throw ConfigError("--trajectories must be at least 1");
  for (double d : s.theta_deg) {
    if (!(std::abs(d) < 90.0)) throw ConfigError("measurement angles must satisfy |theta| < 90 deg");
  }
  if (s.squeezing_db_modes && s.squeezing_db_modes->size() != 3) {
    throw ConfigError("--squeezing-db-modes needs three values");
  }
  if (s.loss.size() != 0 && s.loss.size() != 1 && s.loss.size() != 5) {
    throw ConfigError("--loss takes one value or five");
  }
  for (double eta : s.loss) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("--loss transmission must lie in (0, 1]");
  }
  if (!s.trajectory_log.empty() && s.mode != "mc") throw ConfigError("--trajectory-log needs --mode mc");
  return s;
}

// Squeezing settings to evaluate: one per common value, or the single
// per-mode vector. Second element is the dB value reported in the table.
std::vector<std::pair<Eigen::Vector3d, double>> squeezing_points(const Scenario& s) {
  std::vector<std::pair<Eigen::Vector3d, double>> out;
  if (s.squeezing_db_modes) {
    const auto& m = *s.squeezing_db_modes;
    Eigen::Vector3d r(cvgate::squeezing_r_from_db(m[0]), cvgate::squeezing_r_from_db(m[1]),
                      cvgate::squeezing_r_from_db(m[2]));
    out.emplace_back(r, std::abs(m[0]));
    return out;
  }
  for (double db : s.squeezing_db) out.emplace_back(Eigen::Vector3d::Constant(cvgate::squeezing_r_from_db(db)), std::abs(db));
  return out;
}

cvgate::ProtocolConfig protocol_config(const Scenario& s, double theta_deg, const Eigen::Vector3d& r) {
  cvgate::ProtocolConfig c;
  c.theta = cvgate::degrees_to_radians(theta_deg);
  c.squeezing = r;
  c.mode = s.mode == "mc" ? cvgate::EvalMode::kMonteCarlo : cvgate::EvalMode::kDeterministic;
  c.trajectories = s.trajectories;
  c.seed = s.seed;
  c.keep_trajectories = !s.trajectory_log.empty();
  if (s.loss.size() == 1) c.transmission.fill(s.loss.front());
  if (s.loss.size() == 5) std::copy(s.loss.begin(), s.loss.end(), c.transmission.begin());
  return c;
}

void emit(const Scenario& s, const std::string& text) {
  if (s.out.empty() || s.out == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw IoError("cannot open output file '" + s.out + "'");
  f << text;
  f.close();
  if (!f) throw IoError("failed to write output file '" + s.out + "'");
}

std::string render(const Scenario& s, const cvgate::Table& table) {
  std::ostringstream os;
  if (s.format == "json") cvgate::write_json(os, table);
  else cvgate::write_csv(os, table);
  return os.str();
}

class TrajectoryLog {
 public:
  explicit TrajectoryLog(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open trajectory log '" + path + "'");
    cvgate::write_trajectory_csv_header(file_);
  }
  void add(const cvgate::ProtocolResult& r) {
    if (!file_.is_open()) return;
    for (const auto& records : r.trajectories) cvgate::write_trajectory_csv(file_, next_++, records);
    if (!file_) throw IoError("failed to write trajectory log");
  }

 private:
  std::ofstream file_;
  std::size_t next_ = 0;
};

int cmd_sweep(const Scenario& s) {
  std::vector<cvgate::SweepRow> rows;
  TrajectoryLog log(s.trajectory_log);
  for (const auto& [r, db] : squeezing_points(s)) {
    for (double deg : s.theta_deg) {
      const cvgate::ProtocolConfig c = protocol_config(s, deg, r);
      const cvgate::ProtocolResult res = cvgate::run_protocol(c);
      log.add(res);
      cvgate::SweepRow row = cvgate::summarize(c, res);
      row.theta_deg = deg;  // report the angle exactly as given
      row.squeezing_db = db;
      rows.push_back(row);
    }
  }
  cvgate::Table table = cvgate::sweep_table(rows);
  if (rows.empty() && s.mode == "mc") {
    table.columns.push_back("lambda_se");
    table.columns.push_back("separability");
  }
  emit(s, render(s, table));
  return kOk;
}

int cmd_coherent(const Scenario& s) {
  if (s.input.size() != 1) {
    throw cvgate::UnsupportedConfig("coherent takes exactly one input quadrature (got " +
                                    std::to_string(s.input.size()) + ")");
  }
  const std::string& which = s.input.front();
  const bool on_alpha = which == "x_alpha" || which == "p_alpha";
  const bool on_beta = which == "x_beta" || which == "p_beta";
  if (!on_alpha && !on_beta) throw ConfigError("--input must be one of x_alpha, p_alpha, x_beta, p_beta");
  const double power = s.power_db.value_or(on_alpha ? cvgate::kCoherentPowerAlphaDb : cvgate::kCoherentPowerBetaDb);
  if (power < 0.0) throw ConfigError("--power-db must be non-negative");
  const double a = cvgate::coherent_amplitude_from_power_db(power);
  const cvgate::InputMean mean = which.front() == 'x' ? cvgate::InputMean{a, 0.0} : cvgate::InputMean{0.0, a};

  cvgate::Table table;
  table.columns = {"theta_deg", "t", "input", "input_power_db", "amplitude", "squeezing_db",
                   "mean_x_mu", "mean_p_mu", "mean_x_nu", "mean_p_nu",
                   "var_x_mu", "var_p_mu", "var_x_nu", "var_p_nu",
                   "power_db_x_mu", "power_db_p_mu", "power_db_x_nu", "power_db_p_nu"};
  TrajectoryLog log(s.trajectory_log);
  for (const auto& [r, db] : squeezing_points(s)) {
    for (double deg : s.theta_deg) {
      cvgate::ProtocolConfig c = protocol_config(s, deg, r);
      (on_alpha ? c.alpha : c.beta) = mean;
      const cvgate::ProtocolResult res = cvgate::run_protocol(c);
      log.add(res);
      std::vector<cvgate::Table::Cell> row{deg, std::tan(c.theta), which, power, a, db};
      for (Eigen::Index i = 0; i < 4; ++i) row.emplace_back(res.means()(i));
      for (Eigen::Index i = 0; i < 4; ++i) row.emplace_back(res.variances()(i));
      for (Eigen::Index i = 0; i < 4; ++i) row.emplace_back(res.powers_db()(i));
      table.add_row(std::move(row));
    }
  }
  emit(s, render(s, table));
  return kOk;
}

int cmd_cluster_info(const Scenario& s, bool text) {
  const cvgate::GraphSpec graph = cvgate::GraphSpec::parse(s.graph);
  const auto points = squeezing_points(s);
  if (points.size() != 1) throw ConfigError("cluster-info takes a single squeezing value");
  const Eigen::Vector3d r = points.front().first;
  // The three-node line uses the resource of the protocol; longer lines fall
  // back to the canonical C_Z construction.
  const bool passive_line = graph.size() == 3 && graph.adjacency() == cvgate::GraphSpec::line(3).adjacency();
  const cvgate::GaussianState cluster =
      passive_line ? cvgate::make_linear_cluster3(r) : cvgate::make_cluster_canonical(graph, r(0));
  const cvgate::NullifierReport report = cvgate::nullifier_report(cluster, graph);
  const Eigen::VectorXd nu = cvgate::symplectic_eigenvalues(cluster.cov());
  const cvgate::PhysicalityReport phys = cvgate::check_physicality(cluster);
  const bool pure = (nu.array() - cvgate::kVacuumVariance).abs().maxCoeff() < 1e-9;

  if (text) {
    std::ostringstream os;
    char buf[160];
    os << "graph " << s.graph << (passive_line ? " (passive three-squeezer preparation)" : " (canonical C_Z preparation)")
       << ", squeezing " << points.front().second << " dB\n";
    for (Eigen::Index j = 0; j < report.covariance.rows(); ++j) {
      std::snprintf(buf, sizeof buf, "  Var delta_%ld = %.5f (%+.2f dB vs SNL)\n", static_cast<long>(j + 1),
                    report.covariance(j, j), cvgate::variance_to_db(report.covariance(j, j)));
      os << buf;
    }
    for (Eigen::Index j = 0; j < report.covariance.rows(); ++j) {
      for (Eigen::Index k = j + 1; k < report.covariance.cols(); ++k) {
        std::snprintf(buf, sizeof buf, "  Cov(delta_%ld, delta_%ld) = %.5f\n", static_cast<long>(j + 1),
                      static_cast<long>(k + 1), report.covariance(j, k));
        os << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "  pure: %s, physical: %s, physicality margin %.3g\n", pure ? "yes" : "no",
                  phys.physical ? "yes" : "no", phys.min_symplectic_eigenvalue - cvgate::kVacuumVariance);
    os << buf;
    emit(s, os.str());
    return phys.physical ? kOk : kNumericalError;
  }

  cvgate::Table table;
  table.columns = {"quantity", "j", "k", "value"};
  for (Eigen::Index j = 0; j < report.covariance.rows(); ++j) {
    for (Eigen::Index k = j; k < report.covariance.cols(); ++k) {
      table.add_row({std::string("nullifier_cov"), static_cast<double>(j + 1), static_cast<double>(k + 1),
                     report.covariance(j, k)});
    }
  }
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    table.add_row({std::string("symplectic_eigenvalue"), static_cast<double>(j + 1), 0.0, nu(j)});
  }
  table.add_row({std::string("physicality_margin"), 0.0, 0.0,
                 phys.min_symplectic_eigenvalue - cvgate::kVacuumVariance});
  table.add_row({std::string("pure"), 0.0, 0.0, pure});
  emit(s, render(s, table));
  return phys.physical ? kOk : kNumericalError;
}

int cmd_selftest(const Scenario& s) {
  cvgate::AcceptanceOptions opt;
  opt.mc_trajectories = s.trajectories;
  std::ostringstream os;
  bool ok = true;
  for (const cvgate::CriterionResult& r : cvgate::run_acceptance(opt)) {
    os << cvgate::format_line(r) << '\n';
    ok = ok && r.passed;
  }
  os << (ok ? "selftest: all criteria passed\n" : "selftest: FAILED\n");
  emit(s, os.str());
  return ok ? kOk : kNumericalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for the tuneable T_Z entangling gate on a three-mode CV cluster"};
  app.require_subcommand(1);

  Flags f;
  CLI::App* sweep = app.add_subcommand("sweep", "Output moments and entanglement over a theta (x squeezing) grid");
  FlagOptions sweep_opts = add_common_flags(*sweep, f);

  CLI::App* coherent = app.add_subcommand("coherent", "Output powers for one coherent input quadrature");
  FlagOptions coherent_opts = add_common_flags(*coherent, f);
  coherent_opts.input = coherent->add_option("--input", f.input, "x_alpha, p_alpha, x_beta or p_beta");
  coherent_opts.power_db = coherent->add_option("--power-db", f.power_db,
                                                "Input quadrature power above SNL (default 13.8 alpha, 16.9 beta)");

  CLI::App* info = app.add_subcommand("cluster-info", "Nullifier statistics and physicality of the resource");
  FlagOptions info_opts;
  info->add_option("--config", f.config, "JSON config file; flags win");
  info_opts.squeezing_db = info->add_option("--squeezing-db", f.squeezing_db, "Squeezing magnitude in dB");
  info_opts.squeezing_db_modes = info->add_option("--squeezing-db-modes", f.squeezing_db_modes, "Per-mode squeezing");
  info_opts.graph = info->add_option("--graph", f.graph, "Graph, e.g. line:3");
  info_opts.out = info->add_option("--out", f.out, "Output path");
  info_opts.format = info->add_option("--format", f.format, "text (default), csv or json");

  CLI::App* selftest = app.add_subcommand("selftest", "Run the acceptance checks");
  FlagOptions self_opts;
  self_opts.trajectories = selftest->add_option("--trajectories", f.trajectories, "Monte-Carlo trajectories");
  self_opts.out = selftest->add_option("--out", f.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(resolve(f, sweep_opts));
    if (coherent->parsed()) return cmd_coherent(resolve(f, coherent_opts));
    if (info->parsed()) {
      const bool text = info_opts.format->count() == 0 || f.format == "text";
      Flags g = f;
      if (text) g.format = "csv";
      return cmd_cluster_info(resolve(g, info_opts), text);
    }
    if (selftest->parsed()) {
      Scenario s = resolve(f, self_opts);
      if (self_opts.trajectories->count() == 0) s.trajectories = cvgate::AcceptanceOptions{}.mc_trajectories;
      return cmd_selftest(s);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cvgate::UnsupportedConfig& e) {
    std::cerr << "unsupported configuration: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kConfigError;
}
