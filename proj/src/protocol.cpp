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

#include "cvgate/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cvgate/cluster.hpp"
#include "cvgate/errors.hpp"
#include "cvgate/rng.hpp"
#include "cvgate/symplectic.hpp"

namespace cvgate {

namespace {

double interaction(double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2.0)) {
    throw SingularRescale("T_Z protocol needs |theta| < 90 deg");
  }
  return std::tan(theta);
}

void validate(const ProtocolConfig& config) {
  interaction(config.theta);
  if (!config.squeezing.allFinite() || config.squeezing.minCoeff() < 0.0) {
    throw std::invalid_argument("protocol: squeezing must be finite and non-negative");
  }
  if (config.mode == EvalMode::kMonteCarlo && config.trajectories == 0) {
    throw std::invalid_argument("protocol: Monte-Carlo needs at least one trajectory");
  }
  for (double eta : config.transmission) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("protocol: transmission must lie in (0, 1]");
  }
}

bool lossless(const ProtocolConfig& config) {
  return std::all_of(config.transmission.begin(), config.transmission.end(), [](double e) { return e == 1.0; });
}

void observe(const ProtocolConfig& config, std::string_view stage, const GaussianState& state) {
  if (config.observer) config.observer(stage, state);
}

void require_physical(std::string_view stage, const GaussianState& state) {
  const PhysicalityReport report = check_physicality(state);
  if (!report.physical) {
    throw InternalError("unphysical state at stage '" + std::string(stage) +
                        "' (min symplectic eigenvalue " + std::to_string(report.min_symplectic_eigenvalue) + ")");
  }
}

GaussianState coupled_register(const ProtocolConfig& config) {
  using namespace protocol_mode;
  GaussianState reg = prepare_register(config);
  reg = apply_symplectic(reg, gates::beamsplitter(kAlpha, kC1, 0.5, config.coupling));
  reg = apply_symplectic(reg, gates::beamsplitter(kBeta, kC3, 0.5, config.coupling));
  return reg;
}

// Entanglement figures without the physicality precondition; Monte-Carlo
// covariance estimates carry sampling noise.
EntanglementVerdict assess(const Eigen::MatrixXd& cov) {
  EntanglementVerdict v;
  v.lambda_minus = lambda_minus(cov);
  v.log_negativity = log_negativity(v.lambda_minus);
  v.entangled = v.lambda_minus < kVacuumVariance - kPhysicalityTolerance;
  return v;
}

Eigen::Matrix4d resource_noise(const GaussianState& reg, double t) {
  using namespace protocol_mode;
  const std::array<std::size_t, 3> cluster{kC1, kC2, kC3};
  const NullifierReport nr = nullifier_report(select_modes(reg, cluster), GraphSpec::line(3));
  return excess_noise_covariance(t, nr.covariance);
}

ProtocolResult run_deterministic(const ProtocolConfig& config) {
  const double t = interaction(config.theta);
  GaussianState reg = prepare_register(config);
  observe(config, "prepared", reg);
  require_physical("prepared", reg);
  const Eigen::Matrix4d noise = resource_noise(reg, t);

  reg = coupled_register(config);
  observe(config, "coupled", reg);
  require_physical("coupled", reg);

  const auto detectors = protocol_detectors(config.theta);
  const FeedforwardRule rule = config.feedforward_override.value_or(protocol_feedforward_rule(config.theta));
  GaussianState out = ensemble_feedforward(reg, detectors, rule);
  observe(config, "output", out);
  require_physical("output", out);

  EntanglementVerdict v = verdict(out);
  return {std::move(out), v, noise, std::nullopt, {}};
}

ProtocolResult run_monte_carlo(const ProtocolConfig& config) {
  const double t = interaction(config.theta);
  const GaussianState prepared = prepare_register(config);
  observe(config, "prepared", prepared);
  const Eigen::Matrix4d noise = resource_noise(prepared, t);
  const GaussianState coupled = coupled_register(config);
  observe(config, "coupled", coupled);

  const auto detectors = protocol_detectors(config.theta);
  const FeedforwardRule rule = config.feedforward_override.value_or(protocol_feedforward_rule(config.theta));
  const auto n = static_cast<Eigen::Index>(config.trajectories);

  Eigen::MatrixXd means(n, 4);
  Eigen::Matrix4d conditional_cov = Eigen::Matrix4d::Zero();
  std::vector<std::vector<MeasurementRecord>> logs;
  if (config.keep_trajectories) logs.reserve(config.trajectories);

  for (Eigen::Index i = 0; i < n; ++i) {
    RngStream rng(config.seed, static_cast<std::uint64_t>(i));
    GaussianState state = coupled;
    // Register positions of the five original modes; measured ones are erased.
    std::vector<std::size_t> labels{0, 1, 2, 3, 4};
    std::vector<MeasurementRecord> records;
    for (const Detector& det : detectors) {  // fixed order s1, s3, s2
      const auto pos = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), det.spec.mode) - labels.begin());
      HomodyneSpec local = det.spec;
      local.mode = pos;
      MeasurementRecord rec = homodyne_sample(state, local, rng, det.id);
      state = homodyne_condition(state, rec);
      labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pos));
      rec.spec.mode = det.spec.mode;
      records.push_back(rec);
      observe(config, "conditioned", state);
    }
    state = apply_feedforward(state, rule, records);
    observe(config, "trajectory_output", state);
    means.row(i) = state.mean().transpose();
    conditional_cov += state.cov();
    if (config.keep_trajectories) logs.push_back(std::move(records));
  }
  conditional_cov /= static_cast<double>(n);

  // Ensemble moments: average conditional covariance plus the spread of the
  // conditional means.
  const Eigen::Vector4d mean = means.colwise().mean().transpose();
  const Eigen::MatrixXd centered = means.rowwise() - mean.transpose();
  const double dof = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::Matrix4d spread = centered.transpose() * centered / dof;
  Eigen::Matrix4d cov = conditional_cov + spread;
  cov = 0.5 * (cov + cov.transpose()).eval();

  MonteCarloStats stats;
  stats.trajectories = config.trajectories;
  const double dn = static_cast<double>(n);
  for (Eigen::Index a = 0; a < 4; ++a) {
    stats.mean_se(a) = std::sqrt(spread(a, a) / dn);
    for (Eigen::Index b = 0; b < 4; ++b) {
      const Eigen::VectorXd prod = centered.col(a).cwiseProduct(centered.col(b));
      const double var = (prod.array() - prod.mean()).square().sum() / dof;
      stats.cov_se(a, b) = std::sqrt(var / dn);
    }
  }

  // Standard error of lambda from batch estimates.
  constexpr Eigen::Index kBatches = 20;
  stats.lambda_se = std::numeric_limits<double>::quiet_NaN();
  if (n >= 2 * kBatches) {
    const Eigen::Index size = n / kBatches;
    Eigen::VectorXd lambdas(kBatches);
    for (Eigen::Index b = 0; b < kBatches; ++b) {
      const Eigen::MatrixXd block = means.middleRows(b * size, size);
      const Eigen::MatrixXd bc = block.rowwise() - block.colwise().mean();
      const Eigen::Matrix4d bcov = conditional_cov + bc.transpose() * bc / static_cast<double>(size - 1);
      lambdas(b) = lambda_minus(0.5 * (bcov + bcov.transpose()));
    }
    const double spread_l = std::sqrt((lambdas.array() - lambdas.mean()).square().sum() / (kBatches - 1));
    stats.lambda_se = spread_l / std::sqrt(static_cast<double>(kBatches));
  }

  GaussianState out(mean, cov);
  observe(config, "output", out);
  EntanglementVerdict v = assess(out.cov());
  stats.separability = classify(v.lambda_minus, stats.lambda_se);
  return {std::move(out), v, noise, stats, std::move(logs)};
}

}  // namespace

ProtocolConfig ProtocolConfig::symmetric(double theta, double r) {
  ProtocolConfig c;
  c.theta = theta;
  c.squeezing = Eigen::Vector3d::Constant(r);
  return c;
}

Eigen::Vector4d ProtocolResult::variances_db() const {
  return variances().unaryExpr([](double v) { return variance_to_db(v); });
}

Eigen::Vector4d ProtocolResult::powers() const { return means().cwiseAbs2() + variances(); }

Eigen::Vector4d ProtocolResult::powers_db() const {
  return powers().unaryExpr([](double v) { return variance_to_db(v); });
}

std::array<Detector, 3> protocol_detectors(double theta) {
  using namespace protocol_mode;
  return {Detector{kDetectorS1, {kAlpha, 0.0}}, Detector{kDetectorS3, {kBeta, 0.0}},
          Detector{kDetectorS2, {kC2, theta}}};
}

FeedforwardRule protocol_feedforward_rule(double theta) {
  const double t = interaction(theta);
  const double s2_gain = -1.0 / (std::numbers::sqrt2 * std::cos(theta));
  const std::vector<std::pair<int, double>> p_gains{{kDetectorS1, t}, {kDetectorS3, t}, {kDetectorS2, s2_gain}};
  FeedforwardRule rule;
  rule.terms.push_back({0, Quadrature::kX, {{kDetectorS1, 1.0}}});
  rule.terms.push_back({0, Quadrature::kP, p_gains});
  rule.terms.push_back({1, Quadrature::kX, {{kDetectorS3, 1.0}}});
  rule.terms.push_back({1, Quadrature::kP, p_gains});
  return rule;
}

Eigen::Matrix4d io_matrix(double t) {
  Eigen::Matrix4d gate = Eigen::Matrix4d::Identity();
  gate(1, 0) = t;
  gate(1, 2) = t;
  gate(3, 0) = t;
  gate(3, 2) = t;
  const Eigen::Vector4d s(std::numbers::sqrt2, 1.0 / std::numbers::sqrt2, std::numbers::sqrt2,
                          1.0 / std::numbers::sqrt2);
  return s.asDiagonal() * gate;
}

Eigen::Matrix4d excess_noise_covariance(double t, const Eigen::Matrix3d& nullifier_cov) {
  Eigen::Matrix<double, 4, 3> l = Eigen::Matrix<double, 4, 3>::Zero();
  l(1, 0) = 1.0;
  l(1, 1) = t;
  l(3, 1) = t;
  l(3, 2) = 1.0;
  l /= std::numbers::sqrt2;
  return l * nullifier_cov * l.transpose();
}

GaussianState prepare_register(const ProtocolConfig& config) {
  validate(config);
  GaussianState reg = tensor(tensor(coherent(config.alpha.x, config.alpha.p), coherent(config.beta.x, config.beta.p)),
                             make_linear_cluster3(config.squeezing));
  for (std::size_t m = 0; m < config.transmission.size(); ++m) {
    if (config.transmission[m] != 1.0) reg = gates::loss_channel(reg, m, config.transmission[m]);
  }
  return reg;
}

ProtocolResult run_protocol(const ProtocolConfig& config) {
  validate(config);
  if (config.ideal_limit) {
    throw UnsupportedConfig("infinite squeezing cannot be simulated; use analytic_output");
  }
  return config.mode == EvalMode::kDeterministic ? run_deterministic(config) : run_monte_carlo(config);
}

ProtocolResult analytic_output(const ProtocolConfig& config) {
  validate(config);
  if (!lossless(config)) throw UnsupportedConfig("analytic_output does not model loss");
  const double t = interaction(config.theta);
  const Eigen::Matrix4d k = io_matrix(t);
  const Eigen::Vector4d mean_in(config.alpha.x, config.alpha.p, config.beta.x, config.beta.p);
  const Eigen::Matrix4d cov_in = kVacuumVariance * Eigen::Matrix4d::Identity();
  Eigen::Matrix4d noise = Eigen::Matrix4d::Zero();
  if (!config.ideal_limit) {
    noise = excess_noise_covariance(t, ResourceNoiseModel::linear_cluster3(config.squeezing).nullifier_covariance());
  }
  GaussianState out(k * mean_in, k * cov_in * k.transpose() + noise);
  EntanglementVerdict v = verdict(out);
  return {std::move(out), v, noise, std::nullopt, {}};
}

double lambda_minus_closed_form(double t, double e2r) {
  const double t2 = t * t;
  const double a = 1.0 + 2.0 * t2 + (2.0 + 3.0 * t2) * e2r;
  const double b = 4.0 * t2 * (1.0 + t2 + (2.0 + 3.0 * t2) * e2r) + std::pow((1.0 + 3.0 * t2) * e2r, 2);
  return 0.25 * std::sqrt(a - std::sqrt(b));
}

PathDiscrepancy compare_paths(const ProtocolConfig& config) {
  PathDiscrepancy d;
  ProtocolConfig det_config = config;
  det_config.mode = EvalMode::kDeterministic;
  det_config.keep_trajectories = false;
  const ProtocolResult det = run_protocol(det_config);

  if (lossless(config)) {
    const ProtocolResult ana = analytic_output(det_config);
    d.max_cov_diff = (det.output.cov() - ana.output.cov()).cwiseAbs().maxCoeff();
    d.max_mean_diff = (det.output.mean() - ana.output.mean()).cwiseAbs().maxCoeff();
  } else {
    d.analytic_available = false;
  }

  if (config.mode == EvalMode::kMonteCarlo) {
    const ProtocolResult mc = run_protocol(config);
    const MonteCarloStats& st = *mc.monte_carlo;
    double worst = 0.0;
    bool within = true;
    auto check = [&](double diff, double se) {
      if (se > 0.0) worst = std::max(worst, diff / se);
      if (diff > kMcSigmaTolerance * se + kMcAbsoluteFloor) within = false;
    };
    for (Eigen::Index a = 0; a < 4; ++a) {
      check(std::abs(mc.output.mean()(a) - det.output.mean()(a)), st.mean_se(a));
      for (Eigen::Index b = 0; b < 4; ++b) {
        check(std::abs(mc.output.cov()(a, b) - det.output.cov()(a, b)), st.cov_se(a, b));
      }
    }
    d.mc_max_sigma = worst;
    d.mc_within_tolerance = within;
  }
  return d;
}

std::array<double, 7> reference_interaction_parameters() {
  return {0.0, 0.2, 0.5, 1.0 / std::numbers::sqrt2, 1.0, std::numbers::sqrt2, 2.0};
}

std::array<double, 7> reference_angles_deg() { return {0.0, 11.3, 26.6, 35.3, 45.0, 54.7, 63.4}; }

double coherent_amplitude_from_power_db(double db) {
  const double excess = db_to_variance(db) - kVacuumVariance;
  if (!(excess >= 0.0)) throw std::invalid_argument("coherent power must be at or above the shot-noise level");
  return std::sqrt(excess);
}

}  // namespace cvgate
