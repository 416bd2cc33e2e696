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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cvgate/entanglement.hpp"
#include "cvgate/gates.hpp"
#include "cvgate/gaussian_state.hpp"
#include "cvgate/measurement.hpp"

// The T_Z gate teleported through a three-mode linear cluster.
//
// Register layout: inputs alpha, beta, then cluster nodes C1, C2, C3. Each
// input is mixed with its edge node on a 50% beamsplitter; x of the
// alpha' and beta' arms (s1, s3) and x cos(theta) - p sin(theta) of C2 (s2)
// are measured, and the feed-forward
//   x += s_{1,3},  p += (s1 + s3) tan(theta) - s2 / (sqrt2 cos(theta))
// on C1' and C3' leaves the output modes mu, nu with
//   xi_out = diag(S, S) [[I + T, T], [T, I + T]] xi_in + noise,
// S = diag(sqrt2, 1/sqrt2), T = [[0, 0], [tan(theta), 0]].
namespace cvgate {

namespace protocol_mode {
inline constexpr std::size_t kAlpha = 0;
inline constexpr std::size_t kBeta = 1;
inline constexpr std::size_t kC1 = 2;
inline constexpr std::size_t kC2 = 3;
inline constexpr std::size_t kC3 = 4;
}  // namespace protocol_mode

inline constexpr int kDetectorS1 = 1;
inline constexpr int kDetectorS2 = 2;
inline constexpr int kDetectorS3 = 3;

enum class EvalMode { kDeterministic, kMonteCarlo };

/// Input quadrature means; (0, 0) is vacuum, anything else a coherent state.
struct InputMean {
  double x = 0.0;
  double p = 0.0;
};

/// Receives every intermediate state of a run with a short stage label.
using StateObserver = std::function<void(std::string_view stage, const GaussianState& state)>;

struct ProtocolConfig {
  double theta = 0.0;  // radians, |theta| < pi/2
  Eigen::Vector3d squeezing = Eigen::Vector3d::Zero();  // r of the three resource squeezers
  InputMean alpha;
  InputMean beta;
  EvalMode mode = EvalMode::kDeterministic;
  std::size_t trajectories = 100000;
  std::uint64_t seed = 1;
  /// Pure-loss transmission per register mode (alpha, beta, C1, C2, C3),
  /// applied after preparation and before coupling.
  std::array<double, 5> transmission{1.0, 1.0, 1.0, 1.0, 1.0};

  /// Only for analytic_output: r -> infinity (no excess noise).
  bool ideal_limit = false;
  bool keep_trajectories = false;
  StateObserver observer;

  // Hooks for convention-sensitivity checks; leave at defaults otherwise.
  gates::BeamsplitterSign coupling = gates::BeamsplitterSign::kStandard;
  std::optional<FeedforwardRule> feedforward_override;

  static ProtocolConfig symmetric(double theta, double r);
};

struct MonteCarloStats {
  std::size_t trajectories = 0;
  Eigen::Vector4d mean_se = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov_se = Eigen::Matrix4d::Zero();
  double lambda_se = 0.0;
  Separability separability = Separability::kInconclusive;
};

struct ProtocolResult {
  GaussianState output;  // modes (mu, nu)
  EntanglementVerdict entanglement;
  /// Covariance of the noise vector added to (x_mu, p_mu, x_nu, p_nu).
  Eigen::Matrix4d excess_noise_cov = Eigen::Matrix4d::Zero();
  std::optional<MonteCarloStats> monte_carlo;
  std::vector<std::vector<MeasurementRecord>> trajectories;

  Eigen::Vector4d means() const { return output.mean(); }
  Eigen::Vector4d variances() const { return output.cov().diagonal(); }
  /// Variances in dB relative to the shot-noise level.
  Eigen::Vector4d variances_db() const;
  /// Quadrature powers <q^2> = mean^2 + variance.
  Eigen::Vector4d powers() const;
  Eigen::Vector4d powers_db() const;
};

/// The three detectors on the coupled five-mode register.
std::array<Detector, 3> protocol_detectors(double theta);

/// Feed-forward on the two remaining modes (C1' -> mu, C3' -> nu).
FeedforwardRule protocol_feedforward_rule(double theta);

/// diag(S, S) [[I + T, T], [T, I + T]] for interaction t.
Eigen::Matrix4d io_matrix(double t);

/// Covariance of (0, (d1 + t d2), 0, (d3 + t d2)) / sqrt2 given Cov(d).
Eigen::Matrix4d excess_noise_covariance(double t, const Eigen::Matrix3d& nullifier_cov);

/// Five-mode register after preparation and optional loss.
GaussianState prepare_register(const ProtocolConfig& config);

ProtocolResult run_protocol(const ProtocolConfig& config);

/// Closed-form input-output relation plus resource noise; no measurement is
/// simulated. Throws UnsupportedConfig when loss is configured.
ProtocolResult analytic_output(const ProtocolConfig& config);

/// lambda~_- = (1/4) [1 + 2t^2 + (2 + 3t^2) e - sqrt(4t^2 (1 + t^2 + (2 + 3t^2) e)
///             + ((1 + 3t^2) e)^2)]^{1/2}, e = e^{-2r} (e = 0 is the ideal limit).
double lambda_minus_closed_form(double t, double e2r);

/// Monte-Carlo agreement threshold (in standard errors) and the absolute
/// floor used where an estimator has zero spread.
inline constexpr double kMcSigmaTolerance = 5.0;
inline constexpr double kMcAbsoluteFloor = 1e-12;

struct PathDiscrepancy {
  double max_cov_diff = 0.0;   // deterministic vs analytic
  double max_mean_diff = 0.0;  // deterministic vs analytic
  bool analytic_available = true;
  /// Filled when config.mode is Monte-Carlo.
  std::optional<double> mc_max_sigma;  // max |MC - det| / SE over cov and mean entries
  bool mc_within_tolerance = true;
};

PathDiscrepancy compare_paths(const ProtocolConfig& config);

/// Interaction parameters t = tan(theta) and the corresponding measurement
/// angles as quoted (one decimal).
std::array<double, 7> reference_interaction_parameters();
std::array<double, 7> reference_angles_deg();

inline constexpr double kReferenceSqueezingDb = 4.5;
inline constexpr double kCoherentPowerAlphaDb = 13.8;
inline constexpr double kCoherentPowerBetaDb = 16.9;

/// Coherent amplitude whose quadrature power mean^2 + 1/4 lies `db` above
/// the shot-noise level.
double coherent_amplitude_from_power_db(double db);

}  // namespace cvgate
