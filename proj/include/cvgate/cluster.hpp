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

#include <cstddef>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "cvgate/gaussian_state.hpp"
#include "cvgate/measurement.hpp"
#include "cvgate/rng.hpp"

namespace cvgate {

/// Weighted graph with real symmetric adjacency and no self-loops. Node j
/// carries the nullifier delta_j = p_j - sum_k g_jk x_k.
class GraphSpec {
 public:
  explicit GraphSpec(std::size_t nodes);
  explicit GraphSpec(Eigen::MatrixXd adjacency);

  /// Path graph 0 - 1 - ... - (n-1) with uniform weight.
  static GraphSpec line(std::size_t nodes, double weight = 1.0);

  /// Parses "line:N" (unit weights).
  static GraphSpec parse(std::string_view text);

  void set_edge(std::size_t j, std::size_t k, double weight);

  std::size_t size() const { return static_cast<std::size_t>(adjacency_.rows()); }
  double weight(std::size_t j, std::size_t k) const;
  std::vector<std::size_t> neighbors(std::size_t j) const;
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }

  /// (j, k, weight) for j < k and non-zero weight.
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges() const;

 private:
  Eigen::MatrixXd adjacency_;
};

/// Moments of the nullifier vector delta = N xi.
struct NullifierReport {
  Eigen::VectorXd means;
  Eigen::MatrixXd covariance;

  Eigen::VectorXd variances() const { return covariance.diagonal(); }
};

/// Rows are nullifiers: +1 on p_j, -g_jk on x_k.
Eigen::MatrixXd nullifier_matrix(const GraphSpec& graph);

NullifierReport nullifier_report(const GaussianState& state, const GraphSpec& graph);

/// Resource-noise decomposition of a cluster built from squeezed vacua by a
/// passive network: delta = decomposition * (e^{-r_j} p_j^(0)), with
/// p_j^(0) vacuum quadratures of the input squeezers.
struct ResourceNoiseModel {
  Eigen::MatrixXd decomposition;
  Eigen::VectorXd squeezing;  // r_j per resource mode

  /// Three-node line: delta_1 = sqrt2 e^{-r} p_1, delta_2 = sqrt3 e^{-r} p_2,
  /// delta_3 = e^{-r} p_1 / sqrt2 + sqrt(3/2) e^{-r} p_3.
  static ResourceNoiseModel linear_cluster3(double r);
  static ResourceNoiseModel linear_cluster3(const Eigen::Vector3d& r);

  /// Cov(delta) = D diag(e^{-2 r_j} / 4) D^T.
  Eigen::MatrixXd nullifier_covariance() const;
};

/// Pure cluster from p-squeezed vacua through the unique passive network
/// U = (I + iG) (I + G^2)^{-1} D that realises `decomposition` D. Requires
/// D D^T = I + G^2, r_j >= 0.
GaussianState make_passive_cluster(const GraphSpec& graph, const Eigen::MatrixXd& decomposition,
                                   const Eigen::VectorXd& squeezing);

/// Three-mode linear cluster matching ResourceNoiseModel::linear_cluster3.
GaussianState make_linear_cluster3(double r);
GaussianState make_linear_cluster3(const Eigen::Vector3d& r);

/// p-squeezed vacua joined by controlled_z(g_jk) on every edge. Nullifiers
/// are independent with variance e^{-2r}/4 each; this is NOT the resource
/// behind the entanglement formula of the T_Z protocol (different nullifier
/// correlations), so use make_linear_cluster3 for that.
GaussianState make_cluster_canonical(const GraphSpec& graph, double r);

/// Output of a sampled shaping step.
struct ShapedState {
  GaussianState state;
  std::vector<MeasurementRecord> records;
};

// Cluster shaping. The measured node is removed and the remaining nodes keep
// their relative order. Deterministic overloads return the outcome-averaged
// state; sampled overloads draw the outcome from `rng`. The detector id of the
// centre measurement is always 2.

inline constexpr int kCenterDetector = 2;

/// Quantum eraser: measure x on the centre, Z_j(-g_jc s) on each neighbour.
Detector erase_detector(const GraphSpec& graph, std::size_t center);
FeedforwardRule erase_rule(const GraphSpec& graph, std::size_t center);
GaussianState erase_node(const GaussianState& state, const GraphSpec& graph, std::size_t center);
ShapedState erase_node(const GaussianState& state, const GraphSpec& graph, std::size_t center, RngStream& rng);

/// Wire shortening: measure p on the centre and subtract it (over the bond
/// weight) from x of `keep`.
Detector shorten_detector(const GraphSpec& graph, std::size_t center);
FeedforwardRule shorten_rule(const GraphSpec& graph, std::size_t center, std::size_t keep);
GaussianState shorten_wire(const GaussianState& state, const GraphSpec& graph, std::size_t center,
                           std::size_t keep);
ShapedState shorten_wire(const GaussianState& state, const GraphSpec& graph, std::size_t center,
                         std::size_t keep, RngStream& rng);

/// Gain tuning: measure x cos(theta) - p sin(theta) on the centre and apply
/// Z_j(-g_jc s / cos theta) to each neighbour. Throws SingularRescale for
/// |theta| >= 90 deg.
Detector gain_tuning_detector(const GraphSpec& graph, std::size_t center, double theta);
FeedforwardRule gain_tuning_rule(const GraphSpec& graph, std::size_t center, double theta);
GaussianState tune_gain(const GaussianState& state, const GraphSpec& graph, std::size_t center, double theta);
GaussianState tune_gain(const GaussianState& state, const GraphSpec& graph, std::size_t center, double theta,
                        const FeedforwardRule& rule);
ShapedState tune_gain(const GaussianState& state, const GraphSpec& graph, std::size_t center, double theta,
                      RngStream& rng);

/// Covariance of the two-mode T_Z nullifiers (p_1 - t(x_1 + x_2),
/// p_2 - t(x_1 + x_2)) of a two-mode state.
Eigen::Matrix2d tz_nullifier_covariance(const GaussianState& two_mode, double t);

}  // namespace cvgate
