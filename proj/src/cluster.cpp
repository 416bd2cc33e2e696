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

#include "cvgate/cluster.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cvgate/errors.hpp"
#include "cvgate/gates.hpp"
#include "cvgate/symplectic.hpp"

namespace cvgate {

// ---------------------------------------------------------------------------
// GraphSpec

GraphSpec::GraphSpec(std::size_t nodes) {
  if (nodes == 0) throw std::invalid_argument("GraphSpec: need at least one node");
  const auto n = static_cast<Eigen::Index>(nodes);
  adjacency_ = Eigen::MatrixXd::Zero(n, n);
}

GraphSpec::GraphSpec(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() == 0 || adjacency_.rows() != adjacency_.cols()) {
    throw std::invalid_argument("GraphSpec: adjacency must be square and non-empty");
  }
  if (!adjacency_.allFinite()) throw std::invalid_argument("GraphSpec: non-finite weight");
  if ((adjacency_ - adjacency_.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("GraphSpec: adjacency must be symmetric");
  }
  if (adjacency_.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("GraphSpec: self-loops are not supported");
  }
}

GraphSpec GraphSpec::line(std::size_t nodes, double weight) {
  GraphSpec g(nodes);
  for (std::size_t j = 0; j + 1 < nodes; ++j) g.set_edge(j, j + 1, weight);
  return g;
}

GraphSpec GraphSpec::parse(std::string_view text) {
  constexpr std::string_view kLine = "line:";
  if (text.starts_with(kLine)) {
    std::size_t n = 0;
    const auto digits = text.substr(kLine.size());
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && n >= 1) return line(n);
  }
  throw std::invalid_argument("unrecognised graph '" + std::string(text) + "' (expected line:N)");
}

void GraphSpec::set_edge(std::size_t j, std::size_t k, double weight) {
  if (j >= size() || k >= size()) throw std::invalid_argument("GraphSpec: node index out of range");
  if (j == k) throw std::invalid_argument("GraphSpec: self-loops are not supported");
  if (!std::isfinite(weight)) throw std::invalid_argument("GraphSpec: non-finite weight");
  adjacency_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = weight;
  adjacency_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = weight;
}

double GraphSpec::weight(std::size_t j, std::size_t k) const {
  if (j >= size() || k >= size()) throw std::invalid_argument("GraphSpec: node index out of range");
  return adjacency_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
}

std::vector<std::size_t> GraphSpec::neighbors(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < size(); ++k) {
    if (weight(j, k) != 0.0) out.push_back(k);
  }
  return out;
}

std::vector<std::tuple<std::size_t, std::size_t, double>> GraphSpec::edges() const {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  for (std::size_t j = 0; j < size(); ++j) {
    for (std::size_t k = j + 1; k < size(); ++k) {
      if (weight(j, k) != 0.0) out.emplace_back(j, k, weight(j, k));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nullifiers and resource preparation

Eigen::MatrixXd nullifier_matrix(const GraphSpec& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  Eigen::MatrixXd nmat = Eigen::MatrixXd::Zero(n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    nmat(j, 2 * j + 1) = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) nmat(j, 2 * k) = -graph.adjacency()(j, k);
  }
  return nmat;
}

NullifierReport nullifier_report(const GaussianState& state, const GraphSpec& graph) {
  if (graph.size() != state.n_modes()) {
    throw std::invalid_argument("nullifier_report: graph has " + std::to_string(graph.size()) +
                                " nodes but state has " + std::to_string(state.n_modes()) + " modes");
  }
  const Eigen::MatrixXd nmat = nullifier_matrix(graph);
  return {nmat * state.mean(), nmat * state.cov() * nmat.transpose()};
}

ResourceNoiseModel ResourceNoiseModel::linear_cluster3(double r) {
  return linear_cluster3(Eigen::Vector3d::Constant(r));
}

ResourceNoiseModel ResourceNoiseModel::linear_cluster3(const Eigen::Vector3d& r) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = std::numbers::sqrt2;
  d(1, 1) = std::numbers::sqrt3;
  d(2, 0) = 1.0 / std::numbers::sqrt2;
  d(2, 2) = std::sqrt(1.5);
  return {d, r};
}

Eigen::MatrixXd ResourceNoiseModel::nullifier_covariance() const {
  const Eigen::VectorXd squeezed_var = (-2.0 * squeezing.array()).exp() * kVacuumVariance;
  return decomposition * squeezed_var.asDiagonal() * decomposition.transpose();
}

GaussianState make_passive_cluster(const GraphSpec& graph, const Eigen::MatrixXd& decomposition,
                                   const Eigen::VectorXd& squeezing) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  if (decomposition.rows() != n || decomposition.cols() != n || squeezing.size() != n) {
    throw std::invalid_argument("make_passive_cluster: size mismatch with graph");
  }
  if (!squeezing.allFinite() || squeezing.minCoeff() < 0.0) {
    throw std::invalid_argument("make_passive_cluster: squeezing must be finite and non-negative");
  }
  const Eigen::MatrixXd& g = graph.adjacency();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd gram = id + g * g;
  if ((decomposition * decomposition.transpose() - gram).cwiseAbs().maxCoeff() > kSymplecticTolerance) {
    throw std::invalid_argument("make_passive_cluster: decomposition must satisfy D D^T = I + G^2");
  }
  // delta = (B - G A) x~ + (A + G B) p~ vanishes on x~ iff B = G A, and then
  // equals D p~ iff A = (I + G^2)^{-1} D.
  const Eigen::MatrixXd a = gram.ldlt().solve(decomposition);
  const Eigen::MatrixXd b = g * a;
  Eigen::MatrixXcd u(n, n);
  u.real() = a;
  u.imag() = b;

  GaussianState state = p_squeezed_vacuum(squeezing(0));
  for (Eigen::Index j = 1; j < n; ++j) state = tensor(state, p_squeezed_vacuum(squeezing(j)));
  std::vector<std::size_t> modes;
  for (std::size_t j = 0; j < graph.size(); ++j) modes.push_back(j);
  return apply_symplectic(state, gates::passive_network(std::move(modes), u));
}

GaussianState make_linear_cluster3(double r) {
  if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("make_linear_cluster3: r must be finite and >= 0");
  return make_linear_cluster3(Eigen::Vector3d::Constant(r));
}

GaussianState make_linear_cluster3(const Eigen::Vector3d& r) {
  const ResourceNoiseModel model = ResourceNoiseModel::linear_cluster3(r);
  return make_passive_cluster(GraphSpec::line(3), model.decomposition, model.squeezing);
}

GaussianState make_cluster_canonical(const GraphSpec& graph, double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("make_cluster_canonical: r must be finite");
  GaussianState state = p_squeezed_vacuum(r);
  for (std::size_t j = 1; j < graph.size(); ++j) state = tensor(state, p_squeezed_vacuum(r));
  for (const auto& [j, k, w] : graph.edges()) state = apply_symplectic(state, gates::controlled_z(j, k, w));
  return state;
}

// ---------------------------------------------------------------------------
// Shaping

namespace {

std::size_t index_after_removal(std::size_t node, std::size_t removed) { return node > removed ? node - 1 : node; }

void require_center(const GraphSpec& graph, std::size_t center) {
  if (center >= graph.size()) throw std::invalid_argument("shaping: centre node out of range");
}

void require_match(const GaussianState& state, const GraphSpec& graph) {
  if (state.n_modes() != graph.size()) throw std::invalid_argument("shaping: graph and state sizes differ");
}

ShapedState sampled(const GaussianState& state, const Detector& det, const FeedforwardRule& rule, RngStream& rng) {
  MeasurementRecord rec = homodyne_sample(state, det.spec, rng, det.id);
  GaussianState conditioned = homodyne_condition(state, rec);
  std::vector<MeasurementRecord> records{rec};
  return {apply_feedforward(conditioned, rule, records), std::move(records)};
}

}  // namespace

Detector erase_detector(const GraphSpec& graph, std::size_t center) {
  require_center(graph, center);
  return {kCenterDetector, {center, 0.0}};
}

FeedforwardRule erase_rule(const GraphSpec& graph, std::size_t center) {
  require_center(graph, center);
  FeedforwardRule rule;
  for (std::size_t j : graph.neighbors(center)) {
    rule.terms.push_back({index_after_removal(j, center), Quadrature::kP,
                          {{kCenterDetector, -graph.weight(j, center)}}});
  }
  return rule;
}

GaussianState erase_node(const GaussianState& state, const GraphSpec& graph, std::size_t center) {
  require_match(state, graph);
  const Detector det = erase_detector(graph, center);
  return ensemble_feedforward(state, std::span(&det, 1), erase_rule(graph, center));
}

ShapedState erase_node(const GaussianState& state, const GraphSpec& graph, std::size_t center, RngStream& rng) {
  require_match(state, graph);
  return sampled(state, erase_detector(graph, center), erase_rule(graph, center), rng);
}

Detector shorten_detector(const GraphSpec& graph, std::size_t center) {
  require_center(graph, center);
  // Angle 90 deg measures -p.
  return {kCenterDetector, {center, std::numbers::pi / 2.0}};
}

FeedforwardRule shorten_rule(const GraphSpec& graph, std::size_t center, std::size_t keep) {
  require_center(graph, center);
  if (keep >= graph.size() || graph.weight(center, keep) == 0.0) {
    throw std::invalid_argument("shorten_wire: keep node must neighbour the centre");
  }
  // x_keep -= p_c / g, and the outcome is s = -p_c.
  return {{{index_after_removal(keep, center), Quadrature::kX, {{kCenterDetector, 1.0 / graph.weight(center, keep)}}}}};
}

GaussianState shorten_wire(const GaussianState& state, const GraphSpec& graph, std::size_t center,
                           std::size_t keep) {
  require_match(state, graph);
  const Detector det = shorten_detector(graph, center);
  return ensemble_feedforward(state, std::span(&det, 1), shorten_rule(graph, center, keep));
}

ShapedState shorten_wire(const GaussianState& state, const GraphSpec& graph, std::size_t center, std::size_t keep,
                         RngStream& rng) {
  require_match(state, graph);
  return sampled(state, shorten_detector(graph, center), shorten_rule(graph, center, keep), rng);
}

Detector gain_tuning_detector(const GraphSpec& graph, std::size_t center, double theta) {
  require_center(graph, center);
  if (!(std::abs(theta) < std::numbers::pi / 2.0)) {
    throw SingularRescale("gain tuning needs |theta| < 90 deg");
  }
  return {kCenterDetector, {center, theta}};
}

FeedforwardRule gain_tuning_rule(const GraphSpec& graph, std::size_t center, double theta) {
  const Detector det = gain_tuning_detector(graph, center, theta);
  FeedforwardRule rule;
  for (std::size_t j : graph.neighbors(center)) {
    rule.terms.push_back({index_after_removal(j, center), Quadrature::kP,
                          {{det.id, -graph.weight(j, center) / std::cos(theta)}}});
  }
  return rule;
}

GaussianState tune_gain(const GaussianState& state, const GraphSpec& graph, std::size_t center, double theta) {
  return tune_gain(state, graph, center, theta, gain_tuning_rule(graph, center, theta));
}

GaussianState tune_gain(const GaussianState& state, const GraphSpec& graph, std::size_t center, double theta,
                        const FeedforwardRule& rule) {
  require_match(state, graph);
  const Detector det = gain_tuning_detector(graph, center, theta);
  return ensemble_feedforward(state, std::span(&det, 1), rule);
}

ShapedState tune_gain(const GaussianState& state, const GraphSpec& graph, std::size_t center, double theta,
                      RngStream& rng) {
  require_match(state, graph);
  return sampled(state, gain_tuning_detector(graph, center, theta), gain_tuning_rule(graph, center, theta), rng);
}

Eigen::Matrix2d tz_nullifier_covariance(const GaussianState& two_mode, double t) {
  if (two_mode.n_modes() != 2) throw std::invalid_argument("tz_nullifier_covariance: need a two-mode state");
  Eigen::Matrix<double, 2, 4> nmat;
  nmat << -t, 1.0, -t, 0.0,
          -t, 0.0, -t, 1.0;
  return nmat * two_mode.cov() * nmat.transpose();
}

}  // namespace cvgate
