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

#include "cvgate/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvgate::gates {

namespace {

void require_distinct(std::size_t a, std::size_t b, const char* what) {
  if (a == b) throw std::invalid_argument(std::string(what) + ": modes must be distinct");
}

}  // namespace

SymplecticOp squeezer(std::size_t mode, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("squeezer: scale must be positive and finite");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = z;
  m(1, 1) = 1.0 / z;
  return {{mode}, m};
}

SymplecticOp beamsplitter(std::size_t mode_a, std::size_t mode_b, double reflectivity, BeamsplitterSign sign) {
  require_distinct(mode_a, mode_b, "beamsplitter");
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw std::invalid_argument("beamsplitter: reflectivity must lie in [0, 1]");
  }
  const double t = std::sqrt(1.0 - reflectivity);
  const double r = sign == BeamsplitterSign::kStandard ? std::sqrt(reflectivity) : -std::sqrt(reflectivity);
  // Local ordering (x_a, p_a, x_b, p_b).
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  for (int q = 0; q < 2; ++q) {
    m(q, q) = t;
    m(q, 2 + q) = -r;
    m(2 + q, q) = r;
    m(2 + q, 2 + q) = t;
  }
  return {{mode_a, mode_b}, m};
}

SymplecticOp controlled_z(std::size_t mode_j, std::size_t mode_k, double gain) {
  require_distinct(mode_j, mode_k, "controlled_z");
  if (!std::isfinite(gain)) throw std::invalid_argument("controlled_z: gain must be finite");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(1, 2) = gain;
  m(3, 0) = gain;
  return {{mode_j, mode_k}, m};
}

SymplecticOp quadratic_phase(std::size_t mode, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("quadratic_phase: t must be finite");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(1, 0) = t;
  return {{mode}, m};
}

SymplecticOp tz_gate(std::size_t mode_j, std::size_t mode_k, double t) {
  require_distinct(mode_j, mode_k, "tz_gate");
  if (!std::isfinite(t)) throw std::invalid_argument("tz_gate: t must be finite");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(1, 0) = t;
  m(1, 2) = t;
  m(3, 0) = t;
  m(3, 2) = t;
  return {{mode_j, mode_k}, m};
}

SymplecticOp rotation(std::size_t mode, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::MatrixXd m(2, 2);
  m << c, s,
      -s, c;
  return {{mode}, m};
}

SymplecticOp passive_network(std::vector<std::size_t> modes, const Eigen::MatrixXcd& unitary) {
  const auto k = static_cast<Eigen::Index>(modes.size());
  if (unitary.rows() != k || unitary.cols() != k) {
    throw std::invalid_argument("passive_network: unitary size does not match mode count");
  }
  const double err = (unitary * unitary.adjoint() - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
  if (err > kSymplecticTolerance) throw std::invalid_argument("passive_network: matrix is not unitary");
  const Eigen::MatrixXd a = unitary.real();
  const Eigen::MatrixXd b = unitary.imag();
  Eigen::MatrixXd m(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      m(2 * i, 2 * j) = a(i, j);
      m(2 * i, 2 * j + 1) = -b(i, j);
      m(2 * i + 1, 2 * j) = b(i, j);
      m(2 * i + 1, 2 * j + 1) = a(i, j);
    }
  }
  return {std::move(modes), m};
}

GaussianState loss_channel(const GaussianState& state, std::size_t mode, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("loss_channel: transmission must lie in (0, 1]");
  if (mode >= state.n_modes()) throw std::invalid_argument("loss_channel: mode index out of range");
  const auto dim = static_cast<Eigen::Index>(2 * state.n_modes());
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
  const auto ix = static_cast<Eigen::Index>(x_index(mode));
  scale(ix) = scale(ix + 1) = std::sqrt(eta);
  Eigen::MatrixXd cov = scale.asDiagonal() * state.cov() * scale.asDiagonal();
  cov(ix, ix) += (1.0 - eta) * kVacuumVariance;
  cov(ix + 1, ix + 1) += (1.0 - eta) * kVacuumVariance;
  Eigen::VectorXd mean = scale.asDiagonal() * state.mean();
  return {std::move(mean), std::move(cov)};
}

}  // namespace cvgate::gates
