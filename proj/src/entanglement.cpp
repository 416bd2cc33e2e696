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

#include "cvgate/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvgate/errors.hpp"

namespace cvgate {

namespace {

void require_two_mode(const Eigen::MatrixXd& cov) {
  if (cov.rows() != 4 || cov.cols() != 4) throw std::invalid_argument("expected a 4x4 two-mode covariance");
}

}  // namespace

Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& cov, std::size_t mode) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
    throw std::invalid_argument("partial_transpose: need a 2n x 2n matrix");
  }
  const auto p = static_cast<Eigen::Index>(p_index(mode));
  if (p >= cov.rows()) throw std::invalid_argument("partial_transpose: mode index out of range");
  Eigen::MatrixXd out = cov;
  out.row(p) *= -1.0;
  out.col(p) *= -1.0;
  return out;
}

double lambda_minus(const Eigen::MatrixXd& two_mode_cov) {
  require_two_mode(two_mode_cov);
  return symplectic_eigenvalues(partial_transpose(two_mode_cov, 1)).minCoeff();
}

double lambda_minus_from_invariants(const Eigen::MatrixXd& two_mode_cov) {
  require_two_mode(two_mode_cov);
  const double det_a = two_mode_cov.block<2, 2>(0, 0).determinant();
  const double det_b = two_mode_cov.block<2, 2>(2, 2).determinant();
  const double det_c = two_mode_cov.block<2, 2>(0, 2).determinant();
  const double delta = det_a + det_b - 2.0 * det_c;
  const double disc = std::max(0.0, delta * delta - 4.0 * two_mode_cov.determinant());
  return std::sqrt(std::max(0.0, 0.5 * (delta - std::sqrt(disc))));
}

double log_negativity(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("log_negativity: lambda must be positive");
  if (lambda >= kVacuumVariance - kPhysicalityTolerance) return 0.0;
  return -std::log(4.0 * lambda);
}

EntanglementVerdict verdict(const Eigen::MatrixXd& two_mode_cov) {
  require_two_mode(two_mode_cov);
  if (!check_physicality(two_mode_cov).physical) throw InvalidState("verdict: covariance is not physical");
  EntanglementVerdict v;
  v.lambda_minus = lambda_minus(two_mode_cov);
  v.log_negativity = log_negativity(v.lambda_minus);
  v.entangled = v.lambda_minus < kVacuumVariance - kPhysicalityTolerance;
  return v;
}

EntanglementVerdict verdict(const GaussianState& two_mode) { return verdict(two_mode.cov()); }

Separability classify(double lambda, double se) {
  if (!std::isfinite(se)) return Separability::kInconclusive;
  if (lambda + 3.0 * se < kVacuumVariance - kPhysicalityTolerance) return Separability::kEntangled;
  if (lambda - 3.0 * se >= kVacuumVariance - kPhysicalityTolerance) return Separability::kSeparable;
  return Separability::kInconclusive;
}

const char* to_string(Separability s) {
  switch (s) {
    case Separability::kEntangled: return "entangled";
    case Separability::kSeparable: return "separable";
    case Separability::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace cvgate
