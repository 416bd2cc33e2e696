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

#include "cvgate/conventions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvgate {

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(x_index(k), p_index(k)) = -1.0;
    omega(p_index(k), x_index(k)) = 1.0;
  }
  return omega;
}

double variance_to_db(double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("variance_to_db: variance must be positive");
  }
  return 10.0 * std::log10(variance / kVacuumVariance);
}

double db_to_variance(double db) {
  return kVacuumVariance * std::pow(10.0, db / 10.0);
}

double squeezing_r_from_db(double db) {
  if (!std::isfinite(db)) {
    throw std::invalid_argument("squeezing level must be finite");
  }
  return std::abs(db) * std::numbers::ln10 / 20.0;
}

double squeezing_db_from_r(double r) {
  return 20.0 * r / std::numbers::ln10;
}

double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace cvgate
