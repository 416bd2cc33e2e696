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

#include <Eigen/Dense>

// Phase-space conventions used throughout the library.
//
// Quadratures are ordered (x_1, p_1, x_2, p_2, ...), with [x_j, p_k] = i/2
// delta_jk (hbar = 1/2). The vacuum quadrature variance, and hence the
// shot-noise level, is 1/4.

namespace cvgate {

inline constexpr double kVacuumVariance = 0.25;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-9;

constexpr std::size_t x_index(std::size_t mode) { return 2 * mode; }
constexpr std::size_t p_index(std::size_t mode) { return 2 * mode + 1; }

/// Direct sum of [[0, -1], [1, 0]] over n modes.
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// 10 log10(v / 0.25): variance in dB relative to the shot-noise level.
double variance_to_db(double variance);
double db_to_variance(double db);

/// Squeezing level in dB to the squeezing parameter r, via
/// e^{-2r} = 10^{-|dB|/10}. The sign of `db` is ignored, so "-4.5 dB" and
/// "4.5 dB" describe the same resource.
double squeezing_r_from_db(double db);
double squeezing_db_from_r(double r);

double degrees_to_radians(double deg);
double radians_to_degrees(double rad);

}  // namespace cvgate
