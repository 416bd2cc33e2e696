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

#include "cvgate/gaussian_state.hpp"

namespace cvgate {

/// Momentum reversal p_mode -> -p_mode, the phase-space image of partial
/// transposition.
Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& cov, std::size_t mode);

/// Smallest symplectic eigenvalue of the partially transposed two-mode
/// covariance, from the spectrum of i Omega V~.
double lambda_minus(const Eigen::MatrixXd& two_mode_cov);

/// Same quantity from the local invariants: with V = [[A, C], [C^T, B]] and
/// D~ = det A + det B - 2 det C, lambda^2 = (D~ - sqrt(D~^2 - 4 det V)) / 2.
double lambda_minus_from_invariants(const Eigen::MatrixXd& two_mode_cov);

/// max(0, -ln(4 lambda)), clamped to zero unless lambda is below the
/// boundary by more than kPhysicalityTolerance.
double log_negativity(double lambda_minus);

struct EntanglementVerdict {
  double lambda_minus = 0.0;
  double log_negativity = 0.0;
  bool entangled = false;  // lambda_minus < 1/4 - kPhysicalityTolerance
};

/// PPT verdict for a physical two-mode covariance. Throws InvalidState for
/// an unphysical input and std::invalid_argument if it is not 4x4.
EntanglementVerdict verdict(const Eigen::MatrixXd& two_mode_cov);
EntanglementVerdict verdict(const GaussianState& two_mode);

enum class Separability { kEntangled, kSeparable, kInconclusive };

/// Verdict for an estimate with standard error `se`: inconclusive when 1/4
/// lies within lambda +/- 3 se.
Separability classify(double lambda_minus, double se);

const char* to_string(Separability s);

}  // namespace cvgate
