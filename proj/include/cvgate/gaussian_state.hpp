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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvgate/conventions.hpp"

namespace cvgate {

/// Gaussian state of n modes: quadrature means and covariance matrix
/// V = <{xi, xi}>/2 - <xi><xi>^T, both in interleaved (x, p) ordering.
///
/// Instances are immutable. Construction checks dimensions and symmetry of
/// the covariance; physicality is not enforced (see check_physicality).
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  /// 2x2 covariance block of one mode.
  Eigen::Matrix2d mode_cov(std::size_t mode) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Mode-local displacement: x_k += dx, p_k += dp.
struct Displacement {
  std::size_t mode = 0;
  double dx = 0.0;
  double dp = 0.0;
};

GaussianState vacuum(std::size_t n_modes);

/// Single-mode coherent state with the given quadrature means.
GaussianState coherent(double mean_x, double mean_p);

/// Single-mode vacuum squeezed in p: var(x) = e^{2r}/4, var(p) = e^{-2r}/4.
GaussianState p_squeezed_vacuum(double r);

/// Two-mode squeezed vacuum (EPR state) with x-correlation and
/// p-anticorrelation; cov = (1/4)[[c I, s Z], [s Z, c I]], c = cosh 2r,
/// s = sinh 2r, Z = diag(1, -1).
GaussianState two_mode_squeezed_vacuum(double r);

GaussianState displace(const GaussianState& state, const Displacement& d);

/// Product state, modes of `a` first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Partial trace over one mode.
GaussianState discard_mode(const GaussianState& state, std::size_t mode);

/// Reduced state on `modes`, in the order given.
GaussianState select_modes(const GaussianState& state, std::span<const std::size_t> modes);

/// Symplectic eigenvalues of a symmetric positive-definite 2n x 2n matrix,
/// i.e. the moduli of the eigenvalues of i*Omega*V, one per +/- pair, in
/// ascending order. Throws std::invalid_argument for non-PD input.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

struct PhysicalityReport {
  bool physical = false;
  /// Smallest symplectic eigenvalue; for non-positive-definite input this is
  /// the smallest modulus among the eigenvalues of i*Omega*V.
  double min_symplectic_eigenvalue = 0.0;
};

/// Tests V + (i/4) Omega >= 0 through the symplectic spectrum:
/// physical iff min eigenvalue >= 1/4 - kPhysicalityTolerance.
PhysicalityReport check_physicality(const GaussianState& state);
/// Same check on a bare covariance matrix; throws InvalidState when the
/// matrix is not square, of even size and symmetric.
PhysicalityReport check_physicality(const Eigen::MatrixXd& cov);

}  // namespace cvgate
