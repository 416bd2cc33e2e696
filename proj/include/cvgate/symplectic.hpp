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
#include <vector>

#include <Eigen/Dense>

#include "cvgate/gaussian_state.hpp"

namespace cvgate {

/// Linear phase-space map M acting on a subset of modes, with M Omega M^T =
/// Omega (checked on construction to kSymplecticTolerance).
///
/// `matrix` is 2k x 2k over the listed modes in the listed order. Applying
/// the op to a state maps mean -> M mean and V -> M V M^T on those modes.
class SymplecticOp {
 public:
  SymplecticOp(std::vector<std::size_t> modes, Eigen::MatrixXd matrix);

  static SymplecticOp identity(std::vector<std::size_t> modes);

  const std::vector<std::size_t>& modes() const { return modes_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::size_t n_modes() const { return modes_.size(); }

  /// Full 2N x 2N matrix on an N-mode register (identity elsewhere).
  Eigen::MatrixXd embedded(std::size_t total_modes) const;

 private:
  std::vector<std::size_t> modes_;
  Eigen::MatrixXd matrix_;
};

/// max |M Omega M^T - Omega|.
double symplecticity_error(const Eigen::MatrixXd& m);

/// `later` after `earlier`, acting on the sorted union of their modes.
SymplecticOp compose(const SymplecticOp& later, const SymplecticOp& earlier);

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op);

}  // namespace cvgate
