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

#include "cvgate/symplectic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace cvgate {

SymplecticOp::SymplecticOp(std::vector<std::size_t> modes, Eigen::MatrixXd matrix)
    : modes_(std::move(modes)), matrix_(std::move(matrix)) {
  if (modes_.empty()) throw std::invalid_argument("SymplecticOp: empty mode list");
  if (std::set<std::size_t>(modes_.begin(), modes_.end()).size() != modes_.size()) {
    throw std::invalid_argument("SymplecticOp: repeated mode index");
  }
  const auto dim = static_cast<Eigen::Index>(2 * modes_.size());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("SymplecticOp: matrix must be 2k x 2k for k modes");
  }
  if (!matrix_.allFinite()) throw std::invalid_argument("SymplecticOp: non-finite matrix");
  const double err = symplecticity_error(matrix_);
  if (err > kSymplecticTolerance) {
    throw std::invalid_argument("SymplecticOp: matrix is not symplectic (error " + std::to_string(err) + ")");
  }
}

SymplecticOp SymplecticOp::identity(std::vector<std::size_t> modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes.size());
  return {std::move(modes), Eigen::MatrixXd::Identity(dim, dim)};
}

Eigen::MatrixXd SymplecticOp::embedded(std::size_t total_modes) const {
  const auto dim = static_cast<Eigen::Index>(2 * total_modes);
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(dim, dim);
  std::vector<Eigen::Index> idx;
  for (std::size_t m : modes_) {
    if (m >= total_modes) throw std::invalid_argument("SymplecticOp: mode index exceeds register size");
    idx.push_back(static_cast<Eigen::Index>(x_index(m)));
    idx.push_back(static_cast<Eigen::Index>(p_index(m)));
  }
  full(idx, idx) = matrix_;
  return full;
}

double symplecticity_error(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("symplecticity_error: need a 2n x 2n matrix");
  }
  const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(m.rows()) / 2);
  return (m * omega * m.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticOp compose(const SymplecticOp& later, const SymplecticOp& earlier) {
  std::set<std::size_t> all(later.modes().begin(), later.modes().end());
  all.insert(earlier.modes().begin(), earlier.modes().end());
  std::vector<std::size_t> modes(all.begin(), all.end());

  // Relabel both ops onto the local register 0..k-1 of the union.
  auto local = [&](const SymplecticOp& op) {
    std::vector<std::size_t> relabeled;
    for (std::size_t m : op.modes()) {
      relabeled.push_back(static_cast<std::size_t>(std::find(modes.begin(), modes.end(), m) - modes.begin()));
    }
    return SymplecticOp(std::move(relabeled), op.matrix()).embedded(modes.size());
  };
  return {modes, local(later) * local(earlier)};
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op) {
  std::vector<Eigen::Index> idx;
  for (std::size_t m : op.modes()) {
    if (m >= state.n_modes()) {
      throw std::invalid_argument("apply_symplectic: op acts on mode " + std::to_string(m) +
                                  " but state has " + std::to_string(state.n_modes()) + " modes");
    }
    idx.push_back(static_cast<Eigen::Index>(x_index(m)));
    idx.push_back(static_cast<Eigen::Index>(p_index(m)));
  }
  const Eigen::MatrixXd& m = op.matrix();
  Eigen::VectorXd mean = state.mean();
  mean(idx) = m * state.mean()(idx);

  // Rows then columns: V -> M V M^T restricted to the touched indices.
  Eigen::MatrixXd cov = state.cov();
  cov(idx, Eigen::all) = m * state.cov()(idx, Eigen::all);
  Eigen::MatrixXd rows_done = cov;
  cov(Eigen::all, idx) = rows_done(Eigen::all, idx) * m.transpose();
  return {std::move(mean), std::move(cov)};
}

}  // namespace cvgate
