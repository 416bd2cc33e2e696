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

#include "cvgate/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvgate/errors.hpp"

namespace cvgate {

namespace {

void require_symmetric(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
    throw InvalidState("covariance must be square with even dimension, got " +
                       std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()));
  }
  if (!cov.allFinite()) {
    throw InvalidState("covariance has non-finite entries");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw InvalidState("covariance is not symmetric (max |V - V^T| = " + std::to_string(asym) + ")");
  }
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0) {
    throw std::invalid_argument("GaussianState needs at least one mode");
  }
  require_symmetric(cov_);
  if (cov_.rows() != mean_.size()) {
    throw std::invalid_argument("mean and covariance dimensions differ");
  }
  if (!mean_.allFinite()) {
    throw InvalidState("mean has non-finite entries");
  }
  // Store the exactly symmetric part so downstream eigen-solvers see a
  // symmetric matrix.
  cov_ = 0.5 * (cov_ + cov_.transpose());
}

Eigen::Matrix2d GaussianState::mode_cov(std::size_t mode) const {
  if (mode >= n_modes()) throw std::invalid_argument("mode index out of range");
  return cov_.block<2, 2>(static_cast<Eigen::Index>(2 * mode), static_cast<Eigen::Index>(2 * mode));
}

GaussianState vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("vacuum: n_modes must be >= 1");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return {Eigen::VectorXd::Zero(dim), kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim)};
}

GaussianState coherent(double mean_x, double mean_p) {
  return displace(vacuum(1), {0, mean_x, mean_p});
}

GaussianState p_squeezed_vacuum(double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("squeezing must be finite");
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = std::exp(2.0 * r) * kVacuumVariance;
  cov(1, 1) = std::exp(-2.0 * r) * kVacuumVariance;
  return {Eigen::VectorXd::Zero(2), cov};
}

GaussianState two_mode_squeezed_vacuum(double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("squeezing must be finite");
  const double c = std::cosh(2.0 * r) * kVacuumVariance;
  const double s = std::sinh(2.0 * r) * kVacuumVariance;
  Eigen::MatrixXd cov(4, 4);
  cov << c, 0, s, 0,
         0, c, 0, -s,
         s, 0, c, 0,
         0, -s, 0, c;
  return {Eigen::VectorXd::Zero(4), cov};
}

GaussianState displace(const GaussianState& state, const Displacement& d) {
  if (d.mode >= state.n_modes()) throw std::invalid_argument("displace: mode index out of range");
  Eigen::VectorXd mean = state.mean();
  mean(static_cast<Eigen::Index>(x_index(d.mode))) += d.dx;
  mean(static_cast<Eigen::Index>(p_index(d.mode))) += d.dp;
  return {std::move(mean), state.cov()};
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const auto na = a.mean().size();
  const auto nb = b.mean().size();
  Eigen::VectorXd mean(na + nb);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return {std::move(mean), std::move(cov)};
}

GaussianState select_modes(const GaussianState& state, std::span<const std::size_t> modes) {
  if (modes.empty()) throw std::invalid_argument("select_modes: empty mode list");
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (std::size_t m : modes) {
    if (m >= state.n_modes()) throw std::invalid_argument("select_modes: mode index out of range");
    idx.push_back(static_cast<Eigen::Index>(x_index(m)));
    idx.push_back(static_cast<Eigen::Index>(p_index(m)));
  }
  return {state.mean()(idx), state.cov()(idx, idx)};
}

GaussianState discard_mode(const GaussianState& state, std::size_t mode) {
  if (mode >= state.n_modes()) throw std::invalid_argument("discard_mode: mode index out of range");
  if (state.n_modes() < 2) throw std::invalid_argument("discard_mode: cannot discard the last mode");
  std::vector<std::size_t> keep;
  for (std::size_t m = 0; m < state.n_modes(); ++m) {
    if (m != mode) keep.push_back(m);
  }
  return select_modes(state, keep);
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0) {
    throw std::invalid_argument("symplectic_eigenvalues: need a non-empty 2n x 2n matrix");
  }
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("symplectic_eigenvalues: matrix is not positive definite");
  }
  // With L = V^{1/2}, A = L Omega L is antisymmetric and similar to Omega V,
  // so A^T A = -A^2 is symmetric PSD with eigenvalues nu_k^2, each twice.
  const Eigen::MatrixXd root =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const auto n = static_cast<std::size_t>(cov.rows()) / 2;
  const Eigen::MatrixXd a = root * symplectic_form(n) * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(a.transpose() * a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd squares = es2.eigenvalues();  // ascending
  Eigen::VectorXd nu(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(2 * k);
    nu(static_cast<Eigen::Index>(k)) = std::sqrt(std::max(0.0, 0.5 * (squares(i) + squares(i + 1))));
  }
  return nu;
}

PhysicalityReport check_physicality(const Eigen::MatrixXd& cov) {
  require_symmetric(cov);
  PhysicalityReport report;
  try {
    report.min_symplectic_eigenvalue = symplectic_eigenvalues(cov).minCoeff();
  } catch (const std::invalid_argument&) {
    // Not positive definite, hence unphysical. Report the smallest modulus of
    // the spectrum of i*Omega*V for diagnostics.
    const auto n = static_cast<std::size_t>(cov.rows()) / 2;
    Eigen::EigenSolver<Eigen::MatrixXd> es(symplectic_form(n) * cov, false);
    report.min_symplectic_eigenvalue = es.eigenvalues().cwiseAbs().minCoeff();
    report.physical = false;
    return report;
  }
  report.physical = report.min_symplectic_eigenvalue >= kVacuumVariance - kPhysicalityTolerance;
  return report;
}

PhysicalityReport check_physicality(const GaussianState& state) {
  return check_physicality(state.cov());
}

}  // namespace cvgate
