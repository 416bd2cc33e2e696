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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cvgate/gates.hpp"
#include "cvgate/gaussian_state.hpp"
#include "cvgate/symplectic.hpp"
#include "test_util.hpp"

namespace cvgate {
namespace {

using testing::max_abs;
constexpr double kSqrt2 = std::numbers::sqrt2;

GaussianState with_means(Eigen::VectorXd mean) {
  const auto n = static_cast<std::size_t>(mean.size()) / 2;
  return GaussianState(std::move(mean), vacuum(n).cov());
}

void expect_symplectic_unit_det(const SymplecticOp& op) {
  const Eigen::MatrixXd& m = op.matrix();
  const Eigen::MatrixXd o = testing::omega(op.n_modes());
  EXPECT_LT(max_abs(m * o * m.transpose() - o), 1e-10);
  EXPECT_NEAR(m.determinant(), 1.0, 1e-10);
}

TEST(Gates, AllFactoriesAreSymplectic) {
  expect_symplectic_unit_det(gates::squeezer(0, 1.7));
  expect_symplectic_unit_det(gates::beamsplitter(0, 1, 0.3));
  expect_symplectic_unit_det(gates::beamsplitter(0, 1, 0.5, gates::BeamsplitterSign::kMirrored));
  expect_symplectic_unit_det(gates::controlled_z(0, 1, -2.5));
  expect_symplectic_unit_det(gates::quadratic_phase(0, 3.0));
  expect_symplectic_unit_det(gates::tz_gate(0, 1, 1.4));
  expect_symplectic_unit_det(gates::rotation(0, 0.77));
  Eigen::MatrixXcd u(2, 2);
  u << 1, std::complex<double>(0, 1), std::complex<double>(0, 1), 1;
  expect_symplectic_unit_det(gates::passive_network({0, 1}, u / kSqrt2));
}

TEST(Gates, SqueezerScalesQuadratures) {
  const GaussianState s = apply_symplectic(vacuum(1), gates::squeezer(0, kSqrt2));
  EXPECT_NEAR(s.cov()(0, 0), 0.5, 1e-15);    // +3.0 dB
  EXPECT_NEAR(s.cov()(1, 1), 0.125, 1e-15);  // -3.0 dB
  EXPECT_EQ(gates::squeezer(0, 1.0).matrix(), Eigen::Matrix2d::Identity());
  const double r = 0.6;
  EXPECT_NEAR(apply_symplectic(vacuum(1), gates::squeezer(0, std::exp(r))).cov()(1, 1), std::exp(-2 * r) / 4, 1e-15);
  EXPECT_THROW(gates::squeezer(0, 0.0), std::invalid_argument);
  EXPECT_THROW(gates::squeezer(0, -1.0), std::invalid_argument);
}

TEST(Gates, BeamsplitterSignConvention) {
  // Measured arm x_a' = (x_a - x_b)/sqrt2, kept arm x_b' = (x_a + x_b)/sqrt2.
  const GaussianState out = apply_symplectic(with_means(Eigen::Vector4d(1, 0, 0, 0)), gates::beamsplitter(0, 1, 0.5));
  EXPECT_NEAR(out.mean()(0), 1 / kSqrt2, 1e-15);
  EXPECT_NEAR(out.mean()(2), 1 / kSqrt2, 1e-15);
  const GaussianState out2 = apply_symplectic(with_means(Eigen::Vector4d(0, 0, 1, 0)), gates::beamsplitter(0, 1, 0.5));
  EXPECT_NEAR(out2.mean()(0), -1 / kSqrt2, 1e-15);
  EXPECT_NEAR(out2.mean()(2), 1 / kSqrt2, 1e-15);
  const GaussianState p = apply_symplectic(with_means(Eigen::Vector4d(0, 0, 0, 1)), gates::beamsplitter(0, 1, 0.5));
  EXPECT_NEAR(p.mean()(1), -1 / kSqrt2, 1e-15);
  EXPECT_NEAR(p.mean()(3), 1 / kSqrt2, 1e-15);
  EXPECT_EQ(gates::beamsplitter(0, 1, 0.0).matrix(), Eigen::Matrix4d::Identity());
  EXPECT_THROW(gates::beamsplitter(1, 1, 0.5), std::invalid_argument);
  EXPECT_THROW(gates::beamsplitter(0, 1, 1.5), std::invalid_argument);
}

TEST(Gates, BeamsplitterUndoneBySwappedPorts) {
  // (a, b) -> ((a-b)/sqrt2, (a+b)/sqrt2); feeding the outputs back with the
  // ports exchanged and one arm sign-flipped recovers the inputs.
  const Eigen::Vector4d in(0.3, -1.2, 2.0, 0.5);
  const GaussianState mid = apply_symplectic(with_means(in), gates::beamsplitter(0, 1, 0.5));
  const GaussianState back = apply_symplectic(mid, gates::beamsplitter(1, 0, 0.5));
  // Second pass gives ((a+b)/sqrt2 - (a-b)/sqrt2)/sqrt2 = b on mode 1 and a on mode 0.
  EXPECT_NEAR(back.mean()(2), in(2), 1e-15);
  EXPECT_NEAR(back.mean()(0), in(0), 1e-15);
}

TEST(Gates, ControlledZAction) {
  const GaussianState out = apply_symplectic(with_means(Eigen::Vector4d(1, 0, 2, 0)), gates::controlled_z(0, 1, 1.0));
  EXPECT_LT(max_abs(out.mean() - Eigen::Vector4d(1, 2, 2, 1)), 1e-15);
  EXPECT_EQ(gates::controlled_z(0, 1, 0.0).matrix(), Eigen::Matrix4d::Identity());
  EXPECT_THROW(gates::controlled_z(0, 0, 1.0), std::invalid_argument);
  // Exchange symmetry.
  EXPECT_EQ(gates::controlled_z(0, 1, 0.8).embedded(2), gates::controlled_z(1, 0, 0.8).embedded(2));
}

TEST(Gates, ControlledZOnSqueezedVacuaHasSqueezedNullifiers) {
  const double r = 0.9;
  const GaussianState in = tensor(p_squeezed_vacuum(r), p_squeezed_vacuum(r));
  const GaussianState out = apply_symplectic(in, gates::controlled_z(0, 1, 1.0));
  const Eigen::Vector4d n1(-0.0, 1.0, -1.0, 0.0);  // p1 - x2
  EXPECT_NEAR(n1.dot(out.cov() * n1), std::exp(-2 * r) / 4, 1e-14);
}

TEST(Gates, QuadraticPhase) {
  const GaussianState s = apply_symplectic(vacuum(1), gates::quadratic_phase(0, 1.0));
  Eigen::Matrix2d want;
  want << 0.25, 0.25, 0.25, 0.5;
  EXPECT_LT(max_abs(s.cov() - want), 1e-15);
  const SymplecticOp both = compose(gates::quadratic_phase(0, 0.4), gates::quadratic_phase(0, 1.1));
  EXPECT_LT(max_abs(both.matrix() - gates::quadratic_phase(0, 1.5).matrix()), 1e-15);
}

TEST(Gates, TzEqualsQuadraticPhasesTimesControlledZ) {
  for (double t : {0.0, 0.2, 1.0, -1.7}) {
    const SymplecticOp parts =
        compose(gates::quadratic_phase(0, t), compose(gates::quadratic_phase(1, t), gates::controlled_z(0, 1, t)));
    EXPECT_LT(max_abs(parts.embedded(2) - gates::tz_gate(0, 1, t).embedded(2)), 1e-12);
  }
  const GaussianState out = apply_symplectic(with_means(Eigen::Vector4d(1, 0, 1, 0)), gates::tz_gate(0, 1, 1.0));
  EXPECT_LT(max_abs(out.mean() - Eigen::Vector4d(1, 2, 1, 2)), 1e-15);
}

TEST(Gates, RotationMapsMeasuredObservableToX) {
  EXPECT_EQ(gates::rotation(0, 0.0).matrix(), Eigen::Matrix2d::Identity());
  const GaussianState f = apply_symplectic(with_means(Eigen::Vector2d(1.0, 2.0)), gates::rotation(0, M_PI / 2));
  EXPECT_NEAR(f.mean()(0), 2.0, 1e-15);   // x -> p
  EXPECT_NEAR(f.mean()(1), -1.0, 1e-15);  // p -> -x
  EXPECT_LT(max_abs(apply_symplectic(vacuum(1), gates::rotation(0, 0.3)).cov() - vacuum(1).cov()), 1e-16);
  // x cos(th) - p sin(th) lands on x after rotation(-th).
  const double th = 0.6;
  const GaussianState g = apply_symplectic(with_means(Eigen::Vector2d(1.0, 2.0)), gates::rotation(0, -th));
  EXPECT_NEAR(g.mean()(0), std::cos(th) - 2.0 * std::sin(th), 1e-15);
}

TEST(Gates, PassiveNetworkRequiresUnitary) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2) * 1.1;
  EXPECT_THROW(gates::passive_network({0, 1}, u), std::invalid_argument);
}

TEST(Gates, LossChannel) {
  const double r = 0.8, eta = 0.95;
  const GaussianState sq = p_squeezed_vacuum(r);
  EXPECT_EQ(gates::loss_channel(sq, 0, 1.0).cov(), sq.cov());
  const GaussianState lossy = gates::loss_channel(sq, 0, eta);
  EXPECT_NEAR(lossy.cov()(1, 1), eta * std::exp(-2 * r) / 4 + (1 - eta) / 4, 1e-15);
  const GaussianState gone = gates::loss_channel(sq, 0, 1e-9);
  EXPECT_LT(max_abs(gone.cov() - vacuum(1).cov()), 1e-8);
  // Cross blocks scale with sqrt(eta); means too.
  const GaussianState epr = displace(two_mode_squeezed_vacuum(0.5), {0, 1.0, 0.0});
  const GaussianState l = gates::loss_channel(epr, 0, 0.64);
  EXPECT_NEAR(l.cov()(0, 2), 0.8 * epr.cov()(0, 2), 1e-15);
  EXPECT_NEAR(l.mean()(0), 0.8, 1e-15);
  EXPECT_TRUE(check_physicality(l).physical);
  EXPECT_THROW(gates::loss_channel(sq, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(gates::loss_channel(sq, 0, 1.2), std::invalid_argument);
}

}  // namespace
}  // namespace cvgate
