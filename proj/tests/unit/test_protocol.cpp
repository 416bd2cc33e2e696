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
#include <set>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "cvgate/cluster.hpp"
#include "cvgate/conventions.hpp"
#include "cvgate/errors.hpp"
#include "cvgate/gates.hpp"
#include "cvgate/protocol.hpp"
#include "cvgate/symplectic.hpp"
#include "test_util.hpp"

namespace cvgate {
namespace {

using testing::max_abs;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kLabE2r = std::pow(10.0, -0.45);
const double kAngles[] = {0.0, 11.3, 26.6, 35.3, 45.0, 54.7, 63.4};

ProtocolConfig config(double theta_deg, double e2r) {
  return ProtocolConfig::symmetric(degrees_to_radians(theta_deg), -0.5 * std::log(e2r));
}

// Output covariance for vacuum inputs written out quadrature by quadrature:
//   x_mu = sqrt2 x_a,  p_mu = (p_a + t x_a + t x_b + d1 + t d2) / sqrt2,
//   x_nu = sqrt2 x_b,  p_nu = (p_b + t x_a + t x_b + d3 + t d2) / sqrt2,
// with Var d1 = Var d3 = e/2, Var d2 = 3e/4, Cov(d1, d3) = e/4.
Eigen::Matrix4d hand_derived_cov(double t, double e) {
  const double v1 = e / 2, v2 = 3 * e / 4, c13 = e / 4;
  const double var_p = 0.5 * (0.25 * (1 + 2 * t * t) + v1 + t * t * v2);
  const double cov_pp = 0.5 * (0.25 * 2 * t * t + c13 + t * t * v2);
  Eigen::Matrix4d c;
  c << 0.5, t / 4, 0, t / 4,  //
      t / 4, var_p, t / 4, cov_pp,  //
      0, t / 4, 0.5, t / 4,  //
      t / 4, cov_pp, t / 4, var_p;
  return c;
}

TEST(Protocol, DeterministicMatchesHandDerivedMoments) {
  for (double e2r : {1.0, kLabE2r, 0.1, 0.001}) {
    for (double deg : kAngles) {
      const ProtocolResult res = run_protocol(config(deg, e2r));
      const double t = std::tan(degrees_to_radians(deg));
      EXPECT_LT(max_abs(res.output.cov() - hand_derived_cov(t, e2r)), 1e-12) << deg << " " << e2r;
      EXPECT_LT(max_abs(res.output.mean()), 1e-15);
    }
  }
}

TEST(Protocol, WorkedExampleAt45Degrees) {
  const ProtocolResult res = run_protocol(config(45.0, kLabE2r));
  // (1/2)[(1/4)(1 + 2) + e/2 + 3e/4]
  EXPECT_NEAR(res.variances()(1), 0.5 * (0.75 + 1.25 * kLabE2r), 1e-12);
  EXPECT_NEAR(res.entanglement.lambda_minus, 0.19962, 5e-6);
  EXPECT_TRUE(res.entanglement.entangled);
}

TEST(Protocol, ZeroAngleVariances) {
  for (double e2r : {1.0, kLabE2r}) {
    const ProtocolResult res = run_protocol(config(0.0, e2r));
    EXPECT_NEAR(res.variances()(0), 0.5, 1e-12);
    EXPECT_NEAR(res.variances()(1), (1 + 4 * e2r / 2) / 8, 1e-12);
    EXPECT_NEAR(res.variances_db()(0), 10 * std::log10(2.0), 1e-10);
  }
}

TEST(Protocol, PipelineAgreesWithClosedFormAndAnalytic) {
  for (double e2r : {1.0, kLabE2r}) {
    for (double deg : kAngles) {
      const ProtocolConfig c = config(deg, e2r);
      const double t = std::tan(c.theta);
      EXPECT_NEAR(run_protocol(c).entanglement.lambda_minus, lambda_minus_closed_form(t, e2r), 1e-9);
      const PathDiscrepancy d = compare_paths(c);
      EXPECT_TRUE(d.analytic_available);
      EXPECT_LT(d.max_cov_diff, 1e-9);
      EXPECT_LT(d.max_mean_diff, 1e-9);
    }
  }
}

TEST(Protocol, UnequalSqueezingMatchesAnalyticNoise) {
  for (double deg : {0.0, 26.6, 45.0, 63.4}) {
    ProtocolConfig c = config(deg, kLabE2r);
    c.squeezing = Eigen::Vector3d(0.3, 0.9, 0.6);
    const ProtocolResult res = run_protocol(c);
    EXPECT_TRUE(check_physicality(res.output).physical);
    EXPECT_LT(max_abs(res.output.cov() - analytic_output(c).output.cov()), 1e-12) << deg;
  }
}

TEST(Protocol, VerdictsOnTheReferenceGrid) {
  for (double t : reference_interaction_parameters()) {
    EXPECT_EQ(run_protocol(ProtocolConfig::symmetric(std::atan(t), squeezing_r_from_db(4.5))).entanglement.entangled,
              t > 0.3)
        << t;
    EXPECT_FALSE(run_protocol(ProtocolConfig::symmetric(std::atan(t), 0.0)).entanglement.entangled) << t;
  }
}

TEST(Protocol, LambdaNonIncreasingInInteraction) {
  for (double e2r : {1.0, kLabE2r, 0.01}) {
    double prev = 1.0;
    for (double deg : kAngles) {
      const double l = run_protocol(config(deg, e2r)).entanglement.lambda_minus;
      EXPECT_LE(l, prev + 1e-12);
      prev = l;
    }
  }
}

TEST(Protocol, ExchangeSymmetryAndFixedXBroadening) {
  for (double deg : {-45.0, 0.0, 20.0, 63.4, 80.0}) {
    for (double e2r : {1.0, 0.3, 1e-3}) {
      const ProtocolResult res = run_protocol(config(deg, e2r));
      EXPECT_NEAR(res.variances()(0), 0.5, 1e-9);
      EXPECT_NEAR(res.variances()(2), 0.5, 1e-9);
      EXPECT_NEAR(res.variances()(1), res.variances()(3), 1e-9);
    }
  }
}

TEST(Protocol, CoherentInputMeans) {
  const double a = coherent_amplitude_from_power_db(13.8);
  EXPECT_NEAR(a * a + 0.25, 0.25 * std::pow(10.0, 1.38), 1e-12);
  for (double deg : kAngles) {
    ProtocolConfig c = config(deg, kLabE2r);
    c.alpha = {a, 0.0};
    const ProtocolResult res = run_protocol(c);
    const double t = std::tan(c.theta);
    EXPECT_NEAR(res.means()(0), kSqrt2 * a, 1e-12);
    EXPECT_NEAR(res.means()(1), a * t / kSqrt2, 1e-12);
    EXPECT_NEAR(res.means()(2), 0.0, 1e-12);
    EXPECT_NEAR(res.means()(3), a * t / kSqrt2, 1e-12);
    if (deg == 0.0) {
      EXPECT_NEAR(res.powers_db()(0), variance_to_db(2 * a * a + 0.5), 1e-12);
      EXPECT_NEAR(res.powers_db()(0), 16.8, 0.1);
      EXPECT_NEAR(res.powers_db()(2), 10 * std::log10(2.0), 1e-10);  // same as vacuum inputs
      EXPECT_NEAR(res.means()(1), 0.0, 1e-15);
    }
  }
  // beta and p inputs through the block matrix.
  ProtocolConfig c = config(35.3, kLabE2r);
  c.beta = {0.3, -1.1};
  c.alpha = {0.0, 0.7};
  const Eigen::Vector4d in(0.0, 0.7, 0.3, -1.1);
  EXPECT_LT(max_abs(run_protocol(c).means() - io_matrix(std::tan(c.theta)) * in), 1e-12);
}

TEST(Protocol, TeleportedGateIdentity) {
  // Output = (squeezers after T_Z) acting on the inputs, plus resource noise.
  for (double deg : {0.0, 26.6, 54.7}) {
    const ProtocolConfig c = config(deg, kLabE2r);
    const double t = std::tan(c.theta);
    GaussianState in = tensor(coherent(0.4, -0.2), coherent(-1.0, 0.5));
    GaussianState g = apply_symplectic(in, gates::tz_gate(0, 1, t));
    g = apply_symplectic(g, gates::squeezer(0, kSqrt2));
    g = apply_symplectic(g, gates::squeezer(1, kSqrt2));
    ProtocolConfig cc = c;
    cc.alpha = {0.4, -0.2};
    cc.beta = {-1.0, 0.5};
    const ProtocolResult res = run_protocol(cc);
    EXPECT_LT(max_abs(res.output.cov() - (g.cov() + res.excess_noise_cov)), 1e-12);
    EXPECT_LT(max_abs(res.means() - g.mean()), 1e-12);
  }
}

TEST(Protocol, ExcessNoiseCovarianceEntries) {
  const double t = 0.8;
  const Eigen::Matrix4d n = excess_noise_covariance(t, ResourceNoiseModel::linear_cluster3(0.5).nullifier_covariance());
  const double e = std::exp(-1.0);
  EXPECT_NEAR(n(1, 1), 0.5 * (e / 2 + t * t * 3 * e / 4), 1e-15);
  EXPECT_NEAR(n(1, 3), 0.5 * (e / 4 + t * t * 3 * e / 4), 1e-15);
  EXPECT_EQ(n(0, 0), 0.0);
  EXPECT_EQ(n(2, 3), 0.0);
}

TEST(Protocol, AnalyticIdealLimit) {
  ProtocolConfig c = ProtocolConfig::symmetric(0.0, 0.0);
  c.ideal_limit = true;
  const ProtocolResult res = analytic_output(c);
  const Eigen::Vector4d want(0.5, 0.125, 0.5, 0.125);
  EXPECT_LT(max_abs(res.output.cov() - Eigen::MatrixXd(want.asDiagonal())), 1e-15);
  // Infinite squeezing cannot be simulated.
  EXPECT_THROW(run_protocol(c), UnsupportedConfig);
  // Ideal limit matches the closed form with e = 0.
  ProtocolConfig c1 = ProtocolConfig::symmetric(M_PI / 4, 0.0);
  c1.ideal_limit = true;
  EXPECT_NEAR(analytic_output(c1).entanglement.lambda_minus, (kSqrt2 - 1) / 4, 1e-12);
}

TEST(Protocol, ClosedFormValues) {
  EXPECT_NEAR(lambda_minus_closed_form(0.0, 1.0), kSqrt2 / 4, 1e-12);
  EXPECT_NEAR(lambda_minus_closed_form(1.0, 0.0), (kSqrt2 - 1) / 4, 1e-12);
  EXPECT_NEAR(lambda_minus_closed_form(1.0, kLabE2r), 0.19962, 5e-6);
}

TEST(Protocol, InvalidConfigurations) {
  EXPECT_THROW(run_protocol(ProtocolConfig::symmetric(M_PI / 2, 0.5)), SingularRescale);
  EXPECT_THROW(run_protocol(ProtocolConfig::symmetric(-2.0, 0.5)), SingularRescale);
  ProtocolConfig c = ProtocolConfig::symmetric(0.3, 0.5);
  c.mode = EvalMode::kMonteCarlo;
  c.trajectories = 0;
  EXPECT_THROW(run_protocol(c), std::invalid_argument);
  ProtocolConfig l = ProtocolConfig::symmetric(0.3, 0.5);
  l.transmission[2] = 0.0;
  EXPECT_THROW(run_protocol(l), std::invalid_argument);
  l.transmission[2] = 0.9;
  EXPECT_THROW(analytic_output(l), UnsupportedConfig);
  EXPECT_THROW(protocol_feedforward_rule(M_PI / 2), SingularRescale);
}

TEST(Protocol, ResidualPreparationFreedomLeavesOutputUnchanged) {
  const double r = squeezing_r_from_db(4.5);
  const double theta = degrees_to_radians(35.3);
  const Eigen::MatrixXd d = ResourceNoiseModel::linear_cluster3(r).decomposition;
  Eigen::Matrix3d o;
  const double a = 1.1;
  o << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  GaussianState reg = tensor(tensor(vacuum(1), vacuum(1)),
                             make_passive_cluster(GraphSpec::line(3), d * o, Eigen::Vector3d::Constant(r)));
  reg = apply_symplectic(reg, gates::beamsplitter(0, 2, 0.5));
  reg = apply_symplectic(reg, gates::beamsplitter(1, 4, 0.5));
  const auto dets = protocol_detectors(theta);
  const GaussianState out = ensemble_feedforward(reg, dets, protocol_feedforward_rule(theta));
  EXPECT_LT(max_abs(out.cov() - run_protocol(ProtocolConfig::symmetric(theta, r)).output.cov()), 1e-10);
}

TEST(Protocol, MirroredCouplingBreaksTheGate) {
  ProtocolConfig c = config(45.0, kLabE2r);
  c.coupling = gates::BeamsplitterSign::kMirrored;
  EXPECT_GT(std::abs(run_protocol(c).entanglement.lambda_minus - lambda_minus_closed_form(1.0, kLabE2r)), 1e-6);
}

TEST(Protocol, ObserverSeesEveryStage) {
  std::set<std::string> stages;
  ProtocolConfig c = config(26.6, kLabE2r);
  c.observer = [&](std::string_view s, const GaussianState& st) {
    stages.emplace(s);
    EXPECT_TRUE(check_physicality(st).physical) << s;
  };
  run_protocol(c);
  EXPECT_EQ(stages, (std::set<std::string>{"prepared", "coupled", "output"}));
  c.mode = EvalMode::kMonteCarlo;
  c.trajectories = 50;
  stages.clear();
  run_protocol(c);
  EXPECT_TRUE(stages.count("conditioned"));
  EXPECT_TRUE(stages.count("trajectory_output"));
}

TEST(Protocol, LossDegradesEntanglementButStaysPhysical) {
  ProtocolConfig c = config(45.0, kLabE2r);
  const double ideal = run_protocol(c).entanglement.lambda_minus;
  c.transmission = {0.97, 0.95, 0.93, 0.91, 0.93};
  const ProtocolResult lossy = run_protocol(c);
  EXPECT_GT(lossy.entanglement.lambda_minus, ideal);
  EXPECT_TRUE(check_physicality(lossy.output).physical);
  EXPECT_FALSE(compare_paths(c).analytic_available);
}

TEST(Protocol, MonteCarloIsSeedDeterministic) {
  ProtocolConfig c = config(45.0, kLabE2r);
  c.mode = EvalMode::kMonteCarlo;
  c.trajectories = 2000;
  c.keep_trajectories = true;
  const ProtocolResult a = run_protocol(c);
  const ProtocolResult b = run_protocol(c);
  EXPECT_EQ(a.output.cov(), b.output.cov());
  EXPECT_EQ(a.output.mean(), b.output.mean());
  ASSERT_EQ(a.trajectories.size(), 2000u);
  ASSERT_EQ(a.trajectories[0].size(), 3u);
  EXPECT_EQ(a.trajectories[0][0].detector_id, kDetectorS1);
  EXPECT_EQ(a.trajectories[0][1].detector_id, kDetectorS3);
  EXPECT_EQ(a.trajectories[0][2].detector_id, kDetectorS2);
  EXPECT_EQ(a.trajectories[0][2].spec.mode, protocol_mode::kC2);
  c.seed = 2;
  EXPECT_NE(run_protocol(c).output.mean(), a.output.mean());
}

TEST(Protocol, MonteCarloAgreesWithDeterministic) {
  for (double deg : {0.0, 45.0}) {
    ProtocolConfig c = config(deg, kLabE2r);
    c.alpha = {1.5, -0.5};
    c.mode = EvalMode::kMonteCarlo;
    c.trajectories = 20000;
    c.seed = 99;
    const PathDiscrepancy d = compare_paths(c);
    ASSERT_TRUE(d.mc_max_sigma.has_value());
    EXPECT_TRUE(d.mc_within_tolerance) << *d.mc_max_sigma;
    const ProtocolResult mc = run_protocol(c);
    ASSERT_TRUE(mc.monte_carlo.has_value());
    EXPECT_GT(mc.monte_carlo->lambda_se, 0.0);
    EXPECT_NEAR(mc.entanglement.lambda_minus, lambda_minus_closed_form(std::tan(c.theta), kLabE2r),
                6 * mc.monte_carlo->lambda_se);
  }
}

TEST(Protocol, ReferenceParameters) {
  const auto t = reference_interaction_parameters();
  const auto deg = reference_angles_deg();
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(radians_to_degrees(std::atan(t[i])), deg[i], 0.05);
  }
}

}  // namespace
}  // namespace cvgate
