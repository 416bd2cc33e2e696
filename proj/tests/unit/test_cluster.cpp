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

#include "cvgate/cluster.hpp"
#include "cvgate/conventions.hpp"
#include "cvgate/entanglement.hpp"
#include "cvgate/errors.hpp"
#include "cvgate/rng.hpp"
#include "test_util.hpp"

namespace cvgate {
namespace {

using testing::max_abs;

const double kLabR = squeezing_r_from_db(4.5);  // e^{-2r} = 10^{-0.45}
const double kLabE2r = std::pow(10.0, -0.45);

// Nullifier covariance straight from the stated decomposition:
// d1 = sqrt2 q1, d2 = sqrt3 q2, d3 = q1/sqrt2 + sqrt(3/2) q3, Var q = e/4.
Eigen::Matrix3d decomposition_oracle(double e2r) {
  const double q = e2r / 4;
  Eigen::Matrix3d c;
  c << 2 * q, 0, q,  //
      0, 3 * q, 0,   //
      q, 0, 2 * q;
  return c;
}

TEST(GraphSpec, Construction) {
  const GraphSpec g = GraphSpec::line(4, 0.5);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.weight(1, 2), 0.5);
  EXPECT_EQ(g.weight(0, 2), 0.0);
  EXPECT_EQ(g.neighbors(1), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(g.edges().size(), 3u);
  EXPECT_EQ(GraphSpec::parse("line:3").adjacency(), GraphSpec::line(3).adjacency());
  EXPECT_THROW(GraphSpec::parse("ring:3"), std::invalid_argument);
  EXPECT_THROW(GraphSpec::parse("line:x"), std::invalid_argument);
  Eigen::Matrix2d asym;
  asym << 0, 1, 2, 0;
  EXPECT_THROW(GraphSpec{Eigen::MatrixXd(asym)}, std::invalid_argument);
  Eigen::Matrix2d loop;
  loop << 1, 0, 0, 0;
  EXPECT_THROW(GraphSpec{Eigen::MatrixXd(loop)}, std::invalid_argument);
}

TEST(Cluster, NullifierMatrixRows) {
  const Eigen::MatrixXd n = nullifier_matrix(GraphSpec::line(3));
  Eigen::MatrixXd want(3, 6);
  want << 0, 1, -1, 0, 0, 0,  //
      -1, 0, 0, 1, -1, 0,     //
      0, 0, -1, 0, 0, 1;
  EXPECT_EQ(n, want);
}

TEST(Cluster, LinearCluster3MatchesDecomposition) {
  for (double r : {0.0, 0.3, kLabR, 1.5, 3.0}) {
    const GaussianState cl = make_linear_cluster3(r);
    const NullifierReport rep = nullifier_report(cl, GraphSpec::line(3));
    EXPECT_LT(max_abs(rep.covariance - decomposition_oracle(std::exp(-2 * r))), 1e-10) << r;
    EXPECT_LT(max_abs(rep.means), 1e-15);
    EXPECT_LT(max_abs(symplectic_eigenvalues(cl.cov()).array() - 0.25), 1e-9) << "pure";
    EXPECT_TRUE(check_physicality(cl).physical);
  }
  EXPECT_NEAR(nullifier_report(make_linear_cluster3(kLabR), GraphSpec::line(3)).variances()(1), 3 * kLabE2r / 4,
              1e-12);
  EXPECT_NEAR(nullifier_report(make_linear_cluster3(0.0), GraphSpec::line(3)).variances()(0), 0.5, 1e-12);
  EXPECT_THROW(make_linear_cluster3(-0.1), std::invalid_argument);
}

TEST(Cluster, NullifierVariancesShrinkWithSqueezing) {
  double prev = 1e9;
  for (double r = 0.0; r <= 2.0; r += 0.25) {
    const double v = nullifier_report(make_linear_cluster3(r), GraphSpec::line(3)).variances().maxCoeff();
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Cluster, ResourceNoiseModel) {
  const ResourceNoiseModel m = ResourceNoiseModel::linear_cluster3(kLabR);
  EXPECT_LT(max_abs(m.nullifier_covariance() - decomposition_oracle(kLabE2r)), 1e-15);
  // D D^T = I + G^2 for the line.
  const Eigen::Matrix3d g = GraphSpec::line(3).adjacency();
  EXPECT_LT(max_abs(m.decomposition * m.decomposition.transpose() - (Eigen::Matrix3d::Identity() + g * g)), 1e-14);
}

TEST(Cluster, AsymmetricSqueezing) {
  const Eigen::Vector3d r(0.4, 0.7, 1.0);
  const NullifierReport rep = nullifier_report(make_linear_cluster3(r), GraphSpec::line(3));
  EXPECT_LT(max_abs(rep.covariance - ResourceNoiseModel::linear_cluster3(r).nullifier_covariance()), 1e-10);
  EXPECT_NEAR(rep.covariance(1, 1), 3 * std::exp(-2 * 0.7) / 4, 1e-12);
}

TEST(Cluster, PassivePreparationResidualFreedom) {
  // Equal-squeezing vacua are invariant under a real orthogonal mix, so D O
  // prepares the very same state as D.
  const GraphSpec line = GraphSpec::line(3);
  const Eigen::MatrixXd d = ResourceNoiseModel::linear_cluster3(kLabR).decomposition;
  const double a = 0.7;
  Eigen::Matrix3d o;
  o << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  const Eigen::Vector3d r = Eigen::Vector3d::Constant(kLabR);
  const GaussianState c1 = make_passive_cluster(line, d, r);
  const GaussianState c2 = make_passive_cluster(line, d * o, r);
  EXPECT_LT(max_abs(c1.cov() - c2.cov()), 1e-12);
  EXPECT_LT(max_abs(nullifier_report(c1, line).covariance - nullifier_report(c2, line).covariance), 1e-12);
  EXPECT_THROW(make_passive_cluster(line, Eigen::Matrix3d::Identity(), r), std::invalid_argument);
}

TEST(Cluster, CanonicalCluster) {
  const double r = 0.8;
  const GaussianState two = make_cluster_canonical(GraphSpec::line(2), r);
  const Eigen::Vector4d n(0, 1, -1, 0);
  EXPECT_NEAR(n.dot(two.cov() * n), std::exp(-2 * r) / 4, 1e-14);
  const GaussianState none = make_cluster_canonical(GraphSpec(2), r);
  EXPECT_LT(max_abs(none.cov() - tensor(p_squeezed_vacuum(r), p_squeezed_vacuum(r)).cov()), 1e-15);
  const NullifierReport rep = nullifier_report(make_cluster_canonical(GraphSpec::line(3), 0.0), GraphSpec::line(3));
  EXPECT_LT(max_abs(rep.covariance - 0.25 * Eigen::Matrix3d::Identity()), 1e-14);
}

TEST(Shaping, EraseCanonicalLineLeavesProduct) {
  const GaussianState cl = make_cluster_canonical(GraphSpec::line(3), 0.9);
  const GaussianState out = erase_node(cl, GraphSpec::line(3), 1);
  EXPECT_EQ(out.n_modes(), 2u);
  EXPECT_LT(max_abs(out.cov().block(0, 2, 2, 2)), 1e-9);
}

TEST(Shaping, ErasePassiveClusterKeepsDeltaCorrelation) {
  // Deferred measurement: the output quadratures are x1, p1 - x2, x3, p3 - x2
  // of the cluster. delta_1 and delta_3 share e^{-r} p_1^(0), so the end
  // modes stay entangled.
  const GaussianState cl = make_linear_cluster3(kLabR);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(4, 6);
  l(0, 0) = 1;
  l(1, 1) = 1;
  l(1, 2) = -1;
  l(2, 4) = 1;
  l(3, 5) = 1;
  l(3, 2) = -1;
  const GaussianState out = erase_node(cl, GraphSpec::line(3), 1);
  EXPECT_LT(max_abs(out.cov() - l * cl.cov() * l.transpose()), 1e-12);
  EXPECT_NEAR(out.cov()(1, 3), kLabE2r / 4, 1e-12);
  EXPECT_TRUE(verdict(out).entangled);
  // The canonical cluster has independent nullifiers and erases to a product.
  const GaussianState flat = erase_node(make_cluster_canonical(GraphSpec::line(3), kLabR), GraphSpec::line(3), 1);
  EXPECT_LT(max_abs(flat.cov().block(0, 2, 2, 2)), 1e-12);
}

TEST(Shaping, EraseEqualsTuningAtZeroAndIgnoresIsolatedModes) {
  const GraphSpec line = GraphSpec::line(3);
  const GaussianState cl = make_linear_cluster3(0.6);
  EXPECT_LT(max_abs(erase_node(cl, line, 1).cov() - tune_gain(cl, line, 1, 0.0).cov()), 1e-15);
  // Node without bonds: erasing just removes it.
  const GaussianState prod = tensor(tensor(p_squeezed_vacuum(0.2), vacuum(1)), p_squeezed_vacuum(0.4));
  const GaussianState out = erase_node(prod, GraphSpec(3), 1);
  EXPECT_LT(max_abs(out.cov() - tensor(p_squeezed_vacuum(0.2), p_squeezed_vacuum(0.4)).cov()), 1e-15);
}

TEST(Shaping, ShortenedWireIsEntangledOnlyWithSqueezing) {
  const GraphSpec line = GraphSpec::line(3);
  const GaussianState sq = shorten_wire(make_linear_cluster3(kLabR), line, 1, 0);
  EXPECT_EQ(sq.n_modes(), 2u);
  EXPECT_LT(lambda_minus(sq.cov()), 0.25);
  const GaussianState flat = shorten_wire(make_linear_cluster3(0.0), line, 1, 0);
  EXPECT_GE(lambda_minus(flat.cov()), 0.25 - 1e-9);
  EXPECT_TRUE(check_physicality(sq).physical);
}

TEST(Shaping, GainTunedNullifierIdentity) {
  const GraphSpec line = GraphSpec::line(3);
  for (double e2r : {1.0, kLabE2r, 0.05}) {
    const GaussianState cl = make_linear_cluster3(-0.5 * std::log(e2r));
    const Eigen::Matrix3d d = decomposition_oracle(e2r);
    for (double deg : {0.0, 11.3, 26.6, 35.3, 45.0, 54.7, 63.4}) {
      for (double sign : {1.0, -1.0}) {
        const double th = sign * degrees_to_radians(deg), t = std::tan(th);
        const Eigen::Matrix2d nc = tz_nullifier_covariance(tune_gain(cl, line, 1, th), t);
        // Var(d1 + t d2), Var(d3 + t d2), Cov of the two.
        const Eigen::Vector3d a(1, t, 0), b(0, t, 1);
        EXPECT_NEAR(nc(0, 0), a.dot(d * a), 1e-9);
        EXPECT_NEAR(nc(1, 1), b.dot(d * b), 1e-9);
        EXPECT_NEAR(nc(0, 1), a.dot(d * b), 1e-9);
      }
    }
  }
  // Worked number: 45 deg at -4.5 dB gives e/2 + 3e/4.
  const Eigen::Matrix2d nc = tz_nullifier_covariance(tune_gain(make_linear_cluster3(kLabR), line, 1, M_PI / 4), 1.0);
  EXPECT_NEAR(nc(0, 0), 1.25 * kLabE2r, 1e-12);
  EXPECT_THROW(tune_gain(make_linear_cluster3(kLabR), line, 1, M_PI / 2), SingularRescale);
  EXPECT_THROW(gain_tuning_rule(line, 1, -M_PI / 2), SingularRescale);
}

TEST(Shaping, SampledOverloadsRecordOutcome) {
  const GraphSpec line = GraphSpec::line(3);
  RngStream a(5), b(5);
  const ShapedState s1 = tune_gain(make_linear_cluster3(0.4), line, 1, 0.3, a);
  const ShapedState s2 = tune_gain(make_linear_cluster3(0.4), line, 1, 0.3, b);
  ASSERT_EQ(s1.records.size(), 1u);
  EXPECT_EQ(s1.records[0].detector_id, kCenterDetector);
  EXPECT_EQ(s1.records[0].outcome, s2.records[0].outcome);
  // A single trajectory carries the conditional covariance, which never
  // exceeds the outcome-averaged one.
  const GaussianState det = tune_gain(make_linear_cluster3(0.4), line, 1, 0.3);
  EXPECT_TRUE(check_physicality(s1.state).physical);
  EXPECT_LE(s1.state.cov().trace(), det.cov().trace() + 1e-12);
  RngStream c(6);
  EXPECT_EQ(erase_node(make_linear_cluster3(0.4), line, 1, c).state.n_modes(), 2u);
  EXPECT_EQ(shorten_wire(make_linear_cluster3(0.4), line, 1, 2, c).state.n_modes(), 2u);
}

}  // namespace
}  // namespace cvgate
