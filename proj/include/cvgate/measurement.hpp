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
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cvgate/gaussian_state.hpp"
#include "cvgate/rng.hpp"

namespace cvgate {

/// Homodyne detection of the rotated quadrature x cos(angle) - p sin(angle)
/// on one mode. angle = 0 measures x, angle = 90 deg measures -p.
struct HomodyneSpec {
  std::size_t mode = 0;
  double angle = 0.0;  // radians
};

/// A detector is a homodyne spec with an identifier that feed-forward rules
/// refer to.
struct Detector {
  int id = 0;
  HomodyneSpec spec;
};

struct MeasurementRecord {
  int detector_id = 0;
  HomodyneSpec spec;
  double outcome = 0.0;
};

enum class Quadrature { kX, kP };

/// Displacement of one target quadrature by sum_d gain_d * s_d.
/// Quadrature kX is the X (position) displacement, kP the Z (momentum) one.
struct FeedforwardTerm {
  std::size_t target = 0;
  Quadrature quadrature = Quadrature::kP;
  std::vector<std::pair<int, double>> gains;  // (detector id, coefficient)
};

/// Linear feed-forward: every term is linear in the outcomes, so applying a
/// rule with all outcomes zero leaves the state unchanged. Target indices
/// refer to the state after the measured modes have been removed.
struct FeedforwardRule {
  std::vector<FeedforwardTerm> terms;
};

struct HomodyneMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Variance below which a homodyne observable counts as degenerate.
inline constexpr double kDegenerateVariance = 1e-12;

HomodyneMoments homodyne_statistics(const GaussianState& state, const HomodyneSpec& spec);

/// Draw one outcome from Normal(m_s, v_s).
MeasurementRecord homodyne_sample(const GaussianState& state, const HomodyneSpec& spec, RngStream& rng,
                                  int detector_id = 0);

/// Gaussian conditioning on a recorded outcome; the measured mode is removed.
/// mean' = m_R + c (s - m_s) / v_s, cov' = V_R - c c^T / v_s, with c the
/// covariance between the remaining quadratures and the observable.
GaussianState homodyne_condition(const GaussianState& state, const MeasurementRecord& record);

/// Displace the targets by the rule evaluated on `records`.
GaussianState apply_feedforward(const GaussianState& state, const FeedforwardRule& rule,
                                std::span<const MeasurementRecord> records);

/// Outcome-averaged state after measuring all `detectors` (distinct modes)
/// and applying `rule`. Conditions jointly at outcome = mean, then adds back
/// the spread of the post-feed-forward conditional mean over the outcome
/// distribution (law of total covariance). Exact for Gaussian states.
GaussianState ensemble_feedforward(const GaussianState& state, std::span<const Detector> detectors,
                                   const FeedforwardRule& rule);

/// Same ensemble state through the deferred-measurement route: every
/// feed-forward displacement is replaced by the controlled gate
/// exp(2i s_c x_t) or exp(-2i s_c p_t) with the measured observable s_c as
/// control, and the measured modes are traced out afterwards.
GaussianState deferred_feedforward(const GaussianState& state, std::span<const Detector> detectors,
                                   const FeedforwardRule& rule);

/// Trajectory log, one line per record:
/// trajectory_id,detector_id,theta_deg,outcome
void write_trajectory_csv_header(std::ostream& out);
void write_trajectory_csv(std::ostream& out, std::size_t trajectory_id,
                          std::span<const MeasurementRecord> records);

}  // namespace cvgate
