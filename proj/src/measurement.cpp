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

#include "cvgate/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include "cvgate/errors.hpp"
#include "cvgate/symplectic.hpp"

namespace cvgate {

namespace {

Eigen::VectorXd observable_vector(std::size_t n_modes, const HomodyneSpec& spec) {
  if (spec.mode >= n_modes) throw std::invalid_argument("homodyne: mode index out of range");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n_modes));
  u(static_cast<Eigen::Index>(x_index(spec.mode))) = std::cos(spec.angle);
  u(static_cast<Eigen::Index>(p_index(spec.mode))) = -std::sin(spec.angle);
  return u;
}

// Quadrature indices of the modes not in `measured`, plus those modes.
struct Remaining {
  std::vector<std::size_t> modes;
  std::vector<Eigen::Index> idx;
};

Remaining remaining_after(std::size_t n_modes, const std::set<std::size_t>& measured) {
  Remaining r;
  for (std::size_t m = 0; m < n_modes; ++m) {
    if (measured.contains(m)) continue;
    r.modes.push_back(m);
    r.idx.push_back(static_cast<Eigen::Index>(x_index(m)));
    r.idx.push_back(static_cast<Eigen::Index>(p_index(m)));
  }
  return r;
}

std::set<std::size_t> measured_modes(std::size_t n_modes, std::span<const Detector> detectors) {
  std::set<std::size_t> modes;
  std::set<int> ids;
  for (const Detector& d : detectors) {
    if (d.spec.mode >= n_modes) throw std::invalid_argument("detector mode index out of range");
    if (!modes.insert(d.spec.mode).second) throw std::invalid_argument("two detectors on the same mode");
    if (!ids.insert(d.id).second) throw std::invalid_argument("duplicate detector id");
  }
  if (modes.size() >= n_modes) throw std::invalid_argument("cannot measure every mode");
  return modes;
}

std::size_t detector_column(std::span<const Detector> detectors, int id) {
  for (std::size_t j = 0; j < detectors.size(); ++j) {
    if (detectors[j].id == id) return j;
  }
  throw std::invalid_argument("feed-forward refers to unknown detector " + std::to_string(id));
}

Eigen::Index target_row(const FeedforwardTerm& term, std::size_t n_remaining) {
  if (term.target >= n_remaining) throw std::invalid_argument("feed-forward target out of range");
  return static_cast<Eigen::Index>(term.quadrature == Quadrature::kX ? x_index(term.target)
                                                                     : p_index(term.target));
}

}  // namespace

HomodyneMoments homodyne_statistics(const GaussianState& state, const HomodyneSpec& spec) {
  const Eigen::VectorXd u = observable_vector(state.n_modes(), spec);
  return {u.dot(state.mean()), u.dot(state.cov() * u)};
}

MeasurementRecord homodyne_sample(const GaussianState& state, const HomodyneSpec& spec, RngStream& rng,
                                  int detector_id) {
  const HomodyneMoments m = homodyne_statistics(state, spec);
  if (!(m.variance > kDegenerateVariance)) {
    throw DegenerateMeasurement("homodyne_sample: observable variance " + std::to_string(m.variance));
  }
  return {detector_id, spec, rng.normal(m.mean, std::sqrt(m.variance))};
}

GaussianState homodyne_condition(const GaussianState& state, const MeasurementRecord& record) {
  if (!std::isfinite(record.outcome)) throw std::invalid_argument("homodyne_condition: non-finite outcome");
  if (state.n_modes() < 2) throw std::invalid_argument("homodyne_condition: cannot measure the only mode");
  const Eigen::VectorXd u = observable_vector(state.n_modes(), record.spec);
  const double m_s = u.dot(state.mean());
  const double v_s = u.dot(state.cov() * u);
  if (!(v_s > kDegenerateVariance)) {
    throw DegenerateMeasurement("homodyne_condition: observable variance " + std::to_string(v_s));
  }
  const Remaining rest = remaining_after(state.n_modes(), {record.spec.mode});
  const Eigen::VectorXd c = state.cov()(rest.idx, Eigen::all) * u;
  Eigen::VectorXd mean = state.mean()(rest.idx) + c * ((record.outcome - m_s) / v_s);
  Eigen::MatrixXd cov = state.cov()(rest.idx, rest.idx) - c * c.transpose() / v_s;
  return {std::move(mean), std::move(cov)};
}

GaussianState apply_feedforward(const GaussianState& state, const FeedforwardRule& rule,
                                std::span<const MeasurementRecord> records) {
  Eigen::VectorXd mean = state.mean();
  for (const FeedforwardTerm& term : rule.terms) {
    const Eigen::Index row = target_row(term, state.n_modes());
    double shift = 0.0;
    for (const auto& [id, gain] : term.gains) {
      const auto it = std::find_if(records.begin(), records.end(),
                                   [id = id](const MeasurementRecord& r) { return r.detector_id == id; });
      if (it == records.end()) {
        throw std::invalid_argument("apply_feedforward: no outcome for detector " + std::to_string(id));
      }
      shift += gain * it->outcome;
    }
    mean(row) += shift;
  }
  return {std::move(mean), state.cov()};
}

GaussianState ensemble_feedforward(const GaussianState& state, std::span<const Detector> detectors,
                                   const FeedforwardRule& rule) {
  const std::size_t n = state.n_modes();
  const Remaining rest = remaining_after(n, measured_modes(n, detectors));
  const auto k = static_cast<Eigen::Index>(detectors.size());

  Eigen::MatrixXd u(2 * static_cast<Eigen::Index>(n), k);
  for (Eigen::Index j = 0; j < k; ++j) u.col(j) = observable_vector(n, detectors[static_cast<std::size_t>(j)].spec);

  const Eigen::VectorXd m_s = u.transpose() * state.mean();
  const Eigen::MatrixXd sigma = u.transpose() * state.cov() * u;
  const Eigen::MatrixXd c = state.cov()(rest.idx, Eigen::all) * u;

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rest.idx.size()), k);
  for (const FeedforwardTerm& term : rule.terms) {
    const Eigen::Index row = target_row(term, rest.modes.size());
    for (const auto& [id, gain] : term.gains) {
      f(row, static_cast<Eigen::Index>(detector_column(detectors, id))) += gain;
    }
  }

  Eigen::VectorXd mean = state.mean()(rest.idx);
  Eigen::MatrixXd cov = state.cov()(rest.idx, rest.idx);
  if (k > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.eigenvalues().minCoeff() <= kDegenerateVariance) {
      throw DegenerateMeasurement("ensemble_feedforward: singular outcome covariance");
    }
    const Eigen::MatrixXd sigma_inv =
        es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    // Conditional state at s = m_s, then average the residual outcome
    // dependence (C Sigma^-1 + F)(s - m_s) over s ~ N(m_s, Sigma).
    const Eigen::MatrixXd gain = c * sigma_inv;
    cov -= gain * c.transpose();
    const Eigen::MatrixXd residual = gain + f;
    cov += residual * sigma * residual.transpose();
    mean += f * m_s;
  }
  return {std::move(mean), std::move(cov)};
}

GaussianState deferred_feedforward(const GaussianState& state, std::span<const Detector> detectors,
                                   const FeedforwardRule& rule) {
  const std::size_t n = state.n_modes();
  const Remaining rest = remaining_after(n, measured_modes(n, detectors));
  GaussianState current = state;
  for (const FeedforwardTerm& term : rule.terms) {
    if (term.target >= rest.modes.size()) throw std::invalid_argument("feed-forward target out of range");
    const std::size_t target = rest.modes[term.target];
    for (const auto& [id, gain] : term.gains) {
      const Detector& det = detectors[detector_column(detectors, id)];
      // Control observable s = a x_c + b p_c. Local order (x_c, p_c, x_t, p_t).
      const double a = gain * std::cos(det.spec.angle);
      const double b = -gain * std::sin(det.spec.angle);
      Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
      if (term.quadrature == Quadrature::kP) {
        m(3, 0) = a;
        m(3, 1) = b;
        m(0, 2) = -b;
        m(1, 2) = a;
      } else {
        m(2, 0) = a;
        m(2, 1) = b;
        m(0, 3) = b;
        m(1, 3) = -a;
      }
      current = apply_symplectic(current, SymplecticOp({det.spec.mode, target}, m));
    }
  }
  return select_modes(current, rest.modes);
}

void write_trajectory_csv_header(std::ostream& out) { out << "trajectory_id,detector_id,theta_deg,outcome\n"; }

void write_trajectory_csv(std::ostream& out, std::size_t trajectory_id, std::span<const MeasurementRecord> records) {
  const auto old_precision = out.precision(17);
  for (const MeasurementRecord& r : records) {
    out << trajectory_id << ',' << r.detector_id << ',' << radians_to_degrees(r.spec.angle) << ',' << r.outcome
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace cvgate
