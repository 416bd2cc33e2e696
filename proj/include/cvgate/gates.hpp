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
#include "cvgate/symplectic.hpp"

// Gate factories. Every factory returns a SymplecticOp in the Heisenberg
// action on quadratures: the op's matrix M sends the quadrature vector xi to
// M xi, so a state transforms as mean -> M mean, V -> M V M^T.
namespace cvgate::gates {

/// x -> z x, p -> p / z. z = e^r squeezes p by r; z = sqrt(2) is the
/// -3.0 dB p-squeezer produced by a half teleportation through a 50% coupler.
SymplecticOp squeezer(std::size_t mode, double z);

enum class BeamsplitterSign {
  /// out_a = sqrt(1-R) a - sqrt(R) b, out_b = sqrt(R) a + sqrt(1-R) b.
  kStandard,
  /// out_a = sqrt(1-R) a + sqrt(R) b, out_b = -sqrt(R) a + sqrt(1-R) b.
  /// Only used to check that the protocol is sensitive to the convention.
  kMirrored,
};

/// Real (phase-free) beamsplitter of reflectivity R, acting identically on x
/// and p. With R = 1/2 and the standard sign, (a, b) -> ((a - b)/sqrt2,
/// (a + b)/sqrt2).
SymplecticOp beamsplitter(std::size_t mode_a, std::size_t mode_b, double reflectivity,
                          BeamsplitterSign sign = BeamsplitterSign::kStandard);

/// exp(2i g x_j x_k): p_j -> p_j + g x_k, p_k -> p_k + g x_j.
SymplecticOp controlled_z(std::size_t mode_j, std::size_t mode_k, double gain);

/// exp(i t x^2): p -> p + t x.
SymplecticOp quadratic_phase(std::size_t mode, double t);

/// exp(i t (x_j + x_k)^2): p_j, p_k -> p_{j,k} + t (x_j + x_k). Equal to two
/// quadratic phase gates followed by controlled_z(t).
SymplecticOp tz_gate(std::size_t mode_j, std::size_t mode_k, double t);

/// (x, p) -> (x cos phi + p sin phi, -x sin phi + p cos phi). Measuring x
/// after rotation(-theta) is measuring x cos theta - p sin theta.
SymplecticOp rotation(std::size_t mode, double phi);

/// Passive linear-optics network a -> U a on the listed modes, for a unitary
/// U = A + iB: x -> A x - B p, p -> B x + A p.
SymplecticOp passive_network(std::vector<std::size_t> modes, const Eigen::MatrixXcd& unitary);

/// Pure-loss channel of transmission eta on one mode (beamsplitter with
/// vacuum). Not a symplectic map, so it acts on states directly.
GaussianState loss_channel(const GaussianState& state, std::size_t mode, double eta);

}  // namespace cvgate::gates
