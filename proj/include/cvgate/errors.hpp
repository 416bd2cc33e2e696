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

#include <stdexcept>

namespace cvgate {

// Argument errors are reported with std::invalid_argument; the classes below
// cover the remaining failure modes.

/// Covariance matrix is not symmetric, or a state fails a physicality
/// requirement where one is mandatory.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The measured observable has (numerically) zero variance, so the
/// conditional update is undefined.
class DegenerateMeasurement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A feed-forward gain of 1/cos(theta) would diverge (|theta| >= 90 deg).
class SingularRescale : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration that is well-formed but outside what the runner supports.
class UnsupportedConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant that must hold by construction was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cvgate
