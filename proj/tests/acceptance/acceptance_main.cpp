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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.
#include <cstdio>

#include "cvgate/acceptance.hpp"

int main() {
  bool ok = true;
  for (const cvgate::CriterionResult& r : cvgate::run_acceptance()) {
    std::printf("%s  [%.2f s]\n", cvgate::format_line(r).c_str(), r.seconds);
    ok = ok && r.passed;
  }
  std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILED");
  return ok ? 0 : 1;
}
