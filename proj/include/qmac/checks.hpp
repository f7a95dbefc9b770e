// Copyright 2026 The qmac Authors
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

// Randomised property suites over the entropy, measurement and region
// modules. Each trial draws its instance from split_seed(seed, trial), so a
// reported violation can be replayed from (suite, seed, trial) alone.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmac/channel.hpp"
#include "qmac/limits.hpp"

namespace qmac {

struct InequalityStats {
  std::size_t checked = 0;
  std::size_t violations = 0;
  // Largest observed excess (lhs - rhs for inequalities, |a - b| for
  // identities); a check fails when the excess is above the tolerance.
  double worst_excess = -1e300;
};

struct CheckReport {
  std::map<std::string, InequalityStats> stats;
  std::vector<nlohmann::json> violations;  // at most kMaxRecorded
  std::size_t trials = 0;

  static constexpr std::size_t kMaxRecorded = 20;

  bool passed() const;
  void merge(const CheckReport& other);
};

struct CheckOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  Limits limits;
};

// Dual-path entropies, both forms of the conditional mutual information,
// the reduced-channel form, and nonnegativity.
CheckReport run_entropy_suite(const CheckOptions& opts);
// Subadditivity, Fano, measurement disturbance, tender instrument (per state
// and averaged).
CheckReport run_lemma_suite(const CheckOptions& opts);
// Corner membership and telescoping, corners vs. polytope vertices,
// submodularity of the bounds, single-component mixtures.
CheckReport run_region_suite(const CheckOptions& opts);

// Entropy and region checks on a fixed channel: the uniform prior (trial 0)
// followed by `trials` random priors.
CheckReport run_channel_suite(const CqMacChannel& ch, const CheckOptions& opts);

// "entropy", "lemmas", "region" or "all".
CheckReport run_suite(const std::string& name, const CheckOptions& opts);

nlohmann::json to_json(const CheckReport& r);

}  // namespace qmac
