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

// Rate regions of cq multiple-access channels: per-prior constraint sets,
// successive-decoding corners, membership, mixtures over priors and prior
// sweeps.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmac/channel.hpp"
#include "qmac/limits.hpp"

namespace qmac {

inline constexpr double kDefaultMemberTol = 1e-9;

// One bound per nonempty subset J: sum_{i in J} R_i <= bound(J).
class RateConstraintSet {
 public:
  // bounds[mask - 1] is the bound for subset `mask`.
  RateConstraintSet(std::size_t senders, std::vector<double> bounds);

  std::size_t senders() const { return senders_; }
  double bound(SenderSubset j) const;
  const std::vector<double>& bounds() const { return bounds_; }

 private:
  std::size_t senders_;
  std::vector<double> bounds_;
};

struct RatePoint {
  std::vector<double> rates;
};

using Permutation = std::vector<std::size_t>;

struct Corner {
  Permutation decode_order;  // zero-based sender indices, decoded first to last
  RatePoint point;
};

// H(Y | X(K)) for every K (indexed by mask) under one channel state.
class ConditionalEntropyTable {
 public:
  ConditionalEntropyTable(const CqMacChannel& ch, const Prior& p);
  std::size_t senders() const { return senders_; }
  double operator[](SenderSubset k) const { return h_.at(k.mask()); }

 private:
  std::size_t senders_;
  std::vector<double> h_;
};

RateConstraintSet constraint_set(const CqMacChannel& ch, const Prior& p);

// R_{perm[i]} = H(Y | X_{perm[0..i-1]}) - H(Y | X_{perm[0..i]}).
RatePoint corner(const CqMacChannel& ch, const Prior& p, const Permutation& perm);
RatePoint corner(const ConditionalEntropyTable& table, const Permutation& perm);

// One corner per permutation (lexicographic order), duplicates within 1e-9
// removed keeping the first. Throws CapExceeded for s > max_corner_senders.
std::vector<Corner> all_corners(const CqMacChannel& ch, const Prior& p, const Limits& limits = {});
std::vector<Corner> all_corners(const ConditionalEntropyTable& table, const Limits& limits = {});

// R(J) <= bound(J) + tol for every J (and R >= -tol componentwise).
bool is_member(const RatePoint& point, const RateConstraintSet& cs,
               double tol = kDefaultMemberTol);

struct MixtureSpec {
  std::vector<std::pair<double, Prior>> components;
};

// sum_u q_u * constraint_set(ch, p_u). At most limits.max_mixture_components
// components (0 means s).
RateConstraintSet mixture_constraints(const CqMacChannel& ch, const MixtureSpec& mix,
                                      const Limits& limits = {});

// All product priors whose per-sender numerators sum to `resolution`,
// enumerated in lexicographic order (sender 1 most significant).
std::vector<Prior> prior_grid(std::span<const std::size_t> alphabets, std::size_t resolution,
                              const Limits& limits = {});

struct SweepPoint {
  std::size_t prior_id;
  Prior prior;
  RateConstraintSet constraints;
  std::vector<Corner> corners;
};

std::vector<SweepPoint> boundary_sweep(const CqMacChannel& ch, const std::vector<Prior>& priors,
                                       const Limits& limits = {});
std::vector<SweepPoint> boundary_sweep(const CqMacChannel& ch, std::size_t resolution,
                                       const Limits& limits = {});

// Vertices of the upper-right boundary of conv(points, origin) for s = 2,
// from (0, max R2) to (max R1, 0).
std::vector<RatePoint> upper_boundary_2d(const std::vector<RatePoint>& points);

// Every vertex of {R >= 0, R(J) <= bound(J)} by brute force over systems of
// s tight constraints; s <= 3. Returned in a canonical sorted order.
std::vector<RatePoint> polytope_vertices(const RateConstraintSet& cs, double tol = kDefaultMemberTol);

// Vertices not dominated by any other vertex.
std::vector<RatePoint> dominant_vertices(const std::vector<RatePoint>& vertices,
                                         double tol = kDefaultMemberTol);

nlohmann::json to_json(const RateConstraintSet& cs);
nlohmann::json to_json(const Prior& p);

}  // namespace qmac
