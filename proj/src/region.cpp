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

#include "qmac/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qmac/entropy.hpp"
#include "qmac/errors.hpp"

namespace qmac {

RateConstraintSet::RateConstraintSet(std::size_t senders, std::vector<double> bounds)
    : senders_(senders), bounds_(std::move(bounds)) {
  if (senders_ == 0 || senders_ > SenderSubset::kMaxSenders) {
    throw ValidationError("constraint set needs 1.." + std::to_string(SenderSubset::kMaxSenders) +
                          " senders");
  }
  const std::size_t expected = (std::size_t{1} << senders_) - 1;
  if (bounds_.size() != expected) {
    throw ValidationError("constraint set needs " + std::to_string(expected) + " bounds, got " +
                          std::to_string(bounds_.size()));
  }
  for (double b : bounds_) {
    if (!std::isfinite(b) || b < 0.0) throw ValidationError("constraint bound must be >= 0");
  }
}

double RateConstraintSet::bound(SenderSubset j) const {
  if (j.empty()) throw ValidationError("no bound for the empty subset");
  j.check_within(senders_);
  return bounds_[j.mask() - 1];
}

ConditionalEntropyTable::ConditionalEntropyTable(const CqMacChannel& ch, const Prior& p)
    : senders_(ch.num_senders()) {
  const CqEnsemble gamma = channel_state(ch, p);
  const std::uint32_t full = SenderSubset::full(senders_).mask();
  h_.resize(std::size_t{full} + 1);
  for (std::uint32_t m = 0; m <= full; ++m) {
    h_[m] = conditional_entropy(gamma, SubsystemSelector::output(),
                                SubsystemSelector::labels(SenderSubset(m)));
  }
}

RateConstraintSet constraint_set(const CqMacChannel& ch, const Prior& p) {
  const CqEnsemble gamma = channel_state(ch, p);
  const std::uint32_t full = SenderSubset::full(ch.num_senders()).mask();
  std::vector<double> bounds;
  bounds.reserve(full);
  for (std::uint32_t m = 1; m <= full; ++m) {
    bounds.push_back(mutual_information(gamma, SenderSubset(m)));
  }
  return RateConstraintSet(ch.num_senders(), std::move(bounds));
}

namespace {

void check_permutation(const Permutation& perm, std::size_t s) {
  if (perm.size() != s) {
    throw ValidationError("permutation has " + std::to_string(perm.size()) + " entries, expected " +
                          std::to_string(s));
  }
  std::vector<bool> hit(s, false);
  for (std::size_t k : perm) {
    if (k >= s || hit[k]) throw ValidationError("invalid permutation");
    hit[k] = true;
  }
}

double clamp_round_off(double x) { return (x < 0.0 && x >= -kInfoTol) ? 0.0 : x; }

bool same_point(const RatePoint& a, const RatePoint& b, double tol) {
  for (std::size_t i = 0; i < a.rates.size(); ++i) {
    if (std::abs(a.rates[i] - b.rates[i]) > tol) return false;
  }
  return true;
}

}  // namespace

RatePoint corner(const ConditionalEntropyTable& table, const Permutation& perm) {
  check_permutation(perm, table.senders());
  RatePoint out{std::vector<double>(table.senders(), 0.0)};
  SenderSubset decoded;
  for (std::size_t k : perm) {
    const SenderSubset next = decoded | SenderSubset::single(k);
    out.rates[k] = clamp_round_off(table[decoded] - table[next]);
    decoded = next;
  }
  return out;
}

RatePoint corner(const CqMacChannel& ch, const Prior& p, const Permutation& perm) {
  check_permutation(perm, ch.num_senders());
  return corner(ConditionalEntropyTable(ch, p), perm);
}

std::vector<Corner> all_corners(const ConditionalEntropyTable& table, const Limits& limits) {
  const std::size_t s = table.senders();
  if (s > limits.max_corner_senders) {
    throw CapExceeded("senders for corner enumeration", s, limits.max_corner_senders);
  }
  Permutation perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Corner> out;
  do {
    RatePoint pt = corner(table, perm);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Corner& c) {
      return same_point(c.point, pt, kDefaultMemberTol);
    });
    if (!dup) out.push_back({perm, std::move(pt)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Corner> all_corners(const CqMacChannel& ch, const Prior& p, const Limits& limits) {
  if (ch.num_senders() > limits.max_corner_senders) {
    throw CapExceeded("senders for corner enumeration", ch.num_senders(), limits.max_corner_senders);
  }
  return all_corners(ConditionalEntropyTable(ch, p), limits);
}

bool is_member(const RatePoint& point, const RateConstraintSet& cs, double tol) {
  if (point.rates.size() != cs.senders()) {
    throw ValidationError("rate point has " + std::to_string(point.rates.size()) +
                          " entries, constraint set has " + std::to_string(cs.senders()) +
                          " senders");
  }
  for (double r : point.rates) {
    if (r < -tol) return false;
  }
  const std::uint32_t full = SenderSubset::full(cs.senders()).mask();
  for (std::uint32_t m = 1; m <= full; ++m) {
    double sum = 0.0;
    for (std::size_t i : SenderSubset(m).members()) sum += point.rates[i];
    if (sum > cs.bound(SenderSubset(m)) + tol) return false;
  }
  return true;
}

RateConstraintSet mixture_constraints(const CqMacChannel& ch, const MixtureSpec& mix,
                                      const Limits& limits) {
  const std::size_t cap =
      limits.max_mixture_components == 0 ? ch.num_senders() : limits.max_mixture_components;
  if (mix.components.empty()) throw ValidationError("mixture needs at least one component");
  if (mix.components.size() > cap) {
    throw CapExceeded("mixture components", mix.components.size(), cap);
  }
  double total = 0.0;
  for (const auto& [w, _] : mix.components) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("mixture weight must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > kTraceTol) throw ValidationError("mixture weights must sum to 1");

  std::vector<double> acc((std::size_t{1} << ch.num_senders()) - 1, 0.0);
  for (const auto& [w, prior] : mix.components) {
    const RateConstraintSet cs = constraint_set(ch, prior);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * cs.bounds()[k];
  }
  return RateConstraintSet(ch.num_senders(), std::move(acc));
}

namespace {

// Weak compositions of `total` into `parts` parts, lexicographic.
std::vector<std::vector<std::size_t>> compositions(std::size_t total, std::size_t parts) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(parts, 0);
  const auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == parts) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

// C(n, k) as a double; exact while below 2^53.
double binomial(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  double v = 1.0;
  for (std::size_t i = 1; i <= k; ++i) v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(v);
}

}  // namespace

std::vector<Prior> prior_grid(std::span<const std::size_t> alphabets, std::size_t resolution,
                              const Limits& limits) {
  if (resolution == 0) throw ValidationError("prior grid resolution must be >= 1");
  const std::size_t cap = limits.max_sweep_points;
  double count = 1.0;
  for (std::size_t a : alphabets) count *= binomial(resolution + a - 1, a - 1);
  if (count > static_cast<double>(cap)) {
    const double top = static_cast<double>(std::numeric_limits<std::size_t>::max());
    throw CapExceeded("prior grid points", count >= top ? std::numeric_limits<std::size_t>::max()
                                                        : static_cast<std::size_t>(count),
                      cap);
  }
  std::vector<std::vector<std::vector<double>>> per_sender;
  for (std::size_t a : alphabets) {
    std::vector<std::vector<double>> dists;
    for (const auto& comp : compositions(resolution, a)) {
      std::vector<double> d;
      for (std::size_t c : comp) d.push_back(static_cast<double>(c) / static_cast<double>(resolution));
      dists.push_back(std::move(d));
    }
    per_sender.push_back(std::move(dists));
  }
  std::vector<std::size_t> radices;
  for (const auto& d : per_sender) radices.push_back(d.size());
  std::vector<Prior> out;
  out.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Letters pick = decode_tuple(idx, radices);
    std::vector<std::vector<double>> v;
    for (std::size_t i = 0; i < pick.size(); ++i) v.push_back(per_sender[i][pick[i]]);
    out.emplace_back(std::move(v));
  }
  return out;
}

std::vector<SweepPoint> boundary_sweep(const CqMacChannel& ch, const std::vector<Prior>& priors,
                                       const Limits& limits) {
  if (priors.size() > limits.max_sweep_points) {
    throw CapExceeded("prior grid points", priors.size(), limits.max_sweep_points);
  }
  std::vector<SweepPoint> out;
  out.reserve(priors.size());
  for (std::size_t id = 0; id < priors.size(); ++id) {
    const Prior& p = priors[id];
    p.check_matches(ch);
    RateConstraintSet cs = constraint_set(ch, p);
    std::vector<Corner> corners = all_corners(ch, p, limits);
    out.push_back({id, p, std::move(cs), std::move(corners)});
  }
  return out;
}

std::vector<SweepPoint> boundary_sweep(const CqMacChannel& ch, std::size_t resolution,
                                       const Limits& limits) {
  return boundary_sweep(ch, prior_grid(ch.alphabets(), resolution, limits), limits);
}

std::vector<RatePoint> upper_boundary_2d(const std::vector<RatePoint>& points) {
  double max_x = 0.0, max_y = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : points) {
    if (p.rates.size() != 2) throw ValidationError("upper_boundary_2d needs 2-sender points");
    max_x = std::max(max_x, p.rates[0]);
    max_y = std::max(max_y, p.rates[1]);
    pts.emplace_back(p.rates[0], p.rates[1]);
  }
  pts.emplace_back(0.0, max_y);
  pts.emplace_back(max_x, 0.0);
  // Sort by x, highest y first; only the highest point per x can be on the
  // upper hull.
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  std::vector<std::pair<double, double>> hull;
  const auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k > 0 && pts[k].first == pts[k - 1].first) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pts[k]) >= 0.0) {
      hull.pop_back();
    }
    hull.push_back(pts[k]);
  }
  if (hull.back().second > 0.0) hull.emplace_back(max_x, 0.0);
  std::vector<RatePoint> out;
  for (const auto& [x, y] : hull) out.push_back({{x, y}});
  return out;
}

std::vector<RatePoint> polytope_vertices(const RateConstraintSet& cs, double tol) {
  const std::size_t s = cs.senders();
  if (s > 3) throw CapExceeded("senders for vertex enumeration", s, 3);
  // Rows: s nonnegativity constraints (-R_i <= 0) then one per subset.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < s; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s));
    r(static_cast<Eigen::Index>(i)) = -1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  const std::uint32_t full = SenderSubset::full(s).mask();
  for (std::uint32_t m = 1; m <= full; ++m) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s));
    for (std::size_t i : SenderSubset(m).members()) r(static_cast<Eigen::Index>(i)) = 1.0;
    rows.push_back(r);
    rhs.push_back(cs.bound(SenderSubset(m)));
  }
  std::vector<RatePoint> out;
  const std::size_t nrows = rows.size();
  std::vector<bool> choose(nrows, false);
  std::fill(choose.begin(), choose.begin() + static_cast<std::ptrdiff_t>(s), true);
  do {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    Eigen::VectorXd b(static_cast<Eigen::Index>(s));
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < nrows; ++k) {
      if (!choose[k]) continue;
      a.row(r) = rows[k].transpose();
      b(r) = rhs[k];
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < static_cast<Eigen::Index>(s)) continue;
    const Eigen::VectorXd x = lu.solve(b);
    RatePoint pt{std::vector<double>(x.data(), x.data() + x.size())};
    for (double& v : pt.rates) v = clamp_round_off(v);
    if (!is_member(pt, cs, tol)) continue;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const RatePoint& q) { return same_point(q, pt, tol); });
    if (!dup) out.push_back(std::move(pt));
  } while (std::prev_permutation(choose.begin(), choose.end()));
  std::sort(out.begin(), out.end(),
            [](const RatePoint& a, const RatePoint& b) { return a.rates < b.rates; });
  return out;
}

std::vector<RatePoint> dominant_vertices(const std::vector<RatePoint>& vertices, double tol) {
  std::vector<RatePoint> out;
  for (const auto& v : vertices) {
    const bool dominated = std::any_of(vertices.begin(), vertices.end(), [&](const RatePoint& w) {
      bool ge = true, gt = false;
      for (std::size_t i = 0; i < v.rates.size(); ++i) {
        if (w.rates[i] < v.rates[i] - tol) ge = false;
        if (w.rates[i] > v.rates[i] + tol) gt = true;
      }
      return ge && gt;
    });
    if (!dominated) out.push_back(v);
  }
  return out;
}

nlohmann::json to_json(const RateConstraintSet& cs) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t k = 0; k < cs.bounds().size(); ++k) j[std::to_string(k + 1)] = cs.bounds()[k];
  return j;
}

nlohmann::json to_json(const Prior& p) { return p.per_sender(); }

}  // namespace qmac
