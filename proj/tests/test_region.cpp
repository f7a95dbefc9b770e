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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qmac/channel_io.hpp"
#include "qmac/entropy.hpp"
#include "qmac/errors.hpp"
#include "qmac/random.hpp"
#include "qmac/region.hpp"

using namespace qmac;

namespace {

const std::vector<std::size_t> kBinaryPair{2, 2};

void expect_point(const RatePoint& p, std::vector<double> expect, double tol = 1e-9) {
  ASSERT_EQ(p.rates.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(p.rates[i], expect[i], tol) << "rate " << i;
}

std::vector<std::size_t> random_alphabets(Rng& rng, std::size_t s) {
  std::vector<std::size_t> a;
  for (std::size_t i = 0; i < s; ++i) a.push_back(rng.between(1, 3));
  return a;
}

// Height of the piecewise-linear upper boundary at r1.
double boundary_height(const std::vector<RatePoint>& boundary, double r1) {
  for (std::size_t k = 1; k < boundary.size(); ++k) {
    const double x0 = boundary[k - 1].rates[0], x1 = boundary[k].rates[0];
    if (r1 >= x0 - 1e-12 && r1 <= x1 + 1e-12) {
      if (x1 - x0 < 1e-15) return std::max(boundary[k - 1].rates[1], boundary[k].rates[1]);
      const double t = (r1 - x0) / (x1 - x0);
      return (1 - t) * boundary[k - 1].rates[1] + t * boundary[k].rates[1];
    }
  }
  return -1.0;
}

}  // namespace

TEST(ConstraintSet, AdderUniform) {
  const RateConstraintSet cs = constraint_set(fixtures::adder(), Prior::uniform(kBinaryPair));
  EXPECT_NEAR(cs.bound(SenderSubset::of({0})), 1.0, 1e-12);
  EXPECT_NEAR(cs.bound(SenderSubset::of({1})), 1.0, 1e-12);
  EXPECT_NEAR(cs.bound(SenderSubset::of({0, 1})), 1.5, 1e-12);
}

TEST(ConstraintSet, ConstantChannelIsZero) {
  const RateConstraintSet cs = constraint_set(fixtures::constant_channel({2, 3}), Prior({{0.2, 0.8}, {0.1, 0.2, 0.7}}));
  for (double b : cs.bounds()) EXPECT_NEAR(b, 0.0, 1e-12);
}

TEST(ConstraintSet, SingleSenderHolevo) {
  const RateConstraintSet cs =
      constraint_set(fixtures::holevo_two_state(), Prior::uniform(std::vector<std::size_t>{2}));
  ASSERT_EQ(cs.bounds().size(), 1u);
  const auto [lo, hi] = oracle::eig2(0.75, 0.25, 0.25);
  EXPECT_NEAR(cs.bounds()[0], oracle::shannon({lo, hi}), 1e-12);
  EXPECT_NEAR(lo, (1.0 - 1.0 / std::sqrt(2.0)) / 2.0, 1e-15);
}

TEST(Corner, AdderBothOrders) {
  const CqMacChannel ch = fixtures::adder();
  const Prior p = Prior::uniform(kBinaryPair);
  expect_point(corner(ch, p, {0, 1}), {0.5, 1.0});
  expect_point(corner(ch, p, {1, 0}), {1.0, 0.5});
  const oracle::ClassicalMac mac = oracle::from_diagonal(ch);
  const std::vector<std::vector<double>> prior{{0.5, 0.5}, {0.5, 0.5}};
  expect_point(corner(ch, p, {0, 1}), oracle::corner(mac, prior, {0, 1}), 1e-12);
  EXPECT_THROW(corner(ch, p, {0, 0}), ValidationError);
  EXPECT_THROW(corner(ch, p, {0}), ValidationError);
}

TEST(Corner, SingleSenderIsTheBound) {
  const CqMacChannel ch = fixtures::holevo_two_state();
  const Prior p({{0.3, 0.7}});
  EXPECT_NEAR(corner(ch, p, {0}).rates[0], constraint_set(ch, p).bounds()[0], 1e-12);
}

TEST(AllCorners, AdderHasTwoDistinctPoints) {
  const auto corners = all_corners(fixtures::adder(), Prior::uniform(kBinaryPair));
  ASSERT_EQ(corners.size(), 2u);
  expect_point(corners[0].point, {0.5, 1.0});
  expect_point(corners[1].point, {1.0, 0.5});
  EXPECT_EQ(corners[1].decode_order, (Permutation{1, 0}));
}

TEST(AllCorners, CollapseWhenOutputIgnoresSenderTwo) {
  Rng rng(41);
  const DensityMatrix a = random_density(rng, 2), b = random_density(rng, 2);
  const CqMacChannel ch({2, 2}, 2, {a, a, b, b});
  const auto corners = all_corners(ch, Prior::uniform(kBinaryPair));
  ASSERT_EQ(corners.size(), 1u);
  EXPECT_NEAR(corners[0].point.rates[1], 0.0, 1e-12);
}

TEST(AllCorners, SingleSenderAndCap) {
  EXPECT_EQ(all_corners(fixtures::holevo_two_state(), Prior::uniform(std::vector<std::size_t>{2})).size(), 1u);
  Rng rng(42);
  const CqMacChannel ch = random_channel(rng, {2, 2, 2}, 2);
  Limits lim;
  lim.max_corner_senders = 2;
  try {
    all_corners(ch, Prior::uniform(ch.alphabets()), lim);
    FAIL() << "expected CapExceeded";
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.required(), 3u);
    EXPECT_EQ(e.configured(), 2u);
  }
}

TEST(IsMember, Examples) {
  const RateConstraintSet cs = constraint_set(fixtures::adder(), Prior::uniform(kBinaryPair));
  EXPECT_TRUE(is_member({{0.0, 0.0}}, cs));
  EXPECT_FALSE(is_member({{1.0, 1.0}}, cs));
  EXPECT_TRUE(is_member({{0.5, 1.0}}, cs));
  EXPECT_TRUE(is_member({{0.5, 1.0 + 5e-10}}, cs));
  EXPECT_FALSE(is_member({{0.5, 1.0 + 5e-9}}, cs));
  EXPECT_FALSE(is_member({{-0.1, 0.0}}, cs));
  EXPECT_THROW(is_member({{0.0}}, cs), ValidationError);
}

TEST(CornerLaws, MembershipTelescopingAndVertices) {
  Rng rng(43);
  for (int t = 0; t < 60; ++t) {
    const std::size_t s = rng.between(1, 3);
    const auto alph = random_alphabets(rng, s);
    const CqMacChannel ch = random_channel(rng, alph, rng.between(1, 4));
    const Prior p = random_prior(rng, alph);
    const RateConstraintSet cs = constraint_set(ch, p);
    Permutation perm(s);
    for (std::size_t i = 0; i < s; ++i) perm[i] = i;
    std::vector<RatePoint> corners;
    do {
      const RatePoint r = corner(ch, p, perm);
      EXPECT_TRUE(is_member(r, cs, 1e-9));
      double sum = 0.0;
      for (double x : r.rates) sum += x;
      EXPECT_NEAR(sum, cs.bound(SenderSubset::full(s)), 1e-9);
      corners.push_back(r);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Every dominant vertex of the polytope is one of the corners.
    for (const RatePoint& v : dominant_vertices(polytope_vertices(cs))) {
      const bool found = std::any_of(corners.begin(), corners.end(), [&](const RatePoint& c) {
        double gap = 0.0;
        for (std::size_t i = 0; i < s; ++i) gap = std::max(gap, std::abs(c.rates[i] - v.rates[i]));
        return gap < 1e-7;
      });
      EXPECT_TRUE(found);
    }
  }
}

TEST(Mixture, SingleComponentAndIdenticalPriors) {
  const CqMacChannel ch = fixtures::adder();
  const Prior p({{0.3, 0.7}, {0.6, 0.4}});
  const RateConstraintSet plain = constraint_set(ch, p);
  const RateConstraintSet one = mixture_constraints(ch, MixtureSpec{{{1.0, p}}});
  const RateConstraintSet two = mixture_constraints(ch, MixtureSpec{{{0.5, p}, {0.5, p}}});
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(one.bounds()[k], plain.bounds()[k]);
    EXPECT_NEAR(two.bounds()[k], plain.bounds()[k], 1e-15);
  }
}

TEST(Mixture, AdderUniformWithPointMassIsMean) {
  const CqMacChannel ch = fixtures::adder();
  const oracle::ClassicalMac mac = oracle::from_diagonal(ch);
  const std::vector<std::vector<double>> uni{{0.5, 0.5}, {0.5, 0.5}}, point{{1.0, 0.0}, {0.0, 1.0}};
  const RateConstraintSet mix = mixture_constraints(ch, MixtureSpec{{{0.5, Prior(uni)}, {0.5, Prior(point)}}});
  for (std::uint32_t mask = 1; mask < 4; ++mask) {
    const double expect = 0.5 * oracle::bound(mac, uni, mask) + 0.5 * oracle::bound(mac, point, mask);
    EXPECT_NEAR(mix.bound(SenderSubset(mask)), expect, 1e-12);
  }
  EXPECT_NEAR(mix.bound(SenderSubset(3)), 0.75, 1e-12);
}

TEST(Mixture, AffineInWeights) {
  Rng rng(44);
  for (int t = 0; t < 20; ++t) {
    const std::size_t s = rng.between(1, 3);
    const auto alph = random_alphabets(rng, s);
    const CqMacChannel ch = random_channel(rng, alph, rng.between(1, 3));
    const Prior a = random_prior(rng, alph), b = random_prior(rng, alph);
    const RateConstraintSet ca = constraint_set(ch, a), cb = constraint_set(ch, b);
    Limits lim;
    lim.max_mixture_components = 2;
    for (double w : {0.0, 0.37, 1.0}) {
      const RateConstraintSet m = mixture_constraints(ch, MixtureSpec{{{w, a}, {1.0 - w, b}}}, lim);
      for (std::size_t k = 0; k < m.bounds().size(); ++k) {
        EXPECT_NEAR(m.bounds()[k], w * ca.bounds()[k] + (1.0 - w) * cb.bounds()[k], 1e-12);
      }
    }
  }
}

TEST(Mixture, RejectsBadWeightsAndTooManyComponents) {
  const CqMacChannel ch = fixtures::adder();
  const Prior p = Prior::uniform(kBinaryPair);
  EXPECT_THROW(mixture_constraints(ch, MixtureSpec{{{0.5, p}, {0.4, p}}}), ValidationError);
  EXPECT_THROW(mixture_constraints(ch, MixtureSpec{{{1.5, p}, {-0.5, p}}}), ValidationError);
  EXPECT_THROW(mixture_constraints(ch, MixtureSpec{{{0.25, p}, {0.25, p}, {0.5, p}}}), CapExceeded);
  Limits lim;
  lim.max_mixture_components = 3;
  EXPECT_NO_THROW(mixture_constraints(ch, MixtureSpec{{{0.25, p}, {0.25, p}, {0.5, p}}}, lim));
}

TEST(PriorGrid, CountsAndOrder) {
  const auto grid = prior_grid(std::vector<std::size_t>{2, 3}, 2);
  // 3 binary points times 6 ternary points.
  ASSERT_EQ(grid.size(), 18u);
  EXPECT_EQ(grid.front().sender(0), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(prior_grid(std::vector<std::size_t>{2}, 1).size(), 2u);
  EXPECT_THROW(prior_grid(std::vector<std::size_t>{2}, 0), ValidationError);
  Limits lim;
  lim.max_sweep_points = 10;
  EXPECT_THROW(prior_grid(std::vector<std::size_t>{2, 3}, 2, lim), CapExceeded);
}

TEST(BoundarySweep, SingleUniformPriorMatchesAllCorners) {
  const CqMacChannel ch = load_channel(fixtures::channel_path("qubit-pure-mac.json"));
  const Prior u = Prior::uniform(ch.alphabets());
  const auto sweep = boundary_sweep(ch, std::vector<Prior>{u});
  ASSERT_EQ(sweep.size(), 1u);
  const auto direct = all_corners(ch, u);
  ASSERT_EQ(sweep[0].corners.size(), direct.size());
  for (std::size_t k = 0; k < direct.size(); ++k) {
    EXPECT_EQ(sweep[0].corners[k].decode_order, direct[k].decode_order);
    EXPECT_EQ(sweep[0].corners[k].point.rates, direct[k].point.rates);
  }
}

TEST(BoundarySweep, RefinementContainsCoarserCorners) {
  const CqMacChannel ch = load_channel(fixtures::channel_path("qubit-pure-mac.json"));
  const auto coarse = boundary_sweep(ch, 2);
  const auto fine = boundary_sweep(ch, 4);
  EXPECT_EQ(coarse.size(), 9u);
  EXPECT_EQ(fine.size(), 25u);
  std::vector<RatePoint> cloud;
  for (const auto& sp : fine) {
    for (const auto& c : sp.corners) cloud.push_back(c.point);
  }
  const std::vector<RatePoint> boundary = upper_boundary_2d(cloud);
  for (const auto& sp : coarse) {
    for (const auto& c : sp.corners) {
      const bool exact = std::any_of(cloud.begin(), cloud.end(), [&](const RatePoint& q) {
        return std::abs(q.rates[0] - c.point.rates[0]) < 1e-12 && std::abs(q.rates[1] - c.point.rates[1]) < 1e-12;
      });
      EXPECT_TRUE(exact);
      EXPECT_LE(c.point.rates[1], boundary_height(boundary, c.point.rates[0]) + 1e-9);
    }
  }
}

TEST(BoundarySweep, HolevoScanMaximum) {
  const CqMacChannel ch = fixtures::holevo_two_state();
  const auto sweep = boundary_sweep(ch, 64);
  ASSERT_EQ(sweep.size(), 65u);
  double best = -1.0, best_p = -1.0;
  double oracle_best = -1.0, oracle_p = -1.0;
  for (const auto& sp : sweep) {
    const double p0 = sp.prior.sender(0)[0];
    if (sp.constraints.bounds()[0] > best) {
      best = sp.constraints.bounds()[0];
      best_p = p0;
    }
    // p0 |0><0| + (1 - p0) |+><+|; both states pure, so chi is the entropy of the mixture.
    const double off = 0.5 * (1.0 - p0);
    const auto [lo, hi] = oracle::eig2(p0 + off, off, off);
    const double chi = oracle::shannon({std::max(lo, 0.0), hi});
    EXPECT_NEAR(sp.constraints.bounds()[0], chi, 1e-9);
    if (chi > oracle_best) {
      oracle_best = chi;
      oracle_p = p0;
    }
  }
  EXPECT_DOUBLE_EQ(best_p, 0.5);
  EXPECT_DOUBLE_EQ(oracle_p, 0.5);
  EXPECT_NEAR(best, oracle_best, 1e-12);
  EXPECT_NEAR(best, 0.600876036693, 1e-9);
}

TEST(Symmetry, RelabelingSendersPermutesBoundsAndCorners) {
  Rng rng(45);
  for (int t = 0; t < 20; ++t) {
    const std::size_t s = rng.between(2, 3);
    const auto alph = random_alphabets(rng, s);
    const CqMacChannel ch = random_channel(rng, alph, rng.between(1, 3));
    const Prior p = random_prior(rng, alph);
    Permutation pi(s);
    for (std::size_t i = 0; i < s; ++i) pi[i] = i;
    std::reverse(pi.begin(), pi.end());
    if (s == 3) std::swap(pi[0], pi[1]);
    const CqMacChannel rch = permute_senders(ch, pi);
    const Prior rp = permute_senders(p, pi);
    const RateConstraintSet a = constraint_set(ch, p), b = constraint_set(rch, rp);
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
      std::uint32_t image = 0;
      for (std::size_t k = 0; k < s; ++k) {
        if ((mask >> k) & 1u) image |= 1u << pi[k];
      }
      EXPECT_NEAR(b.bound(SenderSubset(mask)), a.bound(SenderSubset(image)), 1e-9);
    }
    Permutation order(s);
    for (std::size_t i = 0; i < s; ++i) order[i] = i;
    const RatePoint rc = corner(rch, rp, order);
    Permutation mapped(s);
    for (std::size_t i = 0; i < s; ++i) mapped[i] = pi[order[i]];
    const RatePoint oc = corner(ch, p, mapped);
    for (std::size_t k = 0; k < s; ++k) EXPECT_NEAR(rc.rates[k], oc.rates[pi[k]], 1e-9);
  }
}

TEST(QuasiClassical, DiagonalChannelsMatchShannonOracle) {
  Rng rng(46);
  for (int t = 0; t < 60; ++t) {
    const std::size_t s = rng.between(1, 3);
    const auto alph = random_alphabets(rng, s);
    const CqMacChannel ch = random_diagonal_channel(rng, alph, rng.between(1, 4));
    const Prior p = random_prior(rng, alph);
    const RateConstraintSet cs = constraint_set(ch, p);
    const oracle::ClassicalMac mac = oracle::from_diagonal(ch);
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
      EXPECT_NEAR(cs.bound(SenderSubset(mask)), oracle::bound(mac, p.per_sender(), mask), 1e-9);
    }
  }
}

TEST(UpperBoundary, AdderHull) {
  const auto b = upper_boundary_2d({{{0.5, 1.0}}, {{1.0, 0.5}}, {{0.2, 0.2}}});
  ASSERT_EQ(b.size(), 4u);
  expect_point(b[0], {0.0, 1.0});
  expect_point(b[1], {0.5, 1.0});
  expect_point(b[2], {1.0, 0.5});
  expect_point(b[3], {1.0, 0.0});
}

TEST(Json, ConstraintSetSerialisation) {
  const auto j = to_json(constraint_set(fixtures::adder(), Prior::uniform(kBinaryPair)));
  ASSERT_TRUE(j.is_object());
  ASSERT_EQ(j.size(), 3u);
  EXPECT_NEAR(j["1"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["3"].get<double>(), 1.5, 1e-12);
}
