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

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qmac/channel.hpp"
#include "qmac/channel_io.hpp"
#include "qmac/entropy.hpp"
#include "qmac/errors.hpp"
#include "qmac/random.hpp"

using namespace qmac;

namespace {

RawChannel raw_two_qubit_senders() {
  RawChannel raw;
  raw.alphabets = {2, 2};
  raw.output_dim = 2;
  const Matrix a = fixtures::ket0().matrix(), b = fixtures::ket1().matrix(), c = fixtures::ket_plus().matrix();
  raw.states[{0, 0}] = a;
  raw.states[{0, 1}] = b;
  raw.states[{1, 0}] = c;
  raw.states[{1, 1}] = Matrix::Identity(2, 2) * 0.5;
  return raw;
}

bool has_violation_containing(const ChannelValidationError& e, const std::string& needle) {
  for (const auto& v : e.violations()) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(ValidateChannel, AcceptsCompleteTable) {
  const CqMacChannel ch = validate_channel(raw_two_qubit_senders());
  EXPECT_EQ(ch.num_senders(), 2u);
  EXPECT_EQ(ch.num_tuples(), 4u);
}

TEST(ValidateChannel, NamesMissingTuple) {
  RawChannel raw = raw_two_qubit_senders();
  raw.states.erase({1, 0});
  try {
    validate_channel(raw);
    FAIL() << "expected ChannelValidationError";
  } catch (const ChannelValidationError& e) {
    EXPECT_TRUE(has_violation_containing(e, "missing state (1,0)")) << e.what();
  }
}

TEST(ValidateChannel, NamesBadTraceTuple) {
  RawChannel raw = raw_two_qubit_senders();
  raw.states[{0, 1}] *= 0.9;
  try {
    validate_channel(raw);
    FAIL() << "expected ChannelValidationError";
  } catch (const ChannelValidationError& e) {
    EXPECT_TRUE(has_violation_containing(e, "(0,1)")) << e.what();
    EXPECT_TRUE(has_violation_containing(e, "trace")) << e.what();
  }
}

TEST(ValidateChannel, ListsEveryViolation) {
  RawChannel raw = raw_two_qubit_senders();
  raw.states.erase({1, 1});
  raw.states[{0, 0}](0, 1) = 0.3;
  try {
    validate_channel(raw);
    FAIL() << "expected ChannelValidationError";
  } catch (const ChannelValidationError& e) {
    EXPECT_GE(e.violations().size(), 2u);
    EXPECT_TRUE(has_violation_containing(e, "missing state (1,1)"));
    EXPECT_TRUE(has_violation_containing(e, "(0,0)"));
  }
}

TEST(ChannelState, UniformPriorsGiveQuarterAtoms) {
  const CqEnsemble e = channel_state(fixtures::adder(), Prior::uniform(std::vector<std::size_t>{2, 2}));
  ASSERT_EQ(e.atoms().size(), 4u);
  for (const Atom& a : e.atoms()) EXPECT_NEAR(a.probability, 0.25, 1e-15);
}

TEST(ChannelState, PointMassGivesSingleAtom) {
  const CqEnsemble e = channel_state(fixtures::adder(), Prior({{0.0, 1.0}, {1.0, 0.0}}));
  ASSERT_EQ(e.atoms().size(), 1u);
  EXPECT_EQ(e.atoms()[0].labels, (Letters{1, 0}));
  EXPECT_DOUBLE_EQ(e.atoms()[0].probability, 1.0);
}

TEST(ChannelState, ProductRule) {
  const CqEnsemble e = channel_state(fixtures::adder(), Prior({{0.3, 0.7}, {0.5, 0.5}}));
  const Atom* a = e.find(std::vector<std::size_t>{0, 1});
  ASSERT_NE(a, nullptr);
  EXPECT_NEAR(a->probability, 0.15, 1e-15);
}

TEST(ChannelState, LabelMarginalIsThePrior) {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const std::vector<std::size_t> alph{rng.between(1, 3), rng.between(1, 3)};
    const CqMacChannel ch = random_channel(rng, alph, rng.between(1, 3));
    const Prior p = random_prior(rng, alph);
    const CqEnsemble e = channel_state(ch, p);
    for (const Atom& a : e.atoms()) {
      EXPECT_NEAR(real_trace(a.state.matrix()), 1.0, 1e-12);
      EXPECT_DOUBLE_EQ(a.probability, p.sender(0)[a.labels[0]] * p.sender(1)[a.labels[1]]);
    }
  }
}

TEST(ReducedChannel, FullSubsetIsIdentity) {
  const CqMacChannel ch = fixtures::adder();
  const CqMacChannel r = reduced_channel(ch, Prior::uniform(ch.alphabets()), SenderSubset::full(2));
  for (std::size_t t = 0; t < ch.num_tuples(); ++t) {
    EXPECT_EQ(r.state_at(t).matrix(), ch.state_at(t).matrix());
  }
}

TEST(ReducedChannel, PointMassSlices) {
  Rng rng(22);
  const CqMacChannel ch = random_channel(rng, {2, 3}, 2);
  const CqMacChannel r = reduced_channel(ch, Prior({{0.5, 0.5}, {1.0, 0.0, 0.0}}), SenderSubset::single(0));
  for (std::size_t x = 0; x < 2; ++x) {
    const std::vector<std::size_t> letters{x, 0};
    EXPECT_LT(max_abs_entry(r.state_at(x).matrix() - ch.state(letters).matrix()), 1e-15);
  }
}

TEST(ReducedChannel, AdderAveragesByHand) {
  const CqMacChannel r = reduced_channel(fixtures::adder(), Prior::uniform(std::vector<std::size_t>{2, 2}),
                                         SenderSubset::single(0));
  const Matrix expect0 = DensityMatrix::diagonal(std::vector<double>{0.5, 0.5, 0.0}).matrix();
  const Matrix expect1 = DensityMatrix::diagonal(std::vector<double>{0.0, 0.5, 0.5}).matrix();
  EXPECT_LT(max_abs_entry(r.state_at(0).matrix() - expect0), 1e-15);
  EXPECT_LT(max_abs_entry(r.state_at(1).matrix() - expect1), 1e-15);
  EXPECT_THROW(reduced_channel(fixtures::adder(), Prior::uniform(std::vector<std::size_t>{2, 2}), SenderSubset{}),
               ValidationError);
}

TEST(ReducedChannel, MatchesPartialTraceOfChannelState) {
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const std::vector<std::size_t> alph{rng.between(1, 3), rng.between(1, 3), rng.between(1, 2)};
    const CqMacChannel ch = random_channel(rng, alph, rng.between(1, 3));
    const Prior p = random_prior(rng, alph);
    const SenderSubset j(static_cast<std::uint32_t>(rng.between(1, 7)));
    const CqEnsemble traced = restrict(channel_state(ch, p), SubsystemSelector::labels_and_output(j));
    const CqEnsemble direct = channel_state(reduced_channel(ch, p, j), restrict_prior(p, j));
    ASSERT_EQ(traced.atoms().size(), direct.atoms().size());
    for (const Atom& a : direct.atoms()) {
      const Atom* b = traced.find(a.labels);
      ASSERT_NE(b, nullptr);
      EXPECT_NEAR(a.probability, b->probability, 1e-10);
      EXPECT_LE(max_abs_entry(a.probability * a.state.matrix() - b->probability * b->state.matrix()), 1e-10);
    }
  }
}

TEST(BlockChannel, LengthOneReproducesLetters) {
  Rng rng(24);
  const CqMacChannel ch = random_channel(rng, {2, 3}, 2);
  const BlockChannel b = block_channel(ch, 1);
  for (std::size_t t = 0; t < ch.num_tuples(); ++t) {
    const Letters x = ch.letters_of(t);
    const std::vector<Word> words{{x[0]}, {x[1]}};
    EXPECT_EQ(b.state(words).matrix(), ch.state_at(t).matrix());
  }
}

TEST(BlockChannel, PureProductsStayPureAndNormalised) {
  Rng rng(25);
  std::vector<DensityMatrix> pure;
  for (int k = 0; k < 4; ++k) pure.push_back(random_pure(rng, 2));
  const CqMacChannel ch({2, 2}, 2, pure);
  const BlockChannel b = block_channel(ch, 2);
  const std::vector<Word> words{{0, 1}, {1, 1}};
  const DensityMatrix s = b.state(words);
  EXPECT_EQ(s.dim(), 4u);
  EXPECT_NEAR(entropy_bits(s), 0.0, 1e-9);
  EXPECT_NEAR(real_trace(s.matrix()), 1.0, 1e-12);
  const Matrix expect = tensor(ch.state(std::vector<std::size_t>{0, 1}).matrix(), ch.state(std::vector<std::size_t>{1, 1}).matrix());
  EXPECT_LT(max_abs_entry(s.matrix() - expect), 1e-14);
}

TEST(BlockChannel, CapExceeded) {
  Limits lim;
  lim.max_block_dim = 64;
  EXPECT_NO_THROW(BlockChannel(fixtures::holevo_two_state(), 6, lim));
  try {
    BlockChannel(fixtures::holevo_two_state(), 7, lim);
    FAIL() << "expected CapExceeded";
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.required(), 128u);
    EXPECT_EQ(e.configured(), 64u);
  }
}

TEST(PrecomposeQq, IdentityWithOrthogonalInputsIsOrthogonal) {
  const std::vector<std::vector<DensityMatrix>> inputs{{fixtures::ket0(), fixtures::ket1()},
                                                       {fixtures::ket0(), fixtures::ket1()}};
  const CqMacChannel ch = precompose_qq(inputs, KrausMap::identity(4));
  for (std::size_t a = 0; a < ch.num_tuples(); ++a) {
    for (std::size_t b = a + 1; b < ch.num_tuples(); ++b) {
      EXPECT_LE(overlap(ch.state_at(a), ch.state_at(b)), 1e-10);
    }
  }
}

TEST(PrecomposeQq, DepolarizingGivesConstantChannel) {
  Rng rng(26);
  const std::vector<std::vector<DensityMatrix>> inputs{{random_density(rng, 2), random_density(rng, 2)},
                                                       {random_density(rng, 3), random_density(rng, 3)}};
  const CqMacChannel ch = precompose_qq(inputs, KrausMap::completely_depolarizing(6, 2));
  for (const auto& st : ch.states()) {
    EXPECT_LT(max_abs_entry(st.matrix() - DensityMatrix::maximally_mixed(2).matrix()), 1e-12);
  }
}

TEST(PrecomposeQq, SingleSenderHolevoValue) {
  const CqMacChannel ch = precompose_qq({{fixtures::ket0(), fixtures::ket_plus()}}, KrausMap::identity(2));
  const auto [lo, hi] = oracle::eig2(0.75, 0.25, 0.25);
  EXPECT_NEAR(holevo_bits(ch.states(), {0.5, 0.5}), oracle::shannon({lo, hi}), 1e-12);
}

TEST(PrecomposeQq, RejectsNonTracePreservingMap) {
  Matrix k = Matrix::Identity(2, 2) * 0.9;
  EXPECT_THROW(precompose_qq({{fixtures::ket0()}}, KrausMap({k}, 2, 2)), ValidationError);
}

TEST(ChannelIo, RoundTripAndShippedFiles) {
  for (const char* name : {"adder-classical.json", "holevo-two-state.json", "qubit-pure-mac.json"}) {
    const CqMacChannel ch = load_channel(fixtures::channel_path(name));
    const CqMacChannel back = channel_from_json(channel_to_json(ch));
    ASSERT_EQ(back.num_tuples(), ch.num_tuples());
    for (std::size_t t = 0; t < ch.num_tuples(); ++t) {
      EXPECT_EQ(back.state_at(t).matrix(), ch.state_at(t).matrix()) << name;
    }
  }
  const CqMacChannel adder = load_channel(fixtures::channel_path("adder-classical.json"));
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(adder.state_at(t).matrix(), fixtures::adder().state_at(t).matrix());
  }
}

TEST(ChannelIo, RejectsUnknownKeysAndBadShapes) {
  nlohmann::json doc = channel_to_json(fixtures::adder());
  doc["extra"] = 1;
  EXPECT_THROW(channel_from_json(doc), ParseError);
  EXPECT_THROW(channel_from_json(nlohmann::json::parse(R"({"senders": 3})")), ParseError);
  EXPECT_THROW(load_channel(fixtures::channel_path("does-not-exist.json")), ParseError);
}

TEST(ChannelIo, ClassicalShorthandRejectsNonStochasticRows) {
  const auto doc = nlohmann::json::parse(
      R"({"senders": [{"name": "A", "alphabet": 2}], "classical": [[0.5, 0.5], [0.7, 0.7]]})");
  EXPECT_THROW(channel_from_json(doc), ValidationError);
}
