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

// Desk-scale random coding for cq multiple-access channels: codebooks drawn
// from the priors, per-stage square-root decoders over averaged word states,
// gentle (sqrt D . sqrt D) implementation of each decoder, and exact error
// accounting for the successive decoder chain.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmac/channel.hpp"
#include "qmac/limits.hpp"
#include "qmac/povm.hpp"

namespace qmac {

// ---------------------------------------------------------------------------
// Seeds and codebooks

// splitmix64 finaliser; per-codebook and per-trial seeds are
// split_seed(master, stream) for fixed stream numbers.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

struct Codebook {
  std::size_t sender = 0;
  std::size_t n = 0;
  std::vector<Word> words;
  std::uint64_t seed = 0;

  std::size_t size() const { return words.size(); }
};

// L i.i.d. words of length n with letters drawn from `letter_probs`.
// Deterministic in `seed`; duplicate words are allowed.
Codebook sample_codebook(std::size_t sender, const std::vector<double>& letter_probs,
                         std::size_t n, std::size_t size, std::uint64_t seed);

// ceil(2^{n (rate - delta)}), at least 1.
std::size_t codebook_size_for_rate(double rate, double delta, std::size_t n);

// Words of sender j encoded as integers in [0, |X_j|^n), first letter most
// significant.
std::size_t encode_word(const Word& w, std::size_t alphabet);

// ---------------------------------------------------------------------------
// Word states

enum class WordStateMode {
  kEmpirical,  // average over the actual codebooks of the other senders
  kEnsemble,   // average over P_j^{(x)n} for the other senders
};

std::string to_string(WordStateMode m);
WordStateMode word_state_mode_from_string(const std::string& s);

// Word state of sender i's word with the earlier senders' words fixed to
// `prefix` (one word per sender j < i) and the later senders averaged
// according to `mode`.
DensityMatrix conditional_word_state(const BlockChannel& block, const Prior& p,
                                     const std::vector<Codebook>& codebooks, std::size_t i,
                                     std::span<const Word> prefix, const Word& word,
                                     WordStateMode mode);

// rho^(i) of `word` as a cq ensemble over the earlier senders' words
// (labels are encode_word values, label space |X_j|^n) with quantum part
// Y^n. codebooks[i] is ignored.
CqEnsemble averaged_word_state(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                               const Prior& p, std::size_t i, const Word& word,
                               WordStateMode mode, const Limits& limits = {});

// ---------------------------------------------------------------------------
// Measurements

struct LabeledState {
  std::size_t label;
  DensityMatrix state;
};

// Square-root measurement: with S = sum_c w_c rho_c and S^{-1/2} the
// pseudo-inverse square root on supp(S), D_c = S^{-1/2} w_c rho_c S^{-1/2},
// plus a kFailureOutcome element 1 - Pi_supp(S). Weights default to uniform.
Povm pgm_decoder(std::span<const LabeledState> states, std::span<const double> weights = {});

// A POVM implemented as the instrument rho -> sum_b |b><b| (x) sqrt(D_b) rho sqrt(D_b).
class TenderInstrument {
 public:
  explicit TenderInstrument(Povm povm);

  const Povm& povm() const { return povm_; }
  const HermitianOperator& sqrt_element(std::size_t k) const { return sqrt_elements_.at(k); }
  std::size_t size() const { return sqrt_elements_.size(); }

  // sqrt(D_k) x sqrt(D_k), unnormalised.
  Matrix branch(std::size_t k, const Matrix& x) const;
  // delta(x) = sum_k sqrt(D_k) x sqrt(D_k).
  Matrix apply_channel(const Matrix& x) const;

 private:
  Povm povm_;
  std::vector<HermitianOperator> sqrt_elements_;
};

struct Branch {
  std::size_t outcome;
  double probability;
  DensityMatrix state;  // normalised post-measurement state
};

// Branches with probability <= 1e-15 are omitted; the rest sum to 1.
std::vector<Branch> tender_apply(const TenderInstrument& inst, const DensityMatrix& rho);

struct DisturbanceCheck {
  double epsilon;  // 1 - Tr(rho X)
  double lhs;      // || rho - sqrt(X) rho sqrt(X) ||_1
  double bound;    // sqrt(8 epsilon)
};

// Requires 0 <= X <= 1 within 1e-10 and epsilon < 1.
DisturbanceCheck disturbance_check(const DensityMatrix& rho, const HermitianOperator& x);

// Gentle-measurement check for an ensemble {rho_a} with target outcomes
// phi(a) and weights P(a).
struct TenderCheck {
  std::vector<double> epsilons;              // 1 - Tr(rho_a D_phi(a))
  std::vector<double> instrument_distances;  // || phi(a) (x) rho_a - Delta(rho_a) ||_1
  std::vector<double> channel_distances;     // || rho_a - delta(rho_a) ||_1
  double max_epsilon = 0.0;
  double worst_case_bound = 0.0;  // sqrt(8 eps) + eps at max_epsilon
  double avg_epsilon = 0.0;
  double avg_instrument_distance = 0.0;
  double avg_channel_distance = 0.0;
  double average_bound = 0.0;  // sqrt(8 avg_eps) + avg_eps
};

// The instrument distance is evaluated on the expanded |B| * d block matrix.
TenderCheck tender_measurement_check(const std::vector<DensityMatrix>& states,
                                     const TenderInstrument& inst,
                                     const std::vector<std::size_t>& target_outcomes,
                                     const std::vector<double>& weights);

// ---------------------------------------------------------------------------
// Sequential decoding

struct SimConfig {
  Limits limits;
  WordStateMode decoder_states = WordStateMode::kEnsemble;
};

// Stage-i decoders (one POVM on Y^n per tuple of earlier senders' words),
// built on demand and cached. Safe to share between threads.
class SequentialDecoder {
 public:
  SequentialDecoder(const CqMacChannel& ch, const Prior& p, std::vector<Codebook> codebooks,
                    const SimConfig& cfg = {});

  std::size_t senders() const { return codebooks_.size(); }
  std::size_t block_length() const { return n_; }
  std::size_t output_dim() const { return block_.output_dim(); }
  const std::vector<Codebook>& codebooks() const { return codebooks_; }
  const BlockChannel& block() const { return block_; }

  // Signal state W^n for a message tuple.
  DensityMatrix signal(std::span<const std::size_t> messages) const;

  // Decoder for stage i given the earlier senders' decoded messages.
  // Outcome labels are sender i's message indices plus kFailureOutcome.
  const TenderInstrument& stage(std::size_t i, std::span<const std::size_t> prefix_messages) const;

 private:
  CqMacChannel ch_;
  Prior prior_;
  std::vector<Codebook> codebooks_;
  SimConfig cfg_;
  std::size_t n_;
  BlockChannel block_;
  // Per stage: the channel with later senders averaged out, as a block channel.
  std::vector<BlockChannel> reduced_blocks_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::size_t, std::vector<std::size_t>>,
                   std::shared_ptr<const TenderInstrument>>
      cache_;
};

struct DecodeResult {
  double success = 0.0;
  // Tr sigma_i after stage i (non-increasing).
  std::vector<double> chain_weights;
  // Tr(W^n D_{i, m_i | m_<i}) on the undisturbed signal.
  std::vector<double> stage_success;
  // || m_i (x) W^n - Delta_i(W^n) ||_1 on the undisturbed signal.
  std::vector<double> stage_disturbance;
};

// sigma_0 = W^n; sigma_i = sqrt(D) sigma_{i-1} sqrt(D) for the correct
// outcome of stage i given correct earlier outcomes; success = Tr sigma_s.
DecodeResult sequential_decode_exact(const SequentialDecoder& dec,
                                     std::span<const std::size_t> messages);

// Convenience overload building the decoder.
DecodeResult sequential_decode_exact(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                                     const Prior& p, std::span<const std::size_t> messages,
                                     const SimConfig& cfg = {});

struct ErrorMode {
  enum class Kind { kExhaustive, kMonteCarlo };
  Kind kind = Kind::kExhaustive;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  static ErrorMode exhaustive() { return {}; }
  static ErrorMode monte_carlo(std::size_t trials, std::uint64_t seed) {
    return {Kind::kMonteCarlo, trials, seed};
  }
};

struct StageReport {
  double avg_error = 0.0;          // 1 - mean Tr(W^n D_i)
  double avg_disturbance = 0.0;    // mean || m_i (x) W^n - Delta_i(W^n) ||_1
  double disturbance_bound = 0.0;  // sqrt(8 avg_error) + avg_error
  double avg_chain_weight = 0.0;   // mean Tr sigma_i
};

struct SimReport {
  std::size_t n = 0;
  std::vector<std::size_t> codebook_sizes;
  std::vector<double> rates;  // log2(L_i) / n
  std::string mode;
  std::string decoder_states;
  std::size_t tuples_evaluated = 0;
  std::size_t codebook_draws = 1;
  double avg_error = 0.0;
  std::vector<double> draw_errors;
  std::vector<StageReport> stages;
  std::uint64_t master_seed = 0;
  std::vector<std::vector<std::uint64_t>> codebook_seeds;  // [draw][sender]
  std::optional<std::uint64_t> trial_seed;
  double wall_clock_seconds = 0.0;
};

// Average over message tuples of 1 - success for one set of codebooks.
SimReport average_error(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                        const Prior& p, const ErrorMode& mode, const SimConfig& cfg = {});

struct SimSpec {
  std::size_t n = 1;
  std::vector<std::size_t> codebook_sizes;
  std::size_t draws = 1;
  std::uint64_t master_seed = 0;
  ErrorMode mode;  // mode.seed is ignored; trial seeds derive from master_seed
};

// Draws `draws` independent codebook sets from the priors and averages the
// per-draw average errors (random-coding average).
SimReport simulate(const CqMacChannel& ch, const Prior& p, const SimSpec& spec,
                   const SimConfig& cfg = {});

// Deterministic JSON; wall-clock time only when include_timing is set.
nlohmann::json to_json(const SimReport& r, bool include_timing = false);
std::string csv_header(std::size_t senders);
// n, L1..Ls, avg_error, stage errors; 12 significant digits.
std::string csv_row(const SimReport& r);

}  // namespace qmac
