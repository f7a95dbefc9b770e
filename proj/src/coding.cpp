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

#include "qmac/coding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "qmac/errors.hpp"
#include "qmac/format.hpp"

namespace qmac {

namespace {

constexpr double kProbSumTol = 1e-9;
constexpr double kBranchFloor = 1e-15;
constexpr double kSqrtReproduceTol = 1e-9;

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void check_distribution(const std::vector<double>& p, const std::string& what) {
  if (p.empty()) throw ValidationError(what + ": empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError(what + ": negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw ValidationError(what + ": entries sum to " + std::to_string(sum));
  }
}

// Product saturating at SIZE_MAX.
std::size_t saturating_mul(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  return __builtin_mul_overflow(a, b, &out) ? std::numeric_limits<std::size_t>::max() : out;
}

std::size_t capped_pow(std::size_t base, std::size_t n, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < n; ++k) out = saturating_mul(out, base);
  if (out > cap) throw CapExceeded(what, out, cap);
  return out;
}

std::size_t capped_product(std::span<const std::size_t> xs, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (std::size_t x : xs) out = saturating_mul(out, x);
  if (out > cap) throw CapExceeded(what, out, cap);
  return out;
}

SenderSubset first_senders(std::size_t count) { return SenderSubset::full(count); }

void check_codebooks(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                     std::size_t n, std::optional<std::size_t> skip = std::nullopt) {
  if (codebooks.size() != ch.num_senders()) {
    throw ValidationError("expected " + std::to_string(ch.num_senders()) + " codebooks, got " +
                          std::to_string(codebooks.size()));
  }
  for (std::size_t j = 0; j < codebooks.size(); ++j) {
    if (skip && *skip == j) continue;
    const Codebook& c = codebooks[j];
    const std::string who = "codebook " + std::to_string(j + 1);
    if (c.sender != j) throw ValidationError(who + " is labelled for sender " + std::to_string(c.sender + 1));
    if (c.n != n) throw ValidationError(who + " has block length " + std::to_string(c.n));
    if (c.words.empty()) throw ValidationError(who + " is empty");
    for (const Word& w : c.words) {
      if (w.size() != n) throw ValidationError(who + " has a word of length " + std::to_string(w.size()));
      for (std::size_t x : w) {
        if (x >= ch.alphabets()[j]) throw ValidationError(who + " has letter " + std::to_string(x) + " out of range");
      }
    }
  }
}

void check_word(const Word& w, std::size_t n, std::size_t alphabet) {
  if (w.size() != n) throw ValidationError("word has length " + std::to_string(w.size()) + ", expected " + std::to_string(n));
  for (std::size_t x : w) {
    if (x >= alphabet) throw ValidationError("word letter " + std::to_string(x) + " out of range");
  }
}

// Product over positions of the letter states of `ch` (already reduced to
// senders 0..i) at (prefix words, word).
DensityMatrix reduced_word_state(const BlockChannel& reduced, std::span<const Word> prefix,
                                 const Word& word) {
  std::vector<Word> words(prefix.begin(), prefix.end());
  words.push_back(word);
  return reduced.state(words);
}

DensityMatrix empirical_word_state(const BlockChannel& block, const std::vector<Codebook>& codebooks,
                                   std::size_t i, std::span<const Word> prefix, const Word& word) {
  const std::size_t s = block.letter_channel().num_senders();
  std::vector<std::size_t> later_sizes;
  for (std::size_t j = i + 1; j < s; ++j) later_sizes.push_back(codebooks.at(j).size());
  const std::size_t count = radix_product(later_sizes);
  const auto d = static_cast<Eigen::Index>(block.output_dim());
  Matrix acc = Matrix::Zero(d, d);
  std::vector<Word> words(prefix.begin(), prefix.end());
  words.push_back(word);
  words.resize(s);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Letters pick = decode_tuple(idx, later_sizes);
    for (std::size_t k = 0; k < pick.size(); ++k) words[i + 1 + k] = codebooks[i + 1 + k].words[pick[k]];
    acc += block.state(words).matrix();
  }
  return DensityMatrix::unchecked(acc / static_cast<double>(count));
}

std::vector<double> uniform_weights(std::size_t k) {
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

}  // namespace

// ---------------------------------------------------------------------------
// Seeds and codebooks

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Codebook sample_codebook(std::size_t sender, const std::vector<double>& letter_probs,
                         std::size_t n, std::size_t size, std::uint64_t seed) {
  if (n == 0) throw ValidationError("sample_codebook: n must be >= 1");
  if (size == 0) throw ValidationError("sample_codebook: codebook size must be >= 1");
  check_distribution(letter_probs, "sample_codebook");
  std::vector<double> cdf(letter_probs.size());
  std::partial_sum(letter_probs.begin(), letter_probs.end(), cdf.begin());
  std::size_t last = 0;
  for (std::size_t x = 0; x < letter_probs.size(); ++x) {
    if (letter_probs[x] > 0.0) last = x;
  }

  std::mt19937_64 gen(seed);
  Codebook c{sender, n, {}, seed};
  c.words.reserve(size);
  for (std::size_t m = 0; m < size; ++m) {
    Word w(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double u = unit_uniform(gen);
      std::size_t x = last;
      for (std::size_t a = 0; a < cdf.size(); ++a) {
        if (u < cdf[a]) {
          x = a;
          break;
        }
      }
      w[k] = x;
    }
    c.words.push_back(std::move(w));
  }
  return c;
}

std::size_t codebook_size_for_rate(double rate, double delta, std::size_t n) {
  if (!std::isfinite(rate) || !std::isfinite(delta) || rate < 0.0 || delta < 0.0) {
    throw ValidationError("rate and delta must be finite and nonnegative");
  }
  if (n == 0) throw ValidationError("block length must be >= 1");
  const double exponent = static_cast<double>(n) * (rate - delta);
  if (exponent <= 0.0) return 1;
  if (exponent >= 62.0) {
    throw CapExceeded("codebook size", std::numeric_limits<std::size_t>::max(), std::size_t{1} << 62);
  }
  const double size = std::ceil(std::exp2(exponent) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(size));
}

std::size_t encode_word(const Word& w, std::size_t alphabet) {
  const std::vector<std::size_t> radices(w.size(), alphabet);
  return encode_tuple(w, radices);
}

// ---------------------------------------------------------------------------
// Word states

std::string to_string(WordStateMode m) {
  return m == WordStateMode::kEmpirical ? "empirical" : "ensemble";
}

WordStateMode word_state_mode_from_string(const std::string& s) {
  if (s == "empirical") return WordStateMode::kEmpirical;
  if (s == "ensemble") return WordStateMode::kEnsemble;
  throw ValidationError("unknown word-state mode '" + s + "' (expected empirical or ensemble)");
}

DensityMatrix conditional_word_state(const BlockChannel& block, const Prior& p,
                                     const std::vector<Codebook>& codebooks, std::size_t i,
                                     std::span<const Word> prefix, const Word& word,
                                     WordStateMode mode) {
  const CqMacChannel& ch = block.letter_channel();
  const std::size_t s = ch.num_senders();
  const std::size_t n = block.block_length();
  p.check_matches(ch);
  if (i >= s) throw ValidationError("sender index " + std::to_string(i + 1) + " out of range");
  if (prefix.size() != i) throw ValidationError("prefix must hold one word per earlier sender");
  for (std::size_t j = 0; j < i; ++j) check_word(prefix[j], n, ch.alphabets()[j]);
  check_word(word, n, ch.alphabets()[i]);

  if (mode == WordStateMode::kEnsemble || i + 1 == s) {
    if (i + 1 == s) return reduced_word_state(block, prefix, word);
    const CqMacChannel reduced = reduced_channel(ch, p, first_senders(i + 1));
    const BlockChannel rb(reduced, n);
    return reduced_word_state(rb, prefix, word);
  }
  for (std::size_t j = i + 1; j < s; ++j) {
    if (j >= codebooks.size()) throw ValidationError("missing codebook for sender " + std::to_string(j + 1));
    const Codebook& c = codebooks[j];
    if (c.words.empty()) throw ValidationError("codebook " + std::to_string(j + 1) + " is empty");
    for (const Word& w : c.words) check_word(w, n, ch.alphabets()[j]);
  }
  return empirical_word_state(block, codebooks, i, prefix, word);
}

CqEnsemble averaged_word_state(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                               const Prior& p, std::size_t i, const Word& word,
                               WordStateMode mode, const Limits& limits) {
  p.check_matches(ch);
  const std::size_t s = ch.num_senders();
  if (i >= s) throw ValidationError("sender index " + std::to_string(i + 1) + " out of range");
  const std::size_t n = word.size();
  if (n == 0) throw ValidationError("word must be nonempty");
  check_word(word, n, ch.alphabets()[i]);
  const BlockChannel block(ch, n, limits);
  const std::size_t cap = limits.max_block_dim;

  std::vector<std::size_t> label_spaces;
  for (std::size_t j = 0; j < i; ++j) {
    label_spaces.push_back(capped_pow(ch.alphabets()[j], n, cap, "word label space"));
  }

  if (mode == WordStateMode::kEmpirical) {
    if (codebooks.size() != s) {
      throw ValidationError("expected " + std::to_string(s) + " codebooks, got " + std::to_string(codebooks.size()));
    }
    check_codebooks(ch, codebooks, n, i);
  }

  std::vector<std::size_t> counts;
  if (mode == WordStateMode::kEmpirical) {
    for (std::size_t j = 0; j < i; ++j) counts.push_back(codebooks[j].size());
  } else {
    counts = label_spaces;
  }
  const std::size_t tuples = capped_product(counts, cap, "word-state label count");
  capped_product(std::vector<std::size_t>{tuples, block.output_dim()}, cap, "word-state dimension");

  std::map<Letters, std::pair<double, DensityMatrix>> merged;
  std::vector<std::size_t> letter_radix(n);
  for (std::size_t idx = 0; idx < tuples; ++idx) {
    const Letters pick = decode_tuple(idx, counts);
    std::vector<Word> prefix(i);
    Letters labels(i);
    double weight = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      if (mode == WordStateMode::kEmpirical) {
        prefix[j] = codebooks[j].words[pick[j]];
        weight /= static_cast<double>(codebooks[j].size());
      } else {
        std::fill(letter_radix.begin(), letter_radix.end(), ch.alphabets()[j]);
        prefix[j] = decode_tuple(pick[j], letter_radix);
        for (std::size_t x : prefix[j]) weight *= p.sender(j)[x];
      }
      labels[j] = encode_word(prefix[j], ch.alphabets()[j]);
    }
    if (weight < kAtomFloor) continue;
    auto it = merged.find(labels);
    if (it != merged.end()) {
      it->second.first += weight;
      continue;
    }
    merged.emplace(labels, std::make_pair(weight, conditional_word_state(block, p, codebooks, i, prefix, word, mode)));
  }
  std::vector<Atom> atoms;
  atoms.reserve(merged.size());
  for (auto& [labels, entry] : merged) atoms.push_back({labels, entry.first, std::move(entry.second)});
  return CqEnsemble(std::move(label_spaces), block.output_dim(), std::move(atoms));
}

// ---------------------------------------------------------------------------
// Measurements

Povm pgm_decoder(std::span<const LabeledState> states, std::span<const double> weights) {
  if (states.empty()) throw ValidationError("pgm_decoder: empty state list");
  const std::size_t dim = states.front().state.dim();
  std::vector<double> w;
  if (weights.empty()) {
    w = uniform_weights(states.size());
  } else {
    if (weights.size() != states.size()) throw ValidationError("pgm_decoder: weight count mismatch");
    w.assign(weights.begin(), weights.end());
    check_distribution(w, "pgm_decoder weights");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix avg = Matrix::Zero(d, d);
  for (std::size_t c = 0; c < states.size(); ++c) {
    if (states[c].state.dim() != dim) throw ValidationError("pgm_decoder: states differ in dimension");
    if (states[c].label == kFailureOutcome) throw ValidationError("pgm_decoder: reserved label");
    avg += w[c] * states[c].state.matrix();
  }
  const SupportInverseSqrt sis = support_inverse_sqrt(HermitianOperator::symmetrized(avg));
  const Matrix& t = sis.inv_sqrt.matrix();
  std::vector<PovmElement> elements;
  elements.reserve(states.size() + 1);
  for (std::size_t c = 0; c < states.size(); ++c) {
    elements.push_back({states[c].label, HermitianOperator::symmetrized(t * (w[c] * states[c].state.matrix()) * t)});
  }
  elements.push_back({kFailureOutcome, HermitianOperator::symmetrized(Matrix::Identity(d, d) - sis.support.matrix())});
  return Povm(dim, std::move(elements));
}

TenderInstrument::TenderInstrument(Povm povm) : povm_(std::move(povm)) {
  sqrt_elements_.reserve(povm_.size());
  for (const auto& el : povm_.elements()) {
    HermitianOperator r = op_sqrt(el.op);
    if (max_abs_entry(r.matrix() * r.matrix() - el.op.matrix()) > kSqrtReproduceTol) {
      throw DomainError("tender instrument: square root does not reproduce the POVM element");
    }
    sqrt_elements_.push_back(std::move(r));
  }
}

Matrix TenderInstrument::branch(std::size_t k, const Matrix& x) const {
  const Matrix& r = sqrt_elements_.at(k).matrix();
  return r * x * r;
}

Matrix TenderInstrument::apply_channel(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < size(); ++k) out += branch(k, x);
  return out;
}

std::vector<Branch> tender_apply(const TenderInstrument& inst, const DensityMatrix& rho) {
  if (rho.dim() != inst.povm().dim()) {
    throw ValidationError("tender_apply: state dimension " + std::to_string(rho.dim()) +
                          " does not match POVM dimension " + std::to_string(inst.povm().dim()));
  }
  std::vector<Branch> out;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const Matrix b = inst.branch(k, rho.matrix());
    const double prob = real_trace(b);
    if (prob <= kBranchFloor) continue;
    out.push_back({inst.povm().element(k).outcome, prob, DensityMatrix::unchecked(b / prob)});
  }
  return out;
}

DisturbanceCheck disturbance_check(const DensityMatrix& rho, const HermitianOperator& x) {
  if (rho.dim() != x.dim()) throw ValidationError("disturbance_check: dimension mismatch");
  const Eigensystem es = eig_hermitian(x);
  const double lo = es.eigenvalues(0);
  const double hi = es.eigenvalues(es.eigenvalues.size() - 1);
  if (lo < -kPsdTol || hi > 1.0 + kPsdTol) {
    throw DomainError("disturbance_check: X must satisfy 0 <= X <= 1");
  }
  const double eps = std::max(0.0, 1.0 - trace_product(rho.matrix(), x.matrix()));
  if (eps >= 1.0) throw DomainError("disturbance_check: Tr(rho X) must be positive");
  const Matrix r = op_sqrt(x).matrix();
  const double lhs = trace_norm(HermitianOperator::symmetrized(rho.matrix() - r * rho.matrix() * r));
  return {eps, lhs, std::sqrt(8.0 * eps)};
}

TenderCheck tender_measurement_check(const std::vector<DensityMatrix>& states,
                                     const TenderInstrument& inst,
                                     const std::vector<std::size_t>& target_outcomes,
                                     const std::vector<double>& weights) {
  if (states.empty()) throw ValidationError("tender_measurement_check: empty ensemble");
  if (target_outcomes.size() != states.size() || weights.size() != states.size()) {
    throw ValidationError("tender_measurement_check: size mismatch");
  }
  check_distribution(weights, "tender_measurement_check weights");
  const Povm& povm = inst.povm();
  const std::size_t d = povm.dim();
  const std::size_t b = povm.size();
  const auto bd = static_cast<Eigen::Index>(b * d);
  const auto dd = static_cast<Eigen::Index>(d);

  TenderCheck out;
  for (std::size_t a = 0; a < states.size(); ++a) {
    const Matrix& rho = states[a].matrix();
    if (states[a].dim() != d) throw ValidationError("tender_measurement_check: dimension mismatch");
    const std::size_t target = povm.index_of(target_outcomes[a]);
    if (target == povm.size()) throw ValidationError("tender_measurement_check: unknown target outcome");

    const double eps = std::max(0.0, 1.0 - trace_product(rho, povm.element(target).op.matrix()));
    Matrix diff = Matrix::Zero(bd, bd);
    for (std::size_t k = 0; k < b; ++k) {
      const auto off = static_cast<Eigen::Index>(k * d);
      diff.block(off, off, dd, dd) -= inst.branch(k, rho);
    }
    const auto toff = static_cast<Eigen::Index>(target * d);
    diff.block(toff, toff, dd, dd) += rho;

    out.epsilons.push_back(eps);
    out.instrument_distances.push_back(trace_norm(HermitianOperator::symmetrized(diff)));
    out.channel_distances.push_back(
        trace_norm(HermitianOperator::symmetrized(rho - inst.apply_channel(rho))));
    out.max_epsilon = std::max(out.max_epsilon, eps);
    out.avg_epsilon += weights[a] * eps;
    out.avg_instrument_distance += weights[a] * out.instrument_distances.back();
    out.avg_channel_distance += weights[a] * out.channel_distances.back();
  }
  out.worst_case_bound = std::sqrt(8.0 * out.max_epsilon) + out.max_epsilon;
  out.average_bound = std::sqrt(8.0 * out.avg_epsilon) + out.avg_epsilon;
  return out;
}

// ---------------------------------------------------------------------------
// Sequential decoding

SequentialDecoder::SequentialDecoder(const CqMacChannel& ch, const Prior& p,
                                     std::vector<Codebook> codebooks, const SimConfig& cfg)
    : ch_(ch),
      prior_(p),
      codebooks_(std::move(codebooks)),
      cfg_(cfg),
      n_(codebooks_.empty() ? 0 : codebooks_.front().n),
      block_(ch_, std::max<std::size_t>(n_, 1), cfg_.limits) {
  prior_.check_matches(ch_);
  if (n_ == 0) throw ValidationError("codebooks must have block length >= 1");
  check_codebooks(ch_, codebooks_, n_);
  const std::size_t s = ch_.num_senders();
  for (std::size_t i = 0; i < s; ++i) {
    if (i + 1 == s) {
      reduced_blocks_.push_back(block_);
    } else {
      reduced_blocks_.emplace_back(reduced_channel(ch_, prior_, first_senders(i + 1)), n_, cfg_.limits);
    }
  }
}

DensityMatrix SequentialDecoder::signal(std::span<const std::size_t> messages) const {
  if (messages.size() != senders()) throw ValidationError("need one message per sender");
  std::vector<Word> words;
  for (std::size_t i = 0; i < senders(); ++i) {
    if (messages[i] >= codebooks_[i].size()) {
      throw ValidationError("message " + std::to_string(messages[i]) + " out of range for sender " +
                            std::to_string(i + 1));
    }
    words.push_back(codebooks_[i].words[messages[i]]);
  }
  return block_.state(words);
}

const TenderInstrument& SequentialDecoder::stage(std::size_t i,
                                                 std::span<const std::size_t> prefix_messages) const {
  if (i >= senders()) throw ValidationError("stage index out of range");
  if (prefix_messages.size() != i) throw ValidationError("stage needs one decoded message per earlier sender");
  std::vector<Word> prefix;
  std::vector<std::size_t> key;
  for (std::size_t j = 0; j < i; ++j) {
    if (prefix_messages[j] >= codebooks_[j].size()) throw ValidationError("decoded message out of range");
    prefix.push_back(codebooks_[j].words[prefix_messages[j]]);
    key.push_back(encode_word(prefix.back(), ch_.alphabets()[j]));
  }
  auto cache_key = std::make_pair(i, key);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(cache_key);
    if (it != cache_.end()) return *it->second;
  }

  const Codebook& own = codebooks_[i];
  std::vector<LabeledState> states;
  states.reserve(own.size());
  for (std::size_t m = 0; m < own.size(); ++m) {
    if (cfg_.decoder_states == WordStateMode::kEnsemble) {
      states.push_back({m, reduced_word_state(reduced_blocks_[i], prefix, own.words[m])});
    } else {
      states.push_back({m, empirical_word_state(block_, codebooks_, i, prefix, own.words[m])});
    }
  }
  auto inst = std::make_shared<const TenderInstrument>(pgm_decoder(states));

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(std::move(cache_key), std::move(inst));
  return *it->second;
}

DecodeResult sequential_decode_exact(const SequentialDecoder& dec,
                                     std::span<const std::size_t> messages) {
  const DensityMatrix w = dec.signal(messages);
  const std::size_t s = dec.senders();
  DecodeResult out;
  Matrix sigma = w.matrix();
  for (std::size_t i = 0; i < s; ++i) {
    const TenderInstrument& inst = dec.stage(i, messages.subspan(0, i));
    const std::size_t k = inst.povm().index_of(messages[i]);
    sigma = inst.branch(k, sigma);
    out.chain_weights.push_back(real_trace(sigma));

    const double hit = trace_product(w.matrix(), inst.povm().element(k).op.matrix());
    const Matrix kept = inst.branch(k, w.matrix());
    const double stay = trace_norm(HermitianOperator::symmetrized(w.matrix() - kept));
    out.stage_success.push_back(hit);
    out.stage_disturbance.push_back(stay + std::max(0.0, 1.0 - hit));
  }
  out.success = out.chain_weights.back();
  return out;
}

DecodeResult sequential_decode_exact(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                                     const Prior& p, std::span<const std::size_t> messages,
                                     const SimConfig& cfg) {
  const SequentialDecoder dec(ch, p, codebooks, cfg);
  return sequential_decode_exact(dec, messages);
}

namespace {

struct Accumulator {
  std::size_t count = 0;
  double error = 0.0;
  std::vector<double> stage_error, disturbance, chain;

  explicit Accumulator(std::size_t s) : stage_error(s, 0.0), disturbance(s, 0.0), chain(s, 0.0) {}

  void add(const DecodeResult& r) {
    ++count;
    error += 1.0 - r.success;
    for (std::size_t i = 0; i < stage_error.size(); ++i) {
      stage_error[i] += 1.0 - r.stage_success[i];
      disturbance[i] += r.stage_disturbance[i];
      chain[i] += r.chain_weights[i];
    }
  }
};

std::vector<StageReport> finish_stages(const Accumulator& acc) {
  std::vector<StageReport> out;
  const auto c = static_cast<double>(acc.count);
  for (std::size_t i = 0; i < acc.stage_error.size(); ++i) {
    StageReport st;
    st.avg_error = std::clamp(acc.stage_error[i] / c, 0.0, 1.0);
    st.avg_disturbance = acc.disturbance[i] / c;
    st.disturbance_bound = std::sqrt(8.0 * st.avg_error) + st.avg_error;
    st.avg_chain_weight = std::clamp(acc.chain[i] / c, 0.0, 1.0);
    out.push_back(st);
  }
  return out;
}

std::vector<double> rates_of(const std::vector<std::size_t>& sizes, std::size_t n) {
  std::vector<double> r;
  for (std::size_t l : sizes) r.push_back(std::log2(static_cast<double>(l)) / static_cast<double>(n));
  return r;
}

}  // namespace

SimReport average_error(const CqMacChannel& ch, const std::vector<Codebook>& codebooks,
                        const Prior& p, const ErrorMode& mode, const SimConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const SequentialDecoder dec(ch, p, codebooks, cfg);
  const std::size_t s = dec.senders();
  std::vector<std::size_t> sizes;
  for (const auto& c : codebooks) sizes.push_back(c.size());

  SimReport rep;
  rep.n = dec.block_length();
  rep.codebook_sizes = sizes;
  rep.rates = rates_of(sizes, rep.n);
  rep.decoder_states = to_string(cfg.decoder_states);
  std::vector<std::uint64_t> seeds;
  for (const auto& c : codebooks) seeds.push_back(c.seed);
  rep.codebook_seeds.push_back(seeds);

  Accumulator acc(s);
  if (mode.kind == ErrorMode::Kind::kExhaustive) {
    rep.mode = "exhaustive";
    const std::size_t cap = cfg.limits.max_exhaustive_tuples;
    const std::size_t total = capped_product(sizes, cap, "exhaustive message tuples");
    for (std::size_t idx = 0; idx < total; ++idx) {
      const Letters m = decode_tuple(idx, sizes);
      acc.add(sequential_decode_exact(dec, m));
    }
  } else {
    rep.mode = "monte_carlo";
    if (mode.trials == 0) throw ValidationError("monte_carlo mode needs trials >= 1");
    rep.trial_seed = mode.seed;
    std::mt19937_64 gen(mode.seed);
    Letters m(s);
    for (std::size_t t = 0; t < mode.trials; ++t) {
      for (std::size_t i = 0; i < s; ++i) {
        const auto l = static_cast<double>(sizes[i]);
        m[i] = std::min(sizes[i] - 1, static_cast<std::size_t>(unit_uniform(gen) * l));
      }
      acc.add(sequential_decode_exact(dec, m));
    }
  }
  rep.tuples_evaluated = acc.count;
  rep.avg_error = std::clamp(acc.error / static_cast<double>(acc.count), 0.0, 1.0);
  rep.draw_errors = {rep.avg_error};
  rep.stages = finish_stages(acc);
  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SimReport simulate(const CqMacChannel& ch, const Prior& p, const SimSpec& spec,
                   const SimConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  p.check_matches(ch);
  const std::size_t s = ch.num_senders();
  if (spec.n == 0) throw ValidationError("block length must be >= 1");
  if (spec.draws == 0) throw ValidationError("need at least one codebook draw");
  if (spec.codebook_sizes.size() != s) {
    throw ValidationError("need " + std::to_string(s) + " codebook sizes, got " +
                          std::to_string(spec.codebook_sizes.size()));
  }
  for (std::size_t l : spec.codebook_sizes) {
    if (l == 0) throw ValidationError("codebook sizes must be >= 1");
  }

  // Stream layout: draw d uses streams 64 d + i for sender i's codebook and
  // 64 d + 63 for its Monte Carlo trials.
  SimReport rep;
  rep.n = spec.n;
  rep.codebook_sizes = spec.codebook_sizes;
  rep.rates = rates_of(spec.codebook_sizes, spec.n);
  rep.decoder_states = to_string(cfg.decoder_states);
  rep.codebook_draws = spec.draws;
  rep.master_seed = spec.master_seed;
  rep.mode = spec.mode.kind == ErrorMode::Kind::kExhaustive ? "exhaustive" : "monte_carlo";

  std::vector<StageReport> stage_sum(s);
  double total = 0.0;
  for (std::size_t d = 0; d < spec.draws; ++d) {
    std::vector<Codebook> books;
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < s; ++i) {
      const std::uint64_t seed = split_seed(spec.master_seed, 64 * d + i);
      seeds.push_back(seed);
      books.push_back(sample_codebook(i, p.sender(i), spec.n, spec.codebook_sizes[i], seed));
    }
    ErrorMode mode = spec.mode;
    if (mode.kind == ErrorMode::Kind::kMonteCarlo) {
      mode.seed = split_seed(spec.master_seed, 64 * d + 63);
      if (d == 0) rep.trial_seed = mode.seed;
    }
    const SimReport one = average_error(ch, books, p, mode, cfg);
    rep.codebook_seeds.push_back(seeds);
    rep.draw_errors.push_back(one.avg_error);
    rep.tuples_evaluated += one.tuples_evaluated;
    total += one.avg_error;
    for (std::size_t i = 0; i < s; ++i) {
      stage_sum[i].avg_error += one.stages[i].avg_error;
      stage_sum[i].avg_disturbance += one.stages[i].avg_disturbance;
      stage_sum[i].avg_chain_weight += one.stages[i].avg_chain_weight;
    }
  }
  const auto k = static_cast<double>(spec.draws);
  rep.avg_error = total / k;
  for (auto& st : stage_sum) {
    st.avg_error /= k;
    st.avg_disturbance /= k;
    st.avg_chain_weight /= k;
    st.disturbance_bound = std::sqrt(8.0 * st.avg_error) + st.avg_error;
  }
  rep.stages = std::move(stage_sum);
  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

nlohmann::json to_json(const SimReport& r, bool include_timing) {
  nlohmann::json stages = nlohmann::json::array();
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    const StageReport& st = r.stages[i];
    stages.push_back({{"sender", i + 1},
                      {"avg_error", st.avg_error},
                      {"avg_disturbance", st.avg_disturbance},
                      {"disturbance_bound", st.disturbance_bound},
                      {"avg_chain_weight", st.avg_chain_weight}});
  }
  nlohmann::json seeds = {{"master", r.master_seed}, {"codebooks", r.codebook_seeds}};
  if (r.trial_seed) seeds["trials"] = *r.trial_seed;
  nlohmann::json j = {{"n", r.n},
                      {"codebook_sizes", r.codebook_sizes},
                      {"rates", r.rates},
                      {"mode", r.mode},
                      {"decoder_states", r.decoder_states},
                      {"tuples_evaluated", r.tuples_evaluated},
                      {"codebook_draws", r.codebook_draws},
                      {"avg_error", r.avg_error},
                      {"draw_errors", r.draw_errors},
                      {"stages", stages},
                      {"seeds", seeds}};
  if (include_timing) j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

std::string csv_header(std::size_t senders) {
  std::string h = "n";
  for (std::size_t i = 1; i <= senders; ++i) h += ",L" + std::to_string(i);
  h += ",avg_error";
  for (std::size_t i = 1; i <= senders; ++i) h += ",stage" + std::to_string(i) + "_error";
  return h;
}

std::string csv_row(const SimReport& r) {
  std::string row = std::to_string(r.n);
  for (std::size_t l : r.codebook_sizes) row += "," + std::to_string(l);
  row += "," + format_number(r.avg_error);
  for (const auto& st : r.stages) row += "," + format_number(st.avg_error);
  return row;
}

}  // namespace qmac
