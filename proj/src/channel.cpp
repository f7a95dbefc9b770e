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

#include "qmac/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "qmac/errors.hpp"

namespace qmac {

std::size_t radix_product(std::span<const std::size_t> radices) {
  return std::accumulate(radices.begin(), radices.end(), std::size_t{1},
                         std::multiplies<>());
}

std::size_t encode_tuple(std::span<const std::size_t> digits,
                         std::span<const std::size_t> radices) {
  if (digits.size() != radices.size()) {
    throw ValidationError("tuple has " + std::to_string(digits.size()) +
                          " entries, expected " + std::to_string(radices.size()));
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] >= radices[k]) {
      throw ValidationError("tuple " + format_tuple(digits) + " out of range");
    }
    idx = idx * radices[k] + digits[k];
  }
  return idx;
}

Letters decode_tuple(std::size_t index, std::span<const std::size_t> radices) {
  Letters out(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    out[k] = index % radices[k];
    index /= radices[k];
  }
  return out;
}

std::string format_tuple(std::span<const std::size_t> digits) {
  std::string s = "(";
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(digits[k]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// SenderSubset

SenderSubset SenderSubset::of(std::initializer_list<std::size_t> members) {
  std::uint32_t m = 0;
  for (std::size_t i : members) {
    if (i >= kMaxSenders) throw ValidationError("sender index out of range");
    m |= 1u << i;
  }
  return SenderSubset(m);
}

SenderSubset SenderSubset::full(std::size_t s) {
  if (s > kMaxSenders) throw ValidationError("too many senders");
  return SenderSubset(s == 0 ? 0u : static_cast<std::uint32_t>((1ull << s) - 1));
}

std::size_t SenderSubset::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> SenderSubset::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kMaxSenders; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

void SenderSubset::check_within(std::size_t s) const {
  if ((mask_ & ~full(s).mask_) != 0) {
    throw ValidationError("subset " + to_string() + " not within " +
                          std::to_string(s) + " senders");
  }
}

std::string SenderSubset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : members()) {
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// CqMacChannel

CqMacChannel::CqMacChannel(std::vector<std::size_t> alphabets, std::size_t output_dim,
                           std::vector<DensityMatrix> states,
                           std::vector<std::string> names)
    : alphabets_(std::move(alphabets)),
      output_dim_(output_dim),
      states_(std::move(states)),
      names_(std::move(names)) {
  if (alphabets_.empty()) throw ValidationError("channel needs at least one sender");
  if (alphabets_.size() > SenderSubset::kMaxSenders) {
    throw ValidationError("too many senders");
  }
  for (std::size_t a : alphabets_) {
    if (a == 0) throw ValidationError("alphabet size must be >= 1");
  }
  if (output_dim_ == 0) throw ValidationError("output_dim must be >= 1");
  if (states_.size() != radix_product(alphabets_)) {
    throw ValidationError("channel table has " + std::to_string(states_.size()) +
                          " states, expected " + std::to_string(radix_product(alphabets_)));
  }
  for (const auto& st : states_) {
    if (st.dim() != output_dim_) throw ValidationError("state dimension mismatch");
  }
  if (names_.empty()) {
    for (std::size_t i = 0; i < alphabets_.size(); ++i) {
      names_.push_back("X" + std::to_string(i + 1));
    }
  }
  if (names_.size() != alphabets_.size()) {
    throw ValidationError("sender names do not match sender count");
  }
}

const DensityMatrix& CqMacChannel::state(std::span<const std::size_t> letters) const {
  return states_[joint_index(letters)];
}

std::size_t CqMacChannel::joint_index(std::span<const std::size_t> letters) const {
  return encode_tuple(letters, alphabets_);
}

Letters CqMacChannel::letters_of(std::size_t joint_index) const {
  return decode_tuple(joint_index, alphabets_);
}

bool CqMacChannel::is_quasi_classical(double tol) const {
  for (std::size_t a = 0; a < states_.size(); ++a) {
    for (std::size_t b = a + 1; b < states_.size(); ++b) {
      const Matrix& x = states_[a].matrix();
      const Matrix& y = states_[b].matrix();
      if (max_abs_entry(x * y - y * x) > tol) return false;
    }
  }
  return true;
}

CqMacChannel validate_channel(const RawChannel& raw) {
  std::vector<std::string> violations;
  if (raw.alphabets.empty()) violations.push_back("channel has no senders");
  if (raw.alphabets.size() > SenderSubset::kMaxSenders) {
    violations.push_back("too many senders (" + std::to_string(raw.alphabets.size()) + ")");
  }
  for (std::size_t i = 0; i < raw.alphabets.size(); ++i) {
    if (raw.alphabets[i] == 0) {
      violations.push_back("sender " + std::to_string(i + 1) + " has an empty alphabet");
    }
  }
  if (raw.output_dim == 0) violations.push_back("output_dim must be >= 1");
  if (!raw.names.empty() && raw.names.size() != raw.alphabets.size()) {
    violations.push_back("sender names do not match sender count");
  }
  if (!violations.empty()) throw ChannelValidationError(violations);

  const std::size_t total = radix_product(raw.alphabets);
  for (const auto& [letters, m] : raw.states) {
    bool in_range = letters.size() == raw.alphabets.size();
    for (std::size_t k = 0; in_range && k < letters.size(); ++k) {
      in_range = letters[k] < raw.alphabets[k];
    }
    if (!in_range) {
      violations.push_back("state " + format_tuple(letters) + " outside the alphabets");
    }
  }

  std::vector<DensityMatrix> states;
  states.reserve(total);
  const auto d = static_cast<Eigen::Index>(raw.output_dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Letters letters = decode_tuple(idx, raw.alphabets);
    const std::string tag = format_tuple(letters);
    const auto it = raw.states.find(letters);
    if (it == raw.states.end()) {
      violations.push_back("missing state " + tag);
      continue;
    }
    const Matrix& m = it->second;
    if (m.rows() != d || m.cols() != d) {
      violations.push_back("state " + tag + ": expected " + std::to_string(d) + "x" +
                           std::to_string(d) + ", got " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
      continue;
    }
    try {
      states.emplace_back(m);
    } catch (const ValidationError& e) {
      violations.push_back("state " + tag + ": " + e.what());
    }
  }
  if (!violations.empty()) throw ChannelValidationError(violations);
  return CqMacChannel(raw.alphabets, raw.output_dim, std::move(states), raw.names);
}

// ---------------------------------------------------------------------------
// Prior

Prior::Prior(std::vector<std::vector<double>> per_sender) : per_sender_(std::move(per_sender)) {
  for (std::size_t i = 0; i < per_sender_.size(); ++i) {
    const auto& v = per_sender_[i];
    if (v.empty()) throw ValidationError("prior for sender " + std::to_string(i + 1) + " is empty");
    double sum = 0.0;
    for (double x : v) {
      if (!std::isfinite(x) || x < 0.0) {
        throw ValidationError("prior for sender " + std::to_string(i + 1) +
                              " has a negative or non-finite entry");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kTraceTol) {
      std::ostringstream os;
      os.precision(12);
      os << "prior for sender " << i + 1 << " sums to " << sum;
      throw ValidationError(os.str());
    }
  }
}

Prior Prior::uniform(std::span<const std::size_t> alphabets) {
  std::vector<std::vector<double>> v;
  for (std::size_t a : alphabets) v.emplace_back(a, 1.0 / static_cast<double>(a));
  return Prior(std::move(v));
}

double Prior::prob(std::span<const std::size_t> letters) const {
  double p = 1.0;
  for (std::size_t i = 0; i < per_sender_.size(); ++i) p *= per_sender_[i].at(letters[i]);
  return p;
}

double Prior::prob(std::span<const std::size_t> letters, SenderSubset j) const {
  double p = 1.0;
  for (std::size_t i = 0; i < per_sender_.size(); ++i) {
    if (j.contains(i)) p *= per_sender_[i].at(letters[i]);
  }
  return p;
}

void Prior::check_matches(const CqMacChannel& ch) const {
  if (per_sender_.size() != ch.num_senders()) {
    throw ValidationError("prior has " + std::to_string(per_sender_.size()) +
                          " senders, channel has " + std::to_string(ch.num_senders()));
  }
  for (std::size_t i = 0; i < per_sender_.size(); ++i) {
    if (per_sender_[i].size() != ch.alphabets()[i]) {
      throw ValidationError("prior for sender " + std::to_string(i + 1) + " has " +
                            std::to_string(per_sender_[i].size()) + " entries, alphabet has " +
                            std::to_string(ch.alphabets()[i]));
    }
  }
}

// ---------------------------------------------------------------------------
// CqEnsemble

CqEnsemble::CqEnsemble(std::vector<std::size_t> label_spaces, std::size_t quantum_dim,
                       std::vector<Atom> atoms)
    : label_spaces_(std::move(label_spaces)), quantum_dim_(quantum_dim) {
  if (quantum_dim_ == 0) throw ValidationError("ensemble quantum_dim must be >= 1");
  for (std::size_t a : label_spaces_) {
    if (a == 0) throw ValidationError("ensemble label space of size 0");
  }
  double total = 0.0;
  std::unordered_map<std::size_t, std::size_t> seen;
  atoms_.reserve(atoms.size());
  for (auto& atom : atoms) {
    if (!std::isfinite(atom.probability) || atom.probability < 0.0) {
      throw ValidationError("ensemble atom with negative or non-finite probability");
    }
    if (atom.state.dim() != quantum_dim_) {
      throw ValidationError("ensemble atom state has dimension " +
                            std::to_string(atom.state.dim()) + ", expected " +
                            std::to_string(quantum_dim_));
    }
    const std::size_t key = encode_tuple(atom.labels, label_spaces_);
    total += atom.probability;
    if (atom.probability < kAtomFloor) continue;
    if (!seen.emplace(key, atoms_.size()).second) {
      throw ValidationError("duplicate ensemble atom " + format_tuple(atom.labels));
    }
    atoms_.push_back(std::move(atom));
  }
  if (std::abs(total - 1.0) > kTraceTol) {
    std::ostringstream os;
    os.precision(12);
    os << "ensemble probabilities sum to " << total;
    throw ValidationError(os.str());
  }
}

const Atom* CqEnsemble::find(std::span<const std::size_t> labels) const {
  for (const auto& a : atoms_) {
    if (std::equal(a.labels.begin(), a.labels.end(), labels.begin(), labels.end())) return &a;
  }
  return nullptr;
}

std::size_t CqEnsemble::dense_dim() const {
  return radix_product(label_spaces_) * quantum_dim_;
}

Matrix CqEnsemble::to_dense(std::size_t max_dim) const {
  const std::size_t dim = dense_dim();
  if (dim > max_dim) throw CapExceeded("dense ensemble dimension", dim, max_dim);
  const auto d = static_cast<Eigen::Index>(dim);
  const auto q = static_cast<Eigen::Index>(quantum_dim_);
  Matrix out = Matrix::Zero(d, d);
  for (const auto& a : atoms_) {
    const auto block = static_cast<Eigen::Index>(encode_tuple(a.labels, label_spaces_));
    out.block(block * q, block * q, q, q) = a.probability * a.state.matrix();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived objects

CqEnsemble channel_state(const CqMacChannel& ch, const Prior& p) {
  p.check_matches(ch);
  std::vector<Atom> atoms;
  atoms.reserve(ch.num_tuples());
  for (std::size_t idx = 0; idx < ch.num_tuples(); ++idx) {
    Letters letters = ch.letters_of(idx);
    const double w = p.prob(letters);
    atoms.push_back({std::move(letters), w, ch.state_at(idx)});
  }
  return CqEnsemble(ch.alphabets(), ch.output_dim(), std::move(atoms));
}

Prior restrict_prior(const Prior& p, SenderSubset j) {
  std::vector<std::vector<double>> v;
  for (std::size_t i : j.members()) v.push_back(p.sender(i));
  return Prior(std::move(v));
}

CqMacChannel reduced_channel(const CqMacChannel& ch, const Prior& p, SenderSubset j) {
  p.check_matches(ch);
  if (j.empty()) throw ValidationError("reduced_channel: J must be nonempty");
  j.check_within(ch.num_senders());
  const std::vector<std::size_t> members = j.members();
  std::vector<std::size_t> sub_alphabets;
  for (std::size_t i : members) sub_alphabets.push_back(ch.alphabets()[i]);

  const auto d = static_cast<Eigen::Index>(ch.output_dim());
  std::vector<Matrix> acc(radix_product(sub_alphabets), Matrix::Zero(d, d));
  const SenderSubset rest = j.complement(ch.num_senders());
  for (std::size_t idx = 0; idx < ch.num_tuples(); ++idx) {
    const Letters letters = ch.letters_of(idx);
    const double w = p.prob(letters, rest);
    if (w == 0.0) continue;
    Letters sub;
    for (std::size_t i : members) sub.push_back(letters[i]);
    acc[encode_tuple(sub, sub_alphabets)] += w * ch.state_at(idx).matrix();
  }
  std::vector<DensityMatrix> states;
  for (const auto& m : acc) states.push_back(DensityMatrix::unchecked(m));
  std::vector<std::string> names;
  for (std::size_t i : members) names.push_back(ch.names()[i]);
  return CqMacChannel(std::move(sub_alphabets), ch.output_dim(), std::move(states),
                      std::move(names));
}

namespace {

void check_permutation(std::span<const std::size_t> perm, std::size_t s) {
  if (perm.size() != s) throw ValidationError("permutation has wrong length");
  std::vector<bool> hit(s, false);
  for (std::size_t k : perm) {
    if (k >= s || hit[k]) throw ValidationError("not a permutation");
    hit[k] = true;
  }
}

}  // namespace

CqMacChannel permute_senders(const CqMacChannel& ch, std::span<const std::size_t> perm) {
  const std::size_t s = ch.num_senders();
  check_permutation(perm, s);
  std::vector<std::size_t> alph(s);
  std::vector<std::string> names(s);
  for (std::size_t k = 0; k < s; ++k) {
    alph[k] = ch.alphabets()[perm[k]];
    names[k] = ch.names()[perm[k]];
  }
  std::vector<DensityMatrix> states;
  states.reserve(ch.num_tuples());
  for (std::size_t idx = 0; idx < ch.num_tuples(); ++idx) {
    const Letters new_letters = decode_tuple(idx, alph);
    Letters old(s);
    for (std::size_t k = 0; k < s; ++k) old[perm[k]] = new_letters[k];
    states.push_back(ch.state(old));
  }
  return CqMacChannel(std::move(alph), ch.output_dim(), std::move(states), std::move(names));
}

Prior permute_senders(const Prior& p, std::span<const std::size_t> perm) {
  check_permutation(perm, p.num_senders());
  std::vector<std::vector<double>> v;
  for (std::size_t k : perm) v.push_back(p.sender(k));
  return Prior(std::move(v));
}

// ---------------------------------------------------------------------------
// BlockChannel

namespace {

std::size_t checked_pow(std::size_t base, std::size_t n, std::size_t cap, const char* what) {
  std::size_t out = 1;
  bool overflow = false;
  for (std::size_t k = 0; k < n && !overflow; ++k) {
    overflow = __builtin_mul_overflow(out, base, &out);
  }
  if (overflow) throw CapExceeded(what, std::numeric_limits<std::size_t>::max(), cap);
  if (out > cap) throw CapExceeded(what, out, cap);
  return out;
}

}  // namespace

BlockChannel::BlockChannel(const CqMacChannel& ch, std::size_t n, const Limits& limits)
    : ch_(ch), n_(n), out_dim_(0), limits_(limits) {
  if (n_ == 0) throw ValidationError("block length must be >= 1");
  out_dim_ = checked_pow(ch_.output_dim(), n_, limits_.max_block_dim, "block output dimension");
}

DensityMatrix BlockChannel::state(std::span<const Word> words) const {
  if (words.size() != ch_.num_senders()) {
    throw ValidationError("block state needs one word per sender");
  }
  std::vector<std::size_t> columns(n_);
  Letters letters(ch_.num_senders());
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i].size() != n_) {
        throw ValidationError("word for sender " + std::to_string(i + 1) + " has length " +
                              std::to_string(words[i].size()) + ", expected " +
                              std::to_string(n_));
      }
      letters[i] = words[i][k];
    }
    columns[k] = ch_.joint_index(letters);
  }
  return state_from_columns(columns);
}

DensityMatrix BlockChannel::state_from_columns(std::span<const std::size_t> joint_indices) const {
  if (joint_indices.size() != n_) throw ValidationError("need n joint letters");
  Matrix out = Matrix::Ones(1, 1);
  for (std::size_t idx : joint_indices) out = tensor(out, ch_.state_at(idx).matrix());
  return DensityMatrix::unchecked(out);
}

CqMacChannel BlockChannel::materialize() const {
  const std::size_t cap = limits_.max_block_dim;
  std::size_t table = 1;
  std::vector<std::size_t> word_alphabets;
  for (std::size_t a : ch_.alphabets()) {
    const std::size_t an = checked_pow(a, n_, cap, "block channel table size");
    word_alphabets.push_back(an);
    if (__builtin_mul_overflow(table, an, &table)) table = std::numeric_limits<std::size_t>::max();
  }
  std::size_t total = 0;
  if (__builtin_mul_overflow(table, out_dim_, &total)) total = std::numeric_limits<std::size_t>::max();
  if (total > cap) throw CapExceeded("block channel table size", total, cap);
  std::vector<DensityMatrix> states;
  states.reserve(table);
  std::vector<std::size_t> letter_radix(n_);
  for (std::size_t idx = 0; idx < table; ++idx) {
    const Letters word_codes = decode_tuple(idx, word_alphabets);
    std::vector<Word> words;
    for (std::size_t i = 0; i < word_codes.size(); ++i) {
      std::fill(letter_radix.begin(), letter_radix.end(), ch_.alphabets()[i]);
      words.push_back(decode_tuple(word_codes[i], letter_radix));
    }
    states.push_back(state(words));
  }
  return CqMacChannel(std::move(word_alphabets), out_dim_, std::move(states), ch_.names());
}

BlockChannel block_channel(const CqMacChannel& ch, std::size_t n, const Limits& limits) {
  return BlockChannel(ch, n, limits);
}

// ---------------------------------------------------------------------------
// Quantum-quantum precomposition

KrausMap::KrausMap(std::vector<Matrix> kraus, std::size_t in_dim, std::size_t out_dim)
    : kraus_(std::move(kraus)), in_dim_(in_dim), out_dim_(out_dim) {
  if (kraus_.empty()) throw ValidationError("Kraus map needs at least one operator");
  for (const auto& k : kraus_) {
    if (static_cast<std::size_t>(k.rows()) != out_dim_ ||
        static_cast<std::size_t>(k.cols()) != in_dim_) {
      throw ValidationError("Kraus operator has shape " + std::to_string(k.rows()) + "x" +
                            std::to_string(k.cols()) + ", expected " +
                            std::to_string(out_dim_) + "x" + std::to_string(in_dim_));
    }
    if (!all_finite(k)) throw ValidationError("Kraus operator has non-finite entries");
  }
}

KrausMap KrausMap::from_choi(const Matrix& choi, std::size_t in_dim, std::size_t out_dim) {
  if (static_cast<std::size_t>(choi.rows()) != in_dim * out_dim) {
    throw ValidationError("Choi matrix dimension does not match in_dim*out_dim");
  }
  const Eigensystem es = eig_hermitian(HermitianOperator(choi));
  std::vector<Matrix> kraus;
  const auto din = static_cast<Eigen::Index>(in_dim);
  const auto dout = static_cast<Eigen::Index>(out_dim);
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    const double l = es.eigenvalues(k);
    if (l < -kSqrtDomainTol) throw ValidationError("Choi matrix is not positive semidefinite");
    if (l <= kEntropyFloor) continue;
    Matrix op(dout, din);
    for (Eigen::Index i = 0; i < din; ++i) {
      for (Eigen::Index o = 0; o < dout; ++o) {
        op(o, i) = std::sqrt(l) * es.eigenvectors(i * dout + o, k);
      }
    }
    kraus.push_back(std::move(op));
  }
  if (kraus.empty()) throw ValidationError("Choi matrix is zero");
  return KrausMap(std::move(kraus), in_dim, out_dim);
}

KrausMap KrausMap::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return KrausMap({Matrix::Identity(d, d)}, dim, dim);
}

KrausMap KrausMap::completely_depolarizing(std::size_t in_dim, std::size_t out_dim) {
  // K_{o,i} = |o><i| / sqrt(out_dim)
  std::vector<Matrix> kraus;
  const double scale = 1.0 / std::sqrt(static_cast<double>(out_dim));
  for (std::size_t o = 0; o < out_dim; ++o) {
    for (std::size_t i = 0; i < in_dim; ++i) {
      Matrix k = Matrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
      k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) = scale;
      kraus.push_back(std::move(k));
    }
  }
  return KrausMap(std::move(kraus), in_dim, out_dim);
}

double KrausMap::trace_preservation_error() const {
  const auto d = static_cast<Eigen::Index>(in_dim_);
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  return max_abs_entry(sum - Matrix::Identity(d, d));
}

Matrix KrausMap::apply(const Matrix& rho) const {
  const auto d = static_cast<Eigen::Index>(out_dim_);
  Matrix out = Matrix::Zero(d, d);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

CqMacChannel precompose_qq(const std::vector<std::vector<DensityMatrix>>& input_states,
                           const KrausMap& phi) {
  constexpr double kTpTol = 1e-9;
  const double tp_err = phi.trace_preservation_error();
  if (tp_err > kTpTol) {
    std::ostringstream os;
    os << "map is not trace preserving (max |sum K^dagger K - 1| = " << tp_err << ")";
    throw ValidationError(os.str());
  }
  if (input_states.empty()) throw ValidationError("need at least one sender");
  std::vector<std::size_t> alphabets;
  std::size_t in_dim = 1;
  for (std::size_t i = 0; i < input_states.size(); ++i) {
    const auto& signals = input_states[i];
    if (signals.empty()) {
      throw ValidationError("sender " + std::to_string(i + 1) + " has no input states");
    }
    for (const auto& st : signals) {
      if (st.dim() != signals.front().dim()) {
        throw ValidationError("sender " + std::to_string(i + 1) +
                              " input states have different dimensions");
      }
    }
    alphabets.push_back(signals.size());
    in_dim *= signals.front().dim();
  }
  if (in_dim != phi.in_dim()) {
    throw ValidationError("map input dimension " + std::to_string(phi.in_dim()) +
                          " does not match product of sender dimensions " +
                          std::to_string(in_dim));
  }
  std::vector<DensityMatrix> states;
  const std::size_t total = radix_product(alphabets);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Letters letters = decode_tuple(idx, alphabets);
    Matrix joint = Matrix::Ones(1, 1);
    for (std::size_t i = 0; i < letters.size(); ++i) {
      joint = tensor(joint, input_states[i][letters[i]].matrix());
    }
    states.emplace_back(HermitianOperator::symmetrized(phi.apply(joint)));
  }
  return CqMacChannel(std::move(alphabets), phi.out_dim(), std::move(states));
}

}  // namespace qmac
