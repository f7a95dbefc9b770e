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

// Classical-quantum multiple-access channels and the objects derived from
// them: channel states, reduced channels, n-block channels, and effective
// channels obtained by feeding fixed input states into a quantum map.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qmac/limits.hpp"
#include "qmac/operator.hpp"

namespace qmac {

using Letters = std::vector<std::size_t>;
using Word = std::vector<std::size_t>;

// Mixed-radix index <-> digit tuple; digit 0 is most significant.
std::size_t encode_tuple(std::span<const std::size_t> digits,
                         std::span<const std::size_t> radices);
Letters decode_tuple(std::size_t index, std::span<const std::size_t> radices);
std::size_t radix_product(std::span<const std::size_t> radices);

// "(1,0)" style rendering used in diagnostics.
std::string format_tuple(std::span<const std::size_t> digits);

// A subset J of senders, stored as a bitmask (bit i <-> sender i, zero
// based). Rendered 1-based in human output, as a decimal mask in files.
class SenderSubset {
 public:
  static constexpr std::size_t kMaxSenders = 31;

  constexpr SenderSubset() = default;
  constexpr explicit SenderSubset(std::uint32_t mask) : mask_(mask) {}

  static SenderSubset of(std::initializer_list<std::size_t> members);
  static SenderSubset full(std::size_t s);
  static SenderSubset single(std::size_t i) { return SenderSubset(1u << i); }

  std::uint32_t mask() const { return mask_; }
  bool empty() const { return mask_ == 0; }
  bool contains(std::size_t i) const { return (mask_ >> i) & 1u; }
  std::size_t size() const;
  std::vector<std::size_t> members() const;
  // Throws ValidationError if any member is >= s.
  void check_within(std::size_t s) const;

  SenderSubset complement(std::size_t s) const {
    return SenderSubset(full(s).mask_ & ~mask_);
  }
  SenderSubset operator|(SenderSubset o) const { return SenderSubset(mask_ | o.mask_); }
  SenderSubset operator&(SenderSubset o) const { return SenderSubset(mask_ & o.mask_); }
  bool operator==(const SenderSubset&) const = default;
  auto operator<=>(const SenderSubset&) const = default;

  // "{1,2}"
  std::string to_string() const;

 private:
  std::uint32_t mask_ = 0;
};

class CqMacChannel {
 public:
  // States are indexed by the joint letter tuple in mixed-radix order, sender
  // 0 most significant. Checks shapes and dimensions; the states themselves
  // are already validated DensityMatrix values.
  CqMacChannel(std::vector<std::size_t> alphabets, std::size_t output_dim,
               std::vector<DensityMatrix> states,
               std::vector<std::string> names = {});

  std::size_t num_senders() const { return alphabets_.size(); }
  const std::vector<std::size_t>& alphabets() const { return alphabets_; }
  std::size_t output_dim() const { return output_dim_; }
  std::size_t num_tuples() const { return states_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  const DensityMatrix& state(std::span<const std::size_t> letters) const;
  const DensityMatrix& state_at(std::size_t joint_index) const {
    return states_.at(joint_index);
  }
  const std::vector<DensityMatrix>& states() const { return states_; }

  std::size_t joint_index(std::span<const std::size_t> letters) const;
  Letters letters_of(std::size_t joint_index) const;

  // True when every pair of output states commutes.
  bool is_quasi_classical(double tol = 1e-10) const;

 private:
  std::vector<std::size_t> alphabets_;
  std::size_t output_dim_;
  std::vector<DensityMatrix> states_;
  std::vector<std::string> names_;
};

// Unvalidated channel description as read from a file.
struct RawChannel {
  std::vector<std::string> names;
  std::vector<std::size_t> alphabets;
  std::size_t output_dim = 0;
  std::map<Letters, Matrix> states;
};

// Returns the channel iff every invariant holds; otherwise throws
// ChannelValidationError listing every violation with its tuple.
CqMacChannel validate_channel(const RawChannel& raw);

// Independent per-sender input distributions.
class Prior {
 public:
  explicit Prior(std::vector<std::vector<double>> per_sender);

  static Prior uniform(std::span<const std::size_t> alphabets);

  std::size_t num_senders() const { return per_sender_.size(); }
  const std::vector<std::vector<double>>& per_sender() const { return per_sender_; }
  const std::vector<double>& sender(std::size_t i) const { return per_sender_.at(i); }

  // Product probability of a joint tuple.
  double prob(std::span<const std::size_t> letters) const;
  // Product probability restricted to members of J.
  double prob(std::span<const std::size_t> letters, SenderSubset j) const;

  // Throws ValidationError if the alphabet sizes differ.
  void check_matches(const CqMacChannel& ch) const;

 private:
  std::vector<std::vector<double>> per_sender_;
};

// Probabilities below this are dropped from ensembles.
inline constexpr double kAtomFloor = 1e-15;

struct Atom {
  Letters labels;
  double probability;
  DensityMatrix state;
};

// Sum_k p_k |labels_k><labels_k| (x) rho_k, a state that is block diagonal
// with respect to its classical registers.
class CqEnsemble {
 public:
  CqEnsemble(std::vector<std::size_t> label_spaces, std::size_t quantum_dim,
             std::vector<Atom> atoms);

  const std::vector<std::size_t>& label_spaces() const { return label_spaces_; }
  std::size_t arity() const { return label_spaces_.size(); }
  std::size_t quantum_dim() const { return quantum_dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // Pointer to the atom with these labels, or nullptr.
  const Atom* find(std::span<const std::size_t> labels) const;

  // Dimension of the expanded block-diagonal matrix.
  std::size_t dense_dim() const;
  // Block-diagonal dense matrix on (labels..., quantum); throws CapExceeded
  // if dense_dim() > max_dim.
  Matrix to_dense(std::size_t max_dim) const;

 private:
  std::vector<std::size_t> label_spaces_;
  std::size_t quantum_dim_;
  std::vector<Atom> atoms_;
};

// gamma = sum P1(x1)...Ps(xs) x1 (x) ... (x) xs (x) W_{x1...xs}.
CqEnsemble channel_state(const CqMacChannel& ch, const Prior& p);

// (P_{J^c} W): the channel seen by the senders in J when the others are
// averaged over their priors. Senders of the result are J's members in
// increasing order.
CqMacChannel reduced_channel(const CqMacChannel& ch, const Prior& p, SenderSubset j);

// Prior restricted to the senders in J, in increasing order.
Prior restrict_prior(const Prior& p, SenderSubset j);

// Relabels senders: sender k of the result is sender perm[k] of `ch`.
CqMacChannel permute_senders(const CqMacChannel& ch, std::span<const std::size_t> perm);
Prior permute_senders(const Prior& p, std::span<const std::size_t> perm);

// W^n evaluated lazily per word tuple. Construction only requires d^n to fit
// under limits.max_block_dim.
class BlockChannel {
 public:
  BlockChannel(const CqMacChannel& ch, std::size_t n, const Limits& limits = {});

  const CqMacChannel& letter_channel() const { return ch_; }
  std::size_t block_length() const { return n_; }
  std::size_t output_dim() const { return out_dim_; }

  // words[i] is sender i's n-letter word.
  DensityMatrix state(std::span<const Word> words) const;
  // Same, for letters already transposed to per-position joint tuples.
  DensityMatrix state_from_columns(std::span<const std::size_t> joint_indices) const;

  // Full table over all word tuples, senders' words encoded as integers.
  // Throws CapExceeded when prod|X_i|^n * d^n exceeds limits.max_block_dim.
  CqMacChannel materialize() const;

 private:
  CqMacChannel ch_;
  std::size_t n_;
  std::size_t out_dim_;
  Limits limits_;
};

BlockChannel block_channel(const CqMacChannel& ch, std::size_t n,
                           const Limits& limits = {});

// Completely positive map given by Kraus operators (out_dim x in_dim).
class KrausMap {
 public:
  KrausMap(std::vector<Matrix> kraus, std::size_t in_dim, std::size_t out_dim);

  // Choi matrix sum_ij |i><j| (x) phi(|i><j|), input factor first.
  static KrausMap from_choi(const Matrix& choi, std::size_t in_dim, std::size_t out_dim);
  static KrausMap identity(std::size_t dim);
  // rho -> Tr(rho) * 1/out_dim.
  static KrausMap completely_depolarizing(std::size_t in_dim, std::size_t out_dim);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  // max-entry deviation of sum K^dagger K from the identity.
  double trace_preservation_error() const;
  Matrix apply(const Matrix& rho) const;

 private:
  std::vector<Matrix> kraus_;
  std::size_t in_dim_;
  std::size_t out_dim_;
};

// Effective cq channel W_{a1...as} = phi(F1(a1) (x) ... (x) Fs(as)) for
// product input states.
CqMacChannel precompose_qq(const std::vector<std::vector<DensityMatrix>>& input_states,
                           const KrausMap& phi);

}  // namespace qmac
