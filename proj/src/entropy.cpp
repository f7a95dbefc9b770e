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

#include "qmac/entropy.hpp"

#include <cmath>
#include <unordered_map>

#include "qmac/errors.hpp"

namespace qmac {

std::string SubsystemSelector::key() const {
  std::string k = std::to_string(classical.mask());
  if (include_quantum) k += "+Y";
  return k;
}

namespace {

void check_selector(const CqEnsemble& e, SubsystemSelector sel) {
  sel.classical.check_within(e.arity());
}

}  // namespace

CqEnsemble restrict(const CqEnsemble& e, SubsystemSelector sel) {
  if (sel.empty()) throw ValidationError("restrict: empty selector");
  check_selector(e, sel);
  const std::vector<std::size_t> kept = sel.classical.members();
  std::vector<std::size_t> spaces;
  for (std::size_t k : kept) spaces.push_back(e.label_spaces()[k]);
  const std::size_t qdim = sel.include_quantum ? e.quantum_dim() : 1;
  const auto qd = static_cast<Eigen::Index>(qdim);

  struct Acc {
    Letters labels;
    double prob = 0.0;
    Matrix weighted;
  };
  std::vector<Acc> acc;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (const auto& atom : e.atoms()) {
    Letters labels;
    for (std::size_t k : kept) labels.push_back(atom.labels[k]);
    const std::size_t key = encode_tuple(labels, spaces);
    auto [it, inserted] = slot.emplace(key, acc.size());
    if (inserted) acc.push_back({std::move(labels), 0.0, Matrix::Zero(qd, qd)});
    Acc& a = acc[it->second];
    a.prob += atom.probability;
    if (sel.include_quantum) {
      a.weighted += atom.probability * atom.state.matrix();
    } else {
      a.weighted(0, 0) += atom.probability;
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(acc.size());
  for (auto& a : acc) {
    if (a.prob < kAtomFloor) continue;
    atoms.push_back({std::move(a.labels), a.prob, DensityMatrix::unchecked(a.weighted / a.prob)});
  }
  return CqEnsemble(std::move(spaces), qdim, std::move(atoms));
}

double subsystem_entropy(const CqEnsemble& e, SubsystemSelector sel) {
  if (sel.empty()) return 0.0;
  const CqEnsemble r = restrict(e, sel);
  std::vector<double> probs;
  probs.reserve(r.atoms().size());
  double quantum = 0.0;
  for (const auto& a : r.atoms()) {
    probs.push_back(a.probability);
    if (r.quantum_dim() > 1) quantum += a.probability * entropy_bits(a.state);
  }
  return shannon_bits(probs) + quantum;
}

double dense_subsystem_entropy(const CqEnsemble& e, SubsystemSelector sel, std::size_t max_dim) {
  if (sel.empty()) return 0.0;
  check_selector(e, sel);
  const Matrix dense = e.to_dense(max_dim);
  std::vector<std::size_t> dims = e.label_spaces();
  dims.push_back(e.quantum_dim());
  std::vector<std::size_t> keep = sel.classical.members();
  if (sel.include_quantum) keep.push_back(e.arity());
  const Matrix reduced = partial_trace(dense, dims, keep);
  return entropy_bits(DensityMatrix::unchecked(reduced));
}

double conditional_entropy(const CqEnsemble& e, SubsystemSelector b, SubsystemSelector c) {
  if (!(b.classical & c.classical).empty() || (b.include_quantum && c.include_quantum)) {
    throw ValidationError("conditional_entropy: selectors " + b.key() + " and " + c.key() +
                          " overlap");
  }
  const SubsystemSelector bc{b.classical | c.classical, b.include_quantum || c.include_quantum};
  return subsystem_entropy(e, bc) - subsystem_entropy(e, c);
}

ConditionalMutualInfo mutual_information_detail(const CqEnsemble& e, SenderSubset j) {
  if (j.empty()) throw ValidationError("mutual_information: J must be nonempty");
  j.check_within(e.arity());
  const SenderSubset all = SenderSubset::full(e.arity());
  const SenderSubset rest = j.complement(e.arity());
  const auto y = SubsystemSelector::output();

  const double h_y_given_rest = conditional_entropy(e, y, SubsystemSelector::labels(rest));
  const double h_y_given_all = conditional_entropy(e, y, SubsystemSelector::labels(all));
  const double raw = h_y_given_rest - h_y_given_all;

  const double joint = subsystem_entropy(e, SubsystemSelector::labels(j)) +
                       subsystem_entropy(e, SubsystemSelector::labels_and_output(rest)) -
                       subsystem_entropy(e, SubsystemSelector::labels_and_output(all));

  const double bits = (raw < 0.0 && raw >= -kInfoTol) ? 0.0 : raw;
  return {bits, raw, joint};
}

double mutual_information(const CqEnsemble& e, SenderSubset j) {
  return mutual_information_detail(e, j).bits;
}

double conditional_channel_entropy(const std::vector<DensityMatrix>& v,
                                   const std::vector<double>& q) {
  if (v.size() != q.size()) {
    throw ValidationError("conditional_channel_entropy: " + std::to_string(v.size()) +
                          " states but " + std::to_string(q.size()) + " probabilities");
  }
  double h = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    if (q[a] > kAtomFloor) h += q[a] * entropy_bits(v[a]);
  }
  return h;
}

double holevo_bits(const std::vector<DensityMatrix>& v, const std::vector<double>& q) {
  if (v.empty() || v.size() != q.size()) throw ValidationError("holevo_bits: size mismatch");
  const auto d = static_cast<Eigen::Index>(v.front().dim());
  Matrix avg = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < v.size(); ++a) avg += q[a] * v[a].matrix();
  return entropy_bits(DensityMatrix::unchecked(avg)) - conditional_channel_entropy(v, q);
}

double mutual_information_via_reduced(const CqMacChannel& ch, const Prior& p, SenderSubset j) {
  p.check_matches(ch);
  if (j.empty()) throw ValidationError("mutual_information: J must be nonempty");
  j.check_within(ch.num_senders());
  const std::size_t s = ch.num_senders();
  const SenderSubset rest = j.complement(s);

  std::vector<double> joint(ch.num_tuples());
  for (std::size_t idx = 0; idx < ch.num_tuples(); ++idx) joint[idx] = p.prob(ch.letters_of(idx));
  const double h_w = conditional_channel_entropy(ch.states(), joint);

  double h_reduced = 0.0;
  if (rest.empty()) {
    const auto d = static_cast<Eigen::Index>(ch.output_dim());
    Matrix avg = Matrix::Zero(d, d);
    for (std::size_t idx = 0; idx < ch.num_tuples(); ++idx) avg += joint[idx] * ch.state_at(idx).matrix();
    h_reduced = entropy_bits(DensityMatrix::unchecked(avg));
  } else {
    // (P_J W) as a channel of the complement's letters.
    const CqMacChannel seen_by_rest = reduced_channel(ch, p, rest);
    const Prior rest_prior = restrict_prior(p, rest);
    std::vector<double> q(seen_by_rest.num_tuples());
    for (std::size_t idx = 0; idx < q.size(); ++idx) q[idx] = rest_prior.prob(seen_by_rest.letters_of(idx));
    h_reduced = conditional_channel_entropy(seen_by_rest.states(), q);
  }
  return h_reduced - h_w;
}

double check_subadditivity(const std::vector<DensityMatrix>& v1,
                           const std::vector<DensityMatrix>& v2,
                           const std::vector<std::vector<double>>& q) {
  if (v1.empty() || v2.empty()) throw ValidationError("check_subadditivity: empty channel");
  if (q.size() != v1.size()) throw ValidationError("check_subadditivity: q has wrong row count");
  std::vector<double> q1(v1.size(), 0.0), q2(v2.size(), 0.0);
  std::vector<Atom> atoms;
  for (std::size_t a1 = 0; a1 < v1.size(); ++a1) {
    if (q[a1].size() != v2.size()) throw ValidationError("check_subadditivity: q has wrong column count");
    for (std::size_t a2 = 0; a2 < v2.size(); ++a2) {
      const double w = q[a1][a2];
      q1[a1] += w;
      q2[a2] += w;
      atoms.push_back({{a1, a2}, w, DensityMatrix::unchecked(tensor(v1[a1].matrix(), v2[a2].matrix()))});
    }
  }
  const CqEnsemble joint({v1.size(), v2.size()}, v1.front().dim() * v2.front().dim(),
                         std::move(atoms));
  const SenderSubset both = SenderSubset::full(2);
  const double i_joint = subsystem_entropy(joint, SubsystemSelector::labels(both)) +
                         subsystem_entropy(joint, SubsystemSelector::output()) -
                         subsystem_entropy(joint, SubsystemSelector::labels_and_output(both));
  return i_joint - holevo_bits(v1, q1) - holevo_bits(v2, q2);
}

FanoCheck fano_bound_check(const CqEnsemble& e, const std::vector<std::vector<double>>& x_povm,
                           const Povm& y_povm) {
  if (e.arity() != 1) throw ValidationError("fano_bound_check: need exactly one classical register");
  if (x_povm.size() != y_povm.size()) {
    throw ValidationError("fano_bound_check: POVMs have " + std::to_string(x_povm.size()) +
                          " and " + std::to_string(y_povm.size()) + " elements");
  }
  if (y_povm.dim() != e.quantum_dim()) throw ValidationError("fano_bound_check: Y POVM dimension mismatch");
  const std::size_t nx = e.label_spaces()[0];
  std::vector<double> column(nx, 0.0);
  for (const auto& el : x_povm) {
    if (el.size() != nx) throw ValidationError("fano_bound_check: X POVM element has wrong size");
    for (std::size_t x = 0; x < nx; ++x) {
      if (el[x] < -kPsdTol) throw ValidationError("fano_bound_check: X POVM element not PSD");
      column[x] += el[x];
    }
  }
  for (double c : column) {
    if (std::abs(c - 1.0) > kPovmCompletenessTol) {
      throw ValidationError("fano_bound_check: X POVM does not sum to identity");
    }
  }
  double success = 0.0;
  for (std::size_t j = 0; j < x_povm.size(); ++j) {
    const Matrix& yj = y_povm.element(j).op.matrix();
    for (const auto& atom : e.atoms()) {
      const double xj = x_povm[j][atom.labels[0]];
      if (xj == 0.0) continue;
      success += atom.probability * xj * trace_product(atom.state.matrix(), yj);
    }
  }
  const double pe = 1.0 - success;
  const double lhs = conditional_entropy(e, SubsystemSelector::labels(SenderSubset::single(0)),
                                         SubsystemSelector::output());
  const double rhs = 1.0 + pe * std::log2(static_cast<double>(nx));
  return {lhs, rhs, pe};
}

InfoReport info_report(const CqEnsemble& e) {
  InfoReport r;
  const std::size_t s = e.arity();
  const std::uint32_t full = SenderSubset::full(s).mask();
  for (std::uint32_t m = 0; m <= full; ++m) {
    for (bool q : {false, true}) {
      const SubsystemSelector sel{SenderSubset(m), q};
      if (sel.empty()) continue;
      r.entropies[sel.key()] = subsystem_entropy(e, sel);
    }
  }
  for (std::uint32_t m = 1; m <= full; ++m) {
    const auto mi = mutual_information_detail(e, SenderSubset(m));
    r.mutual_informations[std::to_string(m)] = mi.bits;
    r.mutual_informations_raw[std::to_string(m)] = mi.raw;
  }
  return r;
}

nlohmann::json to_json(const InfoReport& r) {
  return {{"H", r.entropies}, {"I_cond", r.mutual_informations}, {"I_cond_raw", r.mutual_informations_raw}};
}

}  // namespace qmac
