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

// Entropies, conditional entropies and (conditional) mutual informations of
// classical-quantum ensembles. Subsystems are named by a set of classical
// registers plus, optionally, the quantum output; these always commute.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmac/channel.hpp"
#include "qmac/povm.hpp"

namespace qmac {

// Tolerance for "nonnegative" information quantities.
inline constexpr double kInfoTol = 1e-9;

struct SubsystemSelector {
  SenderSubset classical;
  bool include_quantum = true;

  static SubsystemSelector output() { return {SenderSubset{}, true}; }
  static SubsystemSelector labels(SenderSubset j) { return {j, false}; }
  static SubsystemSelector labels_and_output(SenderSubset j) { return {j, true}; }

  bool empty() const { return classical.empty() && !include_quantum; }
  // "<mask>" or "<mask>+Y", e.g. "3+Y" for X1 X2 Y and "0+Y" for Y alone.
  std::string key() const;
  bool operator==(const SubsystemSelector&) const = default;
};

// Sums out unselected labels (states probability-averaged within each
// remaining label) and traces out the quantum part unless selected. The
// result keeps the selected label registers in increasing order; without
// the quantum part its quantum_dim is 1.
CqEnsemble restrict(const CqEnsemble& e, SubsystemSelector sel);

// Block formula H(labels) + sum_l p(l) H(rho_l). The empty selector has
// entropy 0.
double subsystem_entropy(const CqEnsemble& e, SubsystemSelector sel);

// Same quantity from the expanded block-diagonal matrix: dense partial
// trace followed by one diagonalisation. Independent of restrict().
double dense_subsystem_entropy(const CqEnsemble& e, SubsystemSelector sel,
                               std::size_t max_dim = 4096);

// H(B|C) = H(BC) - H(C); B and C must not share a factor.
double conditional_entropy(const CqEnsemble& e, SubsystemSelector b, SubsystemSelector c);

// I(X(J) ^ Y | X(J^c)) in every form we can compute it.
struct ConditionalMutualInfo {
  double bits;                  // clamped at 0 when raw is in [-1e-9, 0)
  double raw;                   // H(Y|X(J^c)) - H(Y|X(all))
  double via_joint_entropies;   // H(X(J)) + H(Y X(J^c)) - H(X(all) Y)
};

ConditionalMutualInfo mutual_information_detail(const CqEnsemble& e, SenderSubset j);
double mutual_information(const CqEnsemble& e, SenderSubset j);

// H(P_J W | P_{J^c}) - H(W | P_{[s]}), computed from reduced channels and
// averaged output entropies without building an ensemble.
double mutual_information_via_reduced(const CqMacChannel& ch, const Prior& p, SenderSubset j);

// H(V|Q) = sum_a Q(a) H(V_a).
double conditional_channel_entropy(const std::vector<DensityMatrix>& v,
                                   const std::vector<double>& q);

// chi = H(sum_a Q(a) V_a) - H(V|Q).
double holevo_bits(const std::vector<DensityMatrix>& v, const std::vector<double>& q);

// I(A1A2 ^ Z1Z2) - I(A1 ^ Z1) - I(A2 ^ Z2) for the state
// sum Q(a1,a2) a1 (x) V1_{a1} (x) a2 (x) V2_{a2}. Never positive beyond
// round-off.
double check_subadditivity(const std::vector<DensityMatrix>& v1,
                           const std::vector<DensityMatrix>& v2,
                           const std::vector<std::vector<double>>& q);

struct FanoCheck {
  double lhs;                // H(X|Y)
  double rhs;                // 1 + P_e log2 |X|
  double error_probability;  // P_e
};

// e must have exactly one classical register X. x_povm[j][x] is the
// diagonal of the j-th element of a POVM on X; y_povm must have the same
// number of elements, paired by position.
FanoCheck fano_bound_check(const CqEnsemble& e, const std::vector<std::vector<double>>& x_povm,
                           const Povm& y_povm);

// All subsystem entropies and conditional mutual informations of a channel
// state with s classical registers.
struct InfoReport {
  std::map<std::string, double> entropies;
  std::map<std::string, double> mutual_informations;
  std::map<std::string, double> mutual_informations_raw;
};

InfoReport info_report(const CqEnsemble& channel_state);
nlohmann::json to_json(const InfoReport& r);

}  // namespace qmac
