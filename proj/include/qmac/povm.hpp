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

#include <cstddef>
#include <limits>
#include <vector>

#include "qmac/operator.hpp"

namespace qmac {

// Outcome label reserved for "no codeword recognised".
inline constexpr std::size_t kFailureOutcome = std::numeric_limits<std::size_t>::max();

inline constexpr double kPovmCompletenessTol = 1e-8;

struct PovmElement {
  std::size_t outcome;
  HermitianOperator op;
};

// Elements are PSD within 1e-10 and sum to the identity within 1e-8
// (max-entry norm). Outcome labels are unique.
class Povm {
 public:
  Povm(std::size_t dim, std::vector<PovmElement> elements);

  // Projective measurement in the computational basis; outcome k <-> |k>.
  static Povm computational(std::size_t dim);
  // Single element: the identity, outcome 0.
  static Povm trivial(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<PovmElement>& elements() const { return elements_; }
  const PovmElement& element(std::size_t k) const { return elements_.at(k); }

  // Index of the element with this outcome label, or size() if absent.
  std::size_t index_of(std::size_t outcome) const;

  // Tr(rho D_k) for every element, in element order.
  std::vector<double> probabilities(const Matrix& rho) const;

 private:
  std::size_t dim_;
  std::vector<PovmElement> elements_;
};

// max-entry deviation of sum_k D_k from the identity.
double completeness_error(std::size_t dim, const std::vector<PovmElement>& elements);

}  // namespace qmac
