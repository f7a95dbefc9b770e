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

#include "qmac/povm.hpp"

#include <set>
#include <sstream>

#include "qmac/errors.hpp"

namespace qmac {

double completeness_error(std::size_t dim, const std::vector<PovmElement>& elements) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : elements) sum += e.op.matrix();
  return max_abs_entry(sum - Matrix::Identity(d, d));
}

Povm::Povm(std::size_t dim, std::vector<PovmElement> elements)
    : dim_(dim), elements_(std::move(elements)) {
  if (dim_ == 0) throw ValidationError("POVM dimension must be >= 1");
  if (elements_.empty()) throw ValidationError("POVM needs at least one element");
  std::set<std::size_t> labels;
  for (const auto& e : elements_) {
    if (e.op.dim() != dim_) {
      throw ValidationError("POVM element has dimension " + std::to_string(e.op.dim()) +
                            ", expected " + std::to_string(dim_));
    }
    if (!labels.insert(e.outcome).second) throw ValidationError("duplicate POVM outcome label");
    const double lo = min_eigenvalue(e.op);
    if (lo < -kPsdTol) {
      std::ostringstream os;
      os << "POVM element is not positive semidefinite (min eigenvalue " << lo << ")";
      throw ValidationError(os.str());
    }
  }
  const double err = completeness_error(dim_, elements_);
  if (err > kPovmCompletenessTol) {
    std::ostringstream os;
    os << "POVM elements do not sum to the identity (max deviation " << err << ")";
    throw ValidationError(os.str());
  }
}

Povm Povm::computational(std::size_t dim) {
  std::vector<PovmElement> els;
  std::vector<double> diag(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    diag.assign(dim, 0.0);
    diag[k] = 1.0;
    els.push_back({k, HermitianOperator::diagonal(diag)});
  }
  return Povm(dim, std::move(els));
}

Povm Povm::trivial(std::size_t dim) {
  return Povm(dim, {{0, HermitianOperator::identity(dim)}});
}

std::size_t Povm::index_of(std::size_t outcome) const {
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k].outcome == outcome) return k;
  }
  return elements_.size();
}

std::vector<double> Povm::probabilities(const Matrix& rho) const {
  std::vector<double> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(trace_product(rho, e.op.matrix()));
  return out;
}

}  // namespace qmac
