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

#include "qmac/random.hpp"

#include <cmath>
#include <numbers>

#include "qmac/errors.hpp"

namespace qmac {

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ValidationError("Rng::index: empty range");
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

std::size_t Rng::between(std::size_t lo, std::size_t hi) {
  if (hi < lo) throw ValidationError("Rng::between: empty range");
  return lo + index(hi - lo + 1);
}

Matrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

DensityMatrix random_density(Rng& rng, std::size_t d, std::size_t rank) {
  if (rank == 0) rank = d;
  const Matrix g = random_ginibre(rng, d, rank);
  const Matrix m = g * g.adjoint();
  return DensityMatrix::unchecked(m / m.trace().real());
}

DensityMatrix random_pure(Rng& rng, std::size_t d) {
  Eigen::VectorXcd v = random_ginibre(rng, d, 1).col(0);
  v.normalize();
  return DensityMatrix::pure(v);
}

DensityMatrix random_diagonal_density(Rng& rng, std::size_t d) {
  const std::vector<double> p = random_distribution(rng, d);
  return DensityMatrix::diagonal(p);
}

Matrix random_unitary(Rng& rng, std::size_t d) {
  const Matrix g = random_ginibre(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

HermitianOperator random_effect(Rng& rng, std::size_t d) {
  const Matrix u = random_unitary(rng, d);
  Eigen::VectorXd lambda(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < lambda.size(); ++k) lambda(k) = rng.uniform();
  return HermitianOperator::symmetrized(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
}

Povm random_povm(Rng& rng, std::size_t d, std::size_t k) {
  if (k == 0) throw ValidationError("random_povm: need at least one element");
  const auto dd = static_cast<Eigen::Index>(d);
  std::vector<Matrix> parts;
  Matrix sum = Matrix::Zero(dd, dd);
  std::size_t total_rank = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t rank = rng.between(1, d);
    if (j + 1 == k && total_rank + rank < d) rank = d - total_rank;
    total_rank += rank;
    const Matrix g = random_ginibre(rng, d, rank);
    parts.push_back(g * g.adjoint());
    sum += parts.back();
  }
  const HermitianOperator t = apply_spectral(HermitianOperator::symmetrized(sum),
                                             [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<PovmElement> elements;
  for (std::size_t j = 0; j < k; ++j) {
    elements.push_back({j, HermitianOperator::symmetrized(t.matrix() * parts[j] * t.matrix())});
  }
  return Povm(d, std::move(elements));
}

std::vector<double> random_distribution(Rng& rng, std::size_t k) {
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& x : p) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    x = -std::log(u);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

Prior random_prior(Rng& rng, const std::vector<std::size_t>& alphabets) {
  std::vector<std::vector<double>> per;
  for (std::size_t a : alphabets) per.push_back(random_distribution(rng, a));
  return Prior(std::move(per));
}

CqMacChannel random_channel(Rng& rng, const std::vector<std::size_t>& alphabets, std::size_t d) {
  const std::size_t tuples = radix_product(alphabets);
  std::vector<DensityMatrix> states;
  for (std::size_t t = 0; t < tuples; ++t) states.push_back(random_density(rng, d, rng.between(1, d)));
  return CqMacChannel(alphabets, d, std::move(states));
}

CqMacChannel random_diagonal_channel(Rng& rng, const std::vector<std::size_t>& alphabets,
                                     std::size_t d) {
  const std::size_t tuples = radix_product(alphabets);
  std::vector<DensityMatrix> states;
  for (std::size_t t = 0; t < tuples; ++t) states.push_back(random_diagonal_density(rng, d));
  return CqMacChannel(alphabets, d, std::move(states));
}

}  // namespace qmac
