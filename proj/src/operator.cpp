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

#include "qmac/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmac/errors.hpp"

namespace qmac {

double max_abs_entry(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw ValidationError("operator must be square and non-empty, got " +
                          std::to_string(m_.rows()) + "x" +
                          std::to_string(m_.cols()));
  }
  if (!all_finite(m_)) throw ValidationError("operator has non-finite entries");
  const double asym = max_abs_entry(m_ - m_.adjoint());
  if (asym > kHermitianTol) {
    std::ostringstream os;
    os << "operator is not Hermitian (max |a - a^dagger| = " << asym << ")";
    throw ValidationError(os.str());
  }
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& m) {
  Matrix h = 0.5 * (m + m.adjoint());
  return HermitianOperator(std::move(h), Unchecked{});
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Matrix::Identity(d, d), Unchecked{});
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  const auto d = static_cast<Eigen::Index>(entries.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = entries[i];
  return HermitianOperator(std::move(m));
}

DensityMatrix::DensityMatrix(Matrix m) : DensityMatrix(HermitianOperator(std::move(m))) {}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const double tr = real_trace(op_.matrix());
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os.precision(12);
    os << "trace " << tr << " != 1";
    throw ValidationError(os.str());
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -kPsdTol) {
    std::ostringstream os;
    os.precision(12);
    os << "not positive semidefinite (min eigenvalue " << lo << ")";
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::unchecked(const Matrix& m) {
  return DensityMatrix(HermitianOperator::symmetrized(m), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& ket) {
  const double norm = ket.norm();
  if (!(norm > 0.0)) throw ValidationError("zero ket");
  const Eigen::VectorXcd k = ket / norm;
  return DensityMatrix(HermitianOperator::symmetrized(k * k.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(Matrix(Matrix::Identity(d, d) / static_cast<double>(d)));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
  return DensityMatrix(HermitianOperator::diagonal(probs));
}

Eigensystem eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw DomainError("Hermitian eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOperator apply_spectral(const HermitianOperator& a,
                                 const std::function<double(double)>& f) {
  const Eigensystem es = eig_hermitian(a);
  RealVector fl(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(es.eigenvalues(i));
  const Matrix out = es.eigenvectors * fl.asDiagonal() * es.eigenvectors.adjoint();
  return HermitianOperator::symmetrized(out);
}

HermitianOperator op_sqrt(const HermitianOperator& a) {
  const Eigensystem es = eig_hermitian(a);
  RealVector root(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < root.size(); ++i) {
    const double l = es.eigenvalues(i);
    if (l < -kSqrtDomainTol) {
      std::ostringstream os;
      os << "square root of non-PSD operator (eigenvalue " << l << ")";
      throw DomainError(os.str());
    }
    root(i) = l > 0.0 ? std::sqrt(l) : 0.0;
  }
  const Matrix out = es.eigenvectors * root.asDiagonal() * es.eigenvectors.adjoint();
  return HermitianOperator::symmetrized(out);
}

SupportInverseSqrt support_inverse_sqrt(const HermitianOperator& a, double cutoff) {
  const Eigensystem es = eig_hermitian(a);
  const Eigen::Index d = es.eigenvalues.size();
  RealVector inv(d), proj(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double l = es.eigenvalues(i);
    const bool in_support = l > cutoff;
    inv(i) = in_support ? 1.0 / std::sqrt(l) : 0.0;
    proj(i) = in_support ? 1.0 : 0.0;
  }
  const Matrix& v = es.eigenvectors;
  return {HermitianOperator::symmetrized(v * inv.asDiagonal() * v.adjoint()),
          HermitianOperator::symmetrized(v * proj.asDiagonal() * v.adjoint())};
}

double shannon_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > kEntropyFloor) h -= p * std::log2(p);
  }
  return h;
}

double entropy_bits(const DensityMatrix& rho) {
  const Eigensystem es = eig_hermitian(rho.op());
  return shannon_bits(std::span<const double>(es.eigenvalues.data(),
                                              static_cast<std::size_t>(es.eigenvalues.size())));
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix tensor_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

Matrix partial_trace(const Matrix& a, std::span<const std::size_t> factor_dims,
                     std::span<const std::size_t> keep) {
  const std::size_t total = std::accumulate(factor_dims.begin(), factor_dims.end(),
                                            std::size_t{1}, std::multiplies<>());
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != total) {
    throw ValidationError("partial_trace: factor dimensions multiply to " +
                          std::to_string(total) + " but operator has dimension " +
                          std::to_string(a.rows()));
  }
  const std::size_t k = factor_dims.size();
  std::vector<bool> kept(k, false);
  for (std::size_t idx : keep) {
    if (idx >= k) throw ValidationError("partial_trace: keep index out of range");
    kept[idx] = true;
  }
  // Row-major strides: factor 0 is most significant.
  std::vector<std::size_t> stride(k, 1);
  for (std::size_t f = k; f-- > 1;) stride[f - 1] = stride[f] * factor_dims[f];

  std::size_t kept_dim = 1;
  for (std::size_t f = 0; f < k; ++f) {
    if (kept[f]) kept_dim *= factor_dims[f];
  }
  // Map each full index to (kept index, traced index).
  std::vector<std::size_t> kept_of(total), traced_of(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t kept_idx = 0, traced_idx = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t digit = (idx / stride[f]) % factor_dims[f];
      if (kept[f]) {
        kept_idx = kept_idx * factor_dims[f] + digit;
      } else {
        traced_idx = traced_idx * factor_dims[f] + digit;
      }
    }
    kept_of[idx] = kept_idx;
    traced_of[idx] = traced_idx;
  }
  const auto kd = static_cast<Eigen::Index>(kept_dim);
  Matrix out = Matrix::Zero(kd, kd);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      if (traced_of[r] != traced_of[c]) continue;
      out(static_cast<Eigen::Index>(kept_of[r]), static_cast<Eigen::Index>(kept_of[c])) +=
          a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

double trace_norm(const HermitianOperator& a) {
  const Eigensystem es = eig_hermitian(a);
  return es.eigenvalues.cwiseAbs().sum();
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double trace_product(const Matrix& a, const Matrix& b) {
  // Tr(ab) = sum_ij a_ij b_ji
  return (a.cwiseProduct(b.transpose())).sum().real();
}

double real_trace(const Matrix& a) { return a.trace().real(); }

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_product(a.matrix(), b.matrix());
}

}  // namespace qmac
