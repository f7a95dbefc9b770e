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

// Dense complex Hermitian linear algebra used by every other module.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qmac {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
// Eigenvalues below this are treated as exact zeros in entropies.
inline constexpr double kEntropyFloor = 1e-12;
// op_sqrt rejects eigenvalues below this; between it and zero they are
// clamped as round-off.
inline constexpr double kSqrtDomainTol = 1e-6;

double max_abs_entry(const Matrix& a);
bool all_finite(const Matrix& a);

// A square, finite matrix equal to its adjoint within kHermitianTol.
class HermitianOperator {
 public:
  // Validates; throws ValidationError.
  explicit HermitianOperator(Matrix m);

  // Symmetrises (m + m^dagger)/2 without validating. For results of
  // operator-function computations that are Hermitian up to round-off.
  static HermitianOperator symmetrized(const Matrix& m);

  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator diagonal(std::span<const double> entries);

  const Matrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  struct Unchecked {};
  HermitianOperator(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

// Positive semidefinite Hermitian operator with unit trace.
class DensityMatrix {
 public:
  // Validates Hermitian, PSD (eigenvalues >= -1e-10) and trace 1 (1e-10).
  explicit DensityMatrix(Matrix m);
  explicit DensityMatrix(HermitianOperator op);

  // Skips the PSD/trace checks (symmetrises only). For convex combinations,
  // tensor products and partial traces of states that were already valid.
  static DensityMatrix unchecked(const Matrix& m);

  static DensityMatrix pure(const Eigen::VectorXcd& ket);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix diagonal(std::span<const double> probs);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  std::size_t dim() const { return op_.dim(); }

 private:
  struct Unchecked {};
  DensityMatrix(HermitianOperator op, Unchecked) : op_(std::move(op)) {}
  HermitianOperator op_;
};

struct Eigensystem {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary
};

Eigensystem eig_hermitian(const HermitianOperator& a);

// f applied to the spectrum: V f(Lambda) V^dagger, re-symmetrised.
HermitianOperator apply_spectral(const HermitianOperator& a,
                                 const std::function<double(double)>& f);

// Principal square root of a PSD operator. Eigenvalues in [-1e-6, 0) are
// clamped; anything more negative throws DomainError.
HermitianOperator op_sqrt(const HermitianOperator& a);

// Pseudo-inverse square root restricted to the support (eigenvalues above
// `cutoff`), together with the projector onto that support.
struct SupportInverseSqrt {
  HermitianOperator inv_sqrt;
  HermitianOperator support;
};
SupportInverseSqrt support_inverse_sqrt(const HermitianOperator& a,
                                        double cutoff = kEntropyFloor);

// Shannon entropy in bits of a probability vector; entries below 1e-12 are
// dropped.
double shannon_bits(std::span<const double> probs);

// von Neumann entropy in bits.
double entropy_bits(const DensityMatrix& rho);

// Kronecker product; dim(a)*dim(b).
Matrix tensor(const Matrix& a, const Matrix& b);
Matrix tensor_all(std::span<const Matrix> factors);

// Trace over all factors not in `keep`. factor_dims must multiply to dim(a);
// kept factors appear in increasing index order.
Matrix partial_trace(const Matrix& a, std::span<const std::size_t> factor_dims,
                     std::span<const std::size_t> keep);

double trace_norm(const HermitianOperator& a);

double min_eigenvalue(const HermitianOperator& a);

// Re Tr(a b); both assumed Hermitian so the trace is real.
double trace_product(const Matrix& a, const Matrix& b);

// Re Tr(a).
double real_trace(const Matrix& a);

// Fidelity-like overlap Tr(a b) used for orthogonality tests.
double overlap(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qmac
