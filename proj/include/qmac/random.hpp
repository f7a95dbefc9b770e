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

// Seeded generators for random states, measurements, channels and priors.
// Every draw is a fixed function of the seed (no std:: distributions, whose
// output is implementation-defined).

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qmac/channel.hpp"
#include "qmac/povm.hpp"

namespace qmac {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  // [0, 1) with 53 random bits.
  double uniform();
  // Standard normal (Box-Muller).
  double normal();
  // Uniform in [0, n).
  std::size_t index(std::size_t n);
  // Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi);

 private:
  std::mt19937_64 gen_;
};

// Complex Ginibre matrix with i.i.d. standard normal real and imaginary parts.
Matrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols);

// G G^dagger / Tr, with G of size d x rank (rank 0 means d).
DensityMatrix random_density(Rng& rng, std::size_t d, std::size_t rank = 0);
DensityMatrix random_pure(Rng& rng, std::size_t d);
DensityMatrix random_diagonal_density(Rng& rng, std::size_t d);
Matrix random_unitary(Rng& rng, std::size_t d);

// 0 <= X <= 1 with eigenvalues uniform in [0, 1] in a random basis.
HermitianOperator random_effect(Rng& rng, std::size_t d);

// k elements S^{-1/2} A_k S^{-1/2} from random PSD A_k; outcomes 0..k-1.
Povm random_povm(Rng& rng, std::size_t d, std::size_t k);

// Probability vector from normalised exponentials; strictly positive.
std::vector<double> random_distribution(Rng& rng, std::size_t k);
Prior random_prior(Rng& rng, const std::vector<std::size_t>& alphabets);

CqMacChannel random_channel(Rng& rng, const std::vector<std::size_t>& alphabets, std::size_t d);
// All output states diagonal in the computational basis.
CqMacChannel random_diagonal_channel(Rng& rng, const std::vector<std::size_t>& alphabets,
                                     std::size_t d);

}  // namespace qmac
