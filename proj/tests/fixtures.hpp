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

#include <cmath>
#include <string>
#include <vector>

#include "qmac/channel.hpp"

namespace fixtures {

inline qmac::DensityMatrix ket0() { return qmac::DensityMatrix::diagonal(std::vector<double>{1.0, 0.0}); }
inline qmac::DensityMatrix ket1() { return qmac::DensityMatrix::diagonal(std::vector<double>{0.0, 1.0}); }
inline qmac::DensityMatrix ket_plus() {
  Eigen::VectorXcd v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return qmac::DensityMatrix::pure(v);
}

// Y = x1 + x2 on {0, 1, 2}.
inline qmac::CqMacChannel adder() {
  std::vector<qmac::DensityMatrix> states;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<double> p(3, 0.0);
      p[static_cast<std::size_t>(a + b)] = 1.0;
      states.push_back(qmac::DensityMatrix::diagonal(p));
    }
  }
  return qmac::CqMacChannel({2, 2}, 3, states);
}

// Single sender, outputs |0> and |+>.
inline qmac::CqMacChannel holevo_two_state() {
  return qmac::CqMacChannel({2}, 2, {ket0(), ket_plus()});
}

// W_{x1 x2} = |x1><x1| (x) |x2><x2|.
inline qmac::CqMacChannel orthogonal_noiseless() {
  std::vector<qmac::DensityMatrix> states;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<double> p(4, 0.0);
      p[static_cast<std::size_t>(2 * a + b)] = 1.0;
      states.push_back(qmac::DensityMatrix::diagonal(p));
    }
  }
  return qmac::CqMacChannel({2, 2}, 4, states);
}

// Every tuple maps to the same state.
inline qmac::CqMacChannel constant_channel(std::vector<std::size_t> alphabets = {2, 2}) {
  const std::size_t tuples = qmac::radix_product(alphabets);
  Eigen::VectorXcd v(2);
  v << std::cos(0.3), std::sin(0.3);
  return qmac::CqMacChannel(alphabets, 2, std::vector<qmac::DensityMatrix>(tuples, qmac::DensityMatrix::pure(v)));
}

inline std::string channel_path(const std::string& name) {
  return std::string(QMAC_CHANNEL_DIR) + "/" + name;
}

}  // namespace fixtures
