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

namespace qmac {

// Size caps shared by every module. Dense matrices are materialised, so
// anything that would blow past these fails fast with CapExceeded.
struct Limits {
  // Largest dense operator dimension (d^n for block states, the expanded
  // block-diagonal size for dense entropy oracles).
  std::size_t max_block_dim = 4096;
  // all_corners enumerates s! permutations.
  std::size_t max_corner_senders = 6;
  // Message tuples evaluated in exhaustive simulation mode.
  std::size_t max_exhaustive_tuples = 4096;
  // Number of product priors a boundary sweep may enumerate.
  std::size_t max_sweep_points = 1u << 16;
  // Mixture components accepted by mixture_constraints; 0 means "s".
  std::size_t max_mixture_components = 0;
};

}  // namespace qmac
