// Copyright 2026 The dyncool Authors
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

#include <cstdint>
#include <random>

#include "dyncool/operator_core.hpp"

namespace dyncool {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic generator for trial `index` of a run seeded with `seed`:
/// mt19937_64 seeded with splitmix64(splitmix64(seed) ^ splitmix64(index + 1)).
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Standard complex Gaussian with E|z|^2 = 1.
Complex complex_normal(Rng& rng);

/// Ginibre-derived Haar unitary (QR with phase fix).
UnitaryOperator random_unitary(Index dim, Rng& rng);

/// GUE draw rescaled so that its spectral norm is exactly `norm`.
HermitianOperator random_hermitian(Index dim, Rng& rng, double norm = 1.0);

/// Haar-random pure state.
StateVector random_state(Index dim, Rng& rng);

/// Projector onto `rank` Haar-random orthonormal directions.
Projector random_projector(Index dim, Index rank, Rng& rng);

}  // namespace dyncool
