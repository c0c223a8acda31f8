// Copyright 2026 The hldsim Authors
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

#ifndef HLDSIM_NOISE_HPP_
#define HLDSIM_NOISE_HPP_

#include <cstdint>

#include "hldsim/lattice.hpp"
#include "hldsim/types.hpp"

namespace hldsim {

/// Streams that split one user seed into independent sample families.
enum class RngStream : uint64_t {
  kTrain = 1,
  kEval = 2,
  kInit = 3,
  kTest = 4,
};

/// Counter-based generator: output k is SplitMix64 finalisation of
/// key + (k+1) * golden_gamma. Any shot can be regenerated from
/// (seed, stream, shot) alone, so results do not depend on how shots are
/// scheduled across threads.
class ShotRng {
 public:
  ShotRng(uint64_t seed, RngStream stream, uint64_t shot);
  explicit ShotRng(uint64_t key) : key_(key) {}

  uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

uint64_t splitmix64(uint64_t x);

/// Code-capacity depolarizing noise: every data qubit independently gets X,
/// Y or Z with probability p/3 each. Throws std::invalid_argument unless
/// 0 <= p <= 1.
ErrorConfig sample_depolarizing(const Layout& layout, double p, ShotRng& rng);
void sample_depolarizing_into(const Layout& layout, double p, ShotRng& rng, ErrorConfig& out);

/// Parity of each ancilla over its adjacent data qubits, reading the Z plane
/// for X-ancillas and the X plane for Z-ancillas.
Syndrome compute_syndrome(const Layout& layout, const ErrorConfig& e);
void compute_syndrome_into(const Layout& layout, const ErrorConfig& e, Syndrome& out);

}  // namespace hldsim

#endif  // HLDSIM_NOISE_HPP_
