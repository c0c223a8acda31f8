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

#ifndef HLDSIM_PED_HPP_
#define HLDSIM_PED_HPP_

#include <vector>

#include "hldsim/lattice.hpp"
#include "hldsim/types.hpp"

namespace hldsim {

/// One XOR chain of the pure-error decoder.
///   type: 0 for chains rooted at X-ancillas, 1 for Z-ancillas.
///   side: -1 or +1, the half of the lattice the chain runs through.
///   id:   0 .. (d+1)/2 - 1.
struct ChainSpec {
  int type = 0;
  int side = 1;
  int id = 0;
};

struct ChainIndices {
  std::vector<int> data;      // q_0 .. q_{L-1}, centre to edge
  std::vector<int> ancillas;  // a_0 .. a_{L-1}
};

/// Closed-form data/ancilla indices of a chain, L = (d-1)/2 steps.
/// Throws std::invalid_argument on even d or out-of-range chain fields.
ChainIndices chain_indices(int d, const ChainSpec& chain);

/// All 2 * 2 * (d+1)/2 chains of a distance, in (type, side, id) order.
std::vector<ChainSpec> all_chains(int d);

/// Symmetric pure-error decoder. Every ancilla is routed to the boundary
/// along a fixed chain; defects propagate by XOR towards the edge:
///   E(q_0) = E(a_0),  E(q_i) = E(a_i) xor E(q_{i-1}).
/// X-rooted chains emit Z corrections, Z-rooted chains emit X corrections.
class PureErrorDecoder {
 public:
  explicit PureErrorDecoder(const Layout& layout);

  /// Throws std::invalid_argument on size mismatch.
  ErrorConfig decode(const Syndrome& s) const;
  /// Hot-path variant writing into a pre-sized config.
  void decode_into(const Syndrome& s, ErrorConfig& out) const;

  const Layout& layout() const { return *layout_; }

 private:
  struct Chain {
    bool writes_x;
    ChainIndices idx;
  };
  const Layout* layout_;
  std::vector<Chain> chains_;
};

/// Convenience wrapper around PureErrorDecoder.
ErrorConfig ped_decode(const Layout& layout, const Syndrome& s);

}  // namespace hldsim

#endif  // HLDSIM_PED_HPP_
