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

#ifndef HLDSIM_MWPM_HPP_
#define HLDSIM_MWPM_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "hldsim/lattice.hpp"
#include "hldsim/types.hpp"

namespace hldsim {

struct MatchingEdge {
  int u;
  int v;
  int64_t weight;  // non-negative
};

struct MatchingGraph {
  int num_nodes = 0;
  std::vector<MatchingEdge> edges;
};

using MatchedPair = std::pair<int, int>;  // first < second

/// Exact minimum-weight perfect matching (Edmonds' blossom algorithm with
/// primal-dual updates, O(n^3)). Pairs are returned sorted.
///
/// Throws std::invalid_argument for an odd node count, negative weights or
/// out-of-range endpoints, and std::runtime_error when the graph has no
/// perfect matching.
std::vector<MatchedPair> min_weight_perfect_matching(const MatchingGraph& graph);

/// Sum of edge weights over `pairs`; the cheapest parallel edge is used.
int64_t matching_weight(const MatchingGraph& graph, const std::vector<MatchedPair>& pairs);

/// MWPM decoder for code-capacity noise. X-ancilla defects are matched with
/// each other or to the left/right boundary and corrected with Z chains;
/// Z-ancilla defects likewise with X chains towards the top/bottom boundary.
/// Edge weights are shortest path lengths counted in data qubits. Paths are
/// taken from a breadth-first search that expands data qubits in ascending
/// index order, so equal-length ties resolve to the lowest indices.
///
/// For d <= 5 every half-syndrome is solved once at construction and decodes
/// become table lookups.
class MwpmDecoder {
 public:
  explicit MwpmDecoder(const Layout& layout);

  ErrorConfig decode(const Syndrome& s) const;
  void decode_into(const Syndrome& s, ErrorConfig& out) const;

  /// Matching graph for the defects of one ancilla type. Nodes [0, k) are
  /// the defects in the given order and node k + i is the boundary copy of
  /// defect i.
  MatchingGraph build_graph(AncillaType type, const std::vector<int>& defects) const;

  /// Shortest data-qubit path between two ancillas of the same type, or from
  /// an ancilla to its nearest boundary when `b` is negative.
  int path_length(int a, int b) const;
  const std::vector<int>& path(int a, int b) const;

  const Layout& layout() const { return *layout_; }

 private:
  struct TypeGraph {
    std::vector<int> ancillas;                 // global ancilla indices
    std::vector<int> local;                    // global -> local, -1 if other type
    std::vector<std::vector<int>> dist;        // [i][j], j == n is the boundary
    std::vector<std::vector<std::vector<int>>> paths;
  };

  void build_type_graph(AncillaType type);
  void solve(AncillaType type, const std::vector<int>& defects, std::vector<uint8_t>& plane) const;

  const Layout* layout_;
  TypeGraph graphs_[2];
  // Lookup tables indexed by the half-syndrome bits; bit q of an entry marks
  // a flipped data qubit. Empty when the distance is too large.
  std::vector<uint64_t> table_[2];
};

ErrorConfig decode_mwpm(const Layout& layout, const Syndrome& s);

}  // namespace hldsim

#endif  // HLDSIM_MWPM_HPP_
