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

#ifndef HLDSIM_HWCOST_HPP_
#define HLDSIM_HWCOST_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hldsim/nn.hpp"

namespace hldsim {

// Structural cost of the combinatorial node datapath, in dimensionless
// single-bit counts. A node reduces its terms with a carry-save tree and one
// final carry-propagate stage:
//   input-layer node:  m rows of b AND bits (binary inputs)
//   hidden node:       m Baugh-Wooley b x b multipliers, m*b rows of b bits
//   output node:       as hidden, sign bit only (no nonlinearity)
// Full adders: (rows - 1) * b for rows >= 2. Tree depth counts 3:2 stages,
// n -> n - floor(n/3) until n <= 2. The nonlinearity is costed as a
// (b-1) x (b-1) squaring multiplier for SQNL and TanH, b gates for ReLU.
// Biases are folded into the final adder and not counted.

enum class NodeKind { kInput, kHidden, kOutput };

std::string_view to_string(NodeKind kind);

struct CostCounts {
  int64_t pp_bits = 0;
  int64_t fa_count = 0;
  int64_t tree_depth = 0;
  int64_t nl_bitops = 0;   // nonlinearity
  int64_t nl_depth = 0;
  int64_t bitops = 0;      // pp_bits + fa_count + nl_bitops

  int64_t critical_path() const { return tree_depth + nl_depth; }
  friend bool operator==(const CostCounts&, const CostCounts&) = default;
};

struct LayerCost {
  std::string name;
  NodeKind kind = NodeKind::kInput;
  int nodes = 0;
  int inputs = 0;    // m per node
  CostCounts node;   // one node
  CostCounts total;  // nodes * node, depths taken once
};

struct CostReport {
  int bits = 0;
  CostCounts total;  // counts summed over nodes, depths summed over layers
  std::vector<LayerCost> layers;
};

/// Carry-save stages needed to reduce `rows` operands to two.
int64_t csa_depth(int64_t rows);

/// Throws std::invalid_argument if m < 1 or b < 1.
CostCounts node_cost(int m, int b, Transfer fn, NodeKind kind);

/// Sums node costs over the two hidden layers and the two output nodes at
/// the effective bit width of cfg.quant. Rotation sharing does not change the
/// hardware. Throws std::invalid_argument without cfg.quant.
CostReport network_cost(const NetworkConfig& cfg);

struct ParetoPoint {
  double cost = 0.0;
  double performance = 0.0;
};

/// Indices (ascending) of the points not dominated by any other point, where
/// q dominates p if q.cost <= p.cost and q.performance >= p.performance with
/// at least one strict. Throws std::invalid_argument on NaN.
std::vector<std::size_t> pareto_front(std::span<const ParetoPoint> points);

}  // namespace hldsim

#endif  // HLDSIM_HWCOST_HPP_
