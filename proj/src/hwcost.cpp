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

#include "hldsim/hwcost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hldsim {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kInput:
      return "input";
    case NodeKind::kHidden:
      return "hidden";
    case NodeKind::kOutput:
      return "output";
  }
  return "?";
}

int64_t csa_depth(int64_t rows) {
  int64_t depth = 0;
  while (rows > 2) {
    rows -= rows / 3;
    ++depth;
  }
  return depth;
}

namespace {

int64_t adders(int64_t rows, int64_t width) { return rows >= 2 ? (rows - 1) * width : 0; }

}  // namespace

CostCounts node_cost(int m, int b, Transfer fn, NodeKind kind) {
  if (m < 1 || b < 1) throw std::invalid_argument("node cost needs m >= 1 and b >= 1");
  const int64_t mm = m;
  const int64_t bb = b;
  CostCounts c;
  const int64_t rows = kind == NodeKind::kInput ? mm : mm * bb;
  c.pp_bits = kind == NodeKind::kInput ? mm * bb : mm * bb * bb;
  c.fa_count = adders(rows, bb);
  c.tree_depth = csa_depth(rows);
  if (kind != NodeKind::kOutput) {
    if (fn == Transfer::kRelu) {
      c.nl_bitops = bb;
      c.nl_depth = 1;
    } else {
      const int64_t sq = bb - 1;
      c.nl_bitops = sq * sq + adders(sq, sq);
      c.nl_depth = csa_depth(sq);
    }
  }
  c.bitops = c.pp_bits + c.fa_count + c.nl_bitops;
  return c;
}

CostReport network_cost(const NetworkConfig& cfg) {
  cfg.validate();
  if (!cfg.quant) throw std::invalid_argument("network cost needs a bit width");
  cfg.quant->validate();
  const int b = cfg.quant->effective_bits();

  CostReport report;
  report.bits = b;
  auto add_layer = [&](std::string name, NodeKind kind, int nodes, int inputs) {
    LayerCost layer;
    layer.name = std::move(name);
    layer.kind = kind;
    layer.nodes = nodes;
    layer.inputs = inputs;
    layer.node = node_cost(inputs, b, cfg.transfer, kind);
    layer.total = layer.node;
    layer.total.pp_bits *= nodes;
    layer.total.fa_count *= nodes;
    layer.total.nl_bitops *= nodes;
    layer.total.bitops *= nodes;
    report.total.pp_bits += layer.total.pp_bits;
    report.total.fa_count += layer.total.fa_count;
    report.total.nl_bitops += layer.total.nl_bitops;
    report.total.bitops += layer.total.bitops;
    report.total.tree_depth += layer.node.tree_depth;
    report.total.nl_depth += layer.node.nl_depth;
    report.layers.push_back(std::move(layer));
  };
  add_layer("hidden1", NodeKind::kInput, cfg.n1, cfg.num_inputs());
  add_layer("hidden2", NodeKind::kHidden, cfg.n2, cfg.n1);
  add_layer("output", NodeKind::kOutput, 2, cfg.n2);
  return report;
}

std::vector<std::size_t> pareto_front(std::span<const ParetoPoint> points) {
  for (const auto& p : points) {
    if (std::isnan(p.cost) || std::isnan(p.performance)) {
      throw std::invalid_argument("pareto point is NaN");
    }
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].cost != points[b].cost) return points[a].cost < points[b].cost;
    return points[a].performance > points[b].performance;
  });

  std::vector<std::size_t> front;
  double best_cheaper = -std::numeric_limits<double>::infinity();
  bool have_cheaper = false;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    const double cost = points[order[i]].cost;
    const double top = points[order[i]].performance;
    while (j < order.size() && points[order[j]].cost == cost) {
      const double perf = points[order[j]].performance;
      if (perf == top && (!have_cheaper || perf > best_cheaper)) front.push_back(order[j]);
      ++j;
    }
    if (!have_cheaper || top > best_cheaper) best_cheaper = top;
    have_cheaper = true;
    i = j;
  }
  std::sort(front.begin(), front.end());
  return front;
}

}  // namespace hldsim
