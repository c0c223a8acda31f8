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

#include "hldsim/mwpm.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace hldsim {
namespace {

// Maximum-weight matching on a general graph after Galil (1986), in the
// primal-dual formulation popularised by J. van Rantwijk's mwmatching.
// Weights are doubled on entry so every dual variable and slack stays an
// even integer. With max_cardinality set, only maximum-cardinality matchings
// are considered.
class BlossomSolver {
 public:
  BlossomSolver(int num_vertices, std::vector<MatchingEdge> edges, bool max_cardinality)
      : n_(num_vertices), edges_(std::move(edges)), max_card_(max_cardinality) {}

  // Returns mate[v] (vertex index) or -1.
  std::vector<int> solve();

 private:
  using Vec = std::vector<int>;

  int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dual_[e.u] + dual_[e.v] - 2 * e.weight;
  }
  int endpoint(int p) const { return (p & 1) ? edges_[p / 2].v : edges_[p / 2].u; }

  static int wrap(int j, int size) { return ((j % size) + size) % size; }

  void leaves(int b, Vec& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, out);
  }
  Vec leaves(int b) const {
    Vec out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int n_;
  std::vector<MatchingEdge> edges_;
  bool max_card_;

  std::vector<Vec> neighbend_;
  Vec mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
  std::vector<Vec> childs_, endps_, blossombestedges_;
  std::vector<bool> has_bestedges_;
  Vec unused_;
  std::vector<int64_t> dual_;
  std::vector<bool> allowedge_;
  Vec queue_;
};

void BlossomSolver::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = blossombase_[b];
    assign_label(endpoint(mate_[base]), 1, mate_[base] ^ 1);
  }
}

int BlossomSolver::scan_blossom(int v, int w) {
  Vec path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint(labelend_[b]);
      b = inblossom_[v];
      v = endpoint(labelend_[b]);
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void BlossomSolver::add_blossom(int base, int k) {
  int v = edges_[k].u;
  int w = edges_[k].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  Vec path;
  Vec endps;
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint(labelend_[bv]);
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint(labelend_[bw]);
    bw = inblossom_[w];
  }
  childs_[b] = path;
  endps_[b] = std::move(endps);
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  Vec bestedgeto(2 * n_, -1);
  for (int sub : path) {
    std::vector<Vec> nblists;
    if (!has_bestedges_[sub]) {
      for (int leaf : leaves(sub)) {
        Vec list;
        for (int p : neighbend_[leaf]) list.push_back(p / 2);
        nblists.push_back(std::move(list));
      }
    } else {
      nblists.push_back(blossombestedges_[sub]);
    }
    for (const Vec& nblist : nblists) {
      for (int e : nblist) {
        int i = edges_[e].u;
        int j = edges_[e].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = e;
        }
      }
    }
    blossombestedges_[sub].clear();
    has_bestedges_[sub] = false;
    bestedge_[sub] = -1;
  }
  blossombestedges_[b].clear();
  for (int e : bestedgeto) {
    if (e != -1) blossombestedges_[b].push_back(e);
  }
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (int e : blossombestedges_[b]) {
    if (bestedge_[b] == -1 || slack(e) < slack(bestedge_[b])) bestedge_[b] = e;
  }
}

void BlossomSolver::expand_blossom(int b, bool endstage) {
  const Vec children = childs_[b];
  for (int s : children) {
    blossomparent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const Vec& ch = childs_[b];
    const Vec& ep = endps_[b];
    const int size = static_cast<int>(ch.size());
    const int entrychild = inblossom_[endpoint(labelend_[b] ^ 1)];
    int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    int jstep;
    int endptrick;
    if (j & 1) {
      j -= size;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint(p ^ 1)] = 0;
      label_[endpoint(ep[wrap(j - endptrick, size)] ^ endptrick ^ 1)] = 0;
      assign_label(endpoint(p ^ 1), 2, p);
      allowedge_[ep[wrap(j - endptrick, size)] / 2] = true;
      j += jstep;
      p = ep[wrap(j - endptrick, size)] ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    int bv = ch[wrap(j, size)];
    label_[endpoint(p ^ 1)] = label_[bv] = 2;
    labelend_[endpoint(p ^ 1)] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (ch[wrap(j, size)] != entrychild) {
      bv = ch[wrap(j, size)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int labelled = -1;
      for (int leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          labelled = leaf;
          break;
        }
      }
      if (labelled != -1) {
        label_[labelled] = 0;
        label_[endpoint(mate_[blossombase_[bv]])] = 0;
        assign_label(labelled, 2, labelend_[labelled]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void BlossomSolver::augment_blossom(int b, int v) {
  int t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= n_) augment_blossom(t, v);
  Vec& ch = childs_[b];
  Vec& ep = endps_[b];
  const int size = static_cast<int>(ch.size());
  const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  int j = i;
  int jstep;
  int endptrick;
  if (i & 1) {
    j -= size;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = ch[wrap(j, size)];
    const int p = ep[wrap(j - endptrick, size)] ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint(p));
    j += jstep;
    t = ch[wrap(j, size)];
    if (t >= n_) augment_blossom(t, endpoint(p ^ 1));
    mate_[endpoint(p)] = p ^ 1;
    mate_[endpoint(p ^ 1)] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  blossombase_[b] = blossombase_[ch[0]];
}

void BlossomSolver::augment_matching(int k) {
  const int ends[2] = {edges_[k].u, edges_[k].v};
  const int ps[2] = {2 * k + 1, 2 * k};
  for (int side = 0; side < 2; ++side) {
    int s = ends[side];
    int p = ps[side];
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint(labelend_[bs]);
      const int bt = inblossom_[t];
      s = endpoint(labelend_[bt]);
      const int j = endpoint(labelend_[bt] ^ 1);
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> BlossomSolver::solve() {
  const int nedge = static_cast<int>(edges_.size());
  if (n_ == 0) return {};
  int64_t maxweight = 0;
  for (auto& e : edges_) {
    e.weight *= 2;
    maxweight = std::max(maxweight, e.weight);
  }
  neighbend_.assign(n_, {});
  for (int k = 0; k < nedge; ++k) {
    neighbend_[edges_[k].u].push_back(2 * k + 1);
    neighbend_[edges_[k].v].push_back(2 * k);
  }
  mate_.assign(n_, -1);
  label_.assign(2 * n_, 0);
  labelend_.assign(2 * n_, -1);
  inblossom_.resize(n_);
  for (int v = 0; v < n_; ++v) inblossom_[v] = v;
  blossomparent_.assign(2 * n_, -1);
  childs_.assign(2 * n_, {});
  endps_.assign(2 * n_, {});
  blossombase_.assign(2 * n_, -1);
  for (int v = 0; v < n_; ++v) blossombase_[v] = v;
  bestedge_.assign(2 * n_, -1);
  blossombestedges_.assign(2 * n_, {});
  has_bestedges_.assign(2 * n_, false);
  unused_.clear();
  for (int b = n_; b < 2 * n_; ++b) unused_.push_back(b);
  dual_.assign(2 * n_, 0);
  for (int v = 0; v < n_; ++v) dual_[v] = maxweight;
  allowedge_.assign(nedge, false);

  for (int stage = 0; stage < n_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
    }
    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint(p);
          if (inblossom_[v] == inblossom_[w]) continue;
          int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      int64_t delta = 0;
      int deltaedge = -1;
      int deltablossom = -1;
      if (!max_card_) {
        deltatype = 1;
        delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const int64_t d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const int64_t d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1) {
          dual_[v] -= delta;
        } else if (label_[inblossom_[v]] == 2) {
          dual_[v] += delta;
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1) {
            dual_[b] += delta;
          } else if (label_[b] == 2) {
            dual_[b] -= delta;
          }
        }
      }
      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = edges_[deltaedge].u;
        int j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n_; b < 2 * n_; ++b) {
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
        expand_blossom(b, true);
      }
    }
  }
  std::vector<int> out(n_, -1);
  for (int v = 0; v < n_; ++v) {
    if (mate_[v] >= 0) out[v] = endpoint(mate_[v]);
  }
  return out;
}

}  // namespace

std::vector<MatchedPair> min_weight_perfect_matching(const MatchingGraph& graph) {
  const int n = graph.num_nodes;
  if (n < 0 || n % 2 != 0) {
    throw std::invalid_argument("perfect matching needs an even node count, got " +
                                std::to_string(n));
  }
  int64_t max_w = 0;
  for (const auto& e : graph.edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v) {
      throw std::invalid_argument("matching edge endpoint out of range");
    }
    if (e.weight < 0) throw std::invalid_argument("matching edge weight must be non-negative");
    max_w = std::max(max_w, e.weight);
  }
  // Maximise (max_w - w) over maximum-cardinality matchings: every perfect
  // matching has n/2 edges, so this minimises the total weight.
  std::vector<MatchingEdge> flipped;
  flipped.reserve(graph.edges.size());
  for (const auto& e : graph.edges) flipped.push_back({e.u, e.v, max_w - e.weight});
  BlossomSolver solver(n, std::move(flipped), /*max_cardinality=*/true);
  const std::vector<int> mate = solver.solve();

  std::vector<MatchedPair> pairs;
  for (int v = 0; v < n; ++v) {
    if (mate[v] < 0) throw std::runtime_error("graph has no perfect matching");
    if (v < mate[v]) pairs.emplace_back(v, mate[v]);
  }
  return pairs;
}

int64_t matching_weight(const MatchingGraph& graph, const std::vector<MatchedPair>& pairs) {
  int64_t total = 0;
  for (const auto& [a, b] : pairs) {
    int64_t best = std::numeric_limits<int64_t>::max();
    for (const auto& e : graph.edges) {
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) best = std::min(best, e.weight);
    }
    if (best == std::numeric_limits<int64_t>::max()) {
      throw std::invalid_argument("pair is not an edge of the graph");
    }
    total += best;
  }
  return total;
}

// ---------------------------------------------------------------------------

MwpmDecoder::MwpmDecoder(const Layout& layout) : layout_(&layout) {
  build_type_graph(AncillaType::kX);
  build_type_graph(AncillaType::kZ);

  const int half = layout.num_x_ancillas();
  if (half <= 12 && layout.num_data() <= 64) {
    for (int t = 0; t < 2; ++t) {
      const auto type = static_cast<AncillaType>(t);
      const int offset = t == 0 ? 0 : half;
      table_[t].assign(std::size_t{1} << half, 0);
      std::vector<uint8_t> plane(layout.num_data());
      for (uint32_t mask = 1; mask < (1u << half); ++mask) {
        std::vector<int> defects;
        for (int i = 0; i < half; ++i) {
          if (mask >> i & 1u) defects.push_back(offset + i);
        }
        std::fill(plane.begin(), plane.end(), 0);
        solve(type, defects, plane);
        uint64_t bits = 0;
        for (int q = 0; q < layout.num_data(); ++q) {
          if (plane[q]) bits |= uint64_t{1} << q;
        }
        table_[t][mask] = bits;
      }
    }
  }
}

void MwpmDecoder::build_type_graph(AncillaType type) {
  const Layout& L = *layout_;
  TypeGraph& g = graphs_[static_cast<int>(type)];
  g.local.assign(L.num_ancillas(), -1);
  for (int a = 0; a < L.num_ancillas(); ++a) {
    if (L.ancilla_type(a) == type) {
      g.local[a] = static_cast<int>(g.ancillas.size());
      g.ancillas.push_back(a);
    }
  }
  const int n = static_cast<int>(g.ancillas.size());
  const int boundary = n;
  // Adjacency: (data qubit, neighbour node), data qubits ascending.
  std::vector<std::vector<std::pair<int, int>>> adj(n + 1);
  for (int q = 0; q < L.num_data(); ++q) {
    const auto& nb = L.data_neighbors(q, type);
    if (nb.size() == 2) {
      const int u = g.local[nb[0]];
      const int v = g.local[nb[1]];
      adj[u].emplace_back(q, v);
      adj[v].emplace_back(q, u);
    } else if (nb.size() == 1) {
      const int u = g.local[nb[0]];
      adj[u].emplace_back(q, boundary);
      adj[boundary].emplace_back(q, u);
    }
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  g.dist.assign(n, std::vector<int>(n + 1, -1));
  g.paths.assign(n, std::vector<std::vector<int>>(n + 1));
  for (int src = 0; src < n; ++src) {
    std::vector<int> dist(n + 1, -1);
    std::vector<int> parent_node(n + 1, -1);
    std::vector<int> parent_qubit(n + 1, -1);
    std::deque<int> frontier{src};
    dist[src] = 0;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop_front();
      if (u == boundary) continue;  // paths may end at, not pass through, the boundary
      for (const auto& [q, v] : adj[u]) {
        if (dist[v] != -1) continue;
        dist[v] = dist[u] + 1;
        parent_node[v] = u;
        parent_qubit[v] = q;
        frontier.push_back(v);
      }
    }
    for (int dst = 0; dst <= n; ++dst) {
      if (dist[dst] < 0) throw std::logic_error("disconnected matching lattice");
      g.dist[src][dst] = dist[dst];
      std::vector<int>& path = g.paths[src][dst];
      for (int v = dst; v != src; v = parent_node[v]) path.push_back(parent_qubit[v]);
      std::reverse(path.begin(), path.end());
    }
  }
}

int MwpmDecoder::path_length(int a, int b) const {
  const TypeGraph& g = graphs_[static_cast<int>(layout_->ancilla_type(a))];
  const int i = g.local[a];
  const int j = b < 0 ? static_cast<int>(g.ancillas.size()) : g.local[b];
  if (j < 0) throw std::invalid_argument("ancillas of different type");
  return g.dist[i][j];
}

const std::vector<int>& MwpmDecoder::path(int a, int b) const {
  const TypeGraph& g = graphs_[static_cast<int>(layout_->ancilla_type(a))];
  const int i = g.local[a];
  const int j = b < 0 ? static_cast<int>(g.ancillas.size()) : g.local[b];
  if (j < 0) throw std::invalid_argument("ancillas of different type");
  return g.paths[i][j];
}

MatchingGraph MwpmDecoder::build_graph(AncillaType type, const std::vector<int>& defects) const {
  const TypeGraph& g = graphs_[static_cast<int>(type)];
  const int k = static_cast<int>(defects.size());
  const int boundary = static_cast<int>(g.ancillas.size());
  MatchingGraph graph;
  graph.num_nodes = 2 * k;
  for (int i = 0; i < k; ++i) {
    const int li = g.local[defects[i]];
    if (li < 0) throw std::invalid_argument("defect has the wrong ancilla type");
    for (int j = i + 1; j < k; ++j) {
      graph.edges.push_back({i, j, g.dist[li][g.local[defects[j]]]});
    }
    graph.edges.push_back({i, k + i, g.dist[li][boundary]});
    for (int j = i + 1; j < k; ++j) graph.edges.push_back({k + i, k + j, 0});
  }
  return graph;
}

void MwpmDecoder::solve(AncillaType type, const std::vector<int>& defects,
                        std::vector<uint8_t>& plane) const {
  const int k = static_cast<int>(defects.size());
  if (k == 0) return;
  const TypeGraph& g = graphs_[static_cast<int>(type)];
  const int boundary = static_cast<int>(g.ancillas.size());
  const auto pairs = min_weight_perfect_matching(build_graph(type, defects));
  for (const auto& [u, v] : pairs) {
    if (u >= k) continue;  // boundary-boundary
    const int lu = g.local[defects[u]];
    const int lv = v < k ? g.local[defects[v]] : boundary;
    for (int q : g.paths[lu][lv]) plane[q] ^= 1;
  }
}

void MwpmDecoder::decode_into(const Syndrome& s, ErrorConfig& out) const {
  const Layout& L = *layout_;
  if (static_cast<int>(s.size()) != L.num_ancillas()) {
    throw std::invalid_argument("syndrome length does not match layout");
  }
  out.x.assign(L.num_data(), 0);
  out.z.assign(L.num_data(), 0);
  const int half = L.num_x_ancillas();
  if (!table_[0].empty()) {
    uint32_t mx = 0;
    uint32_t mz = 0;
    for (int i = 0; i < half; ++i) {
      mx |= static_cast<uint32_t>(s.bits[i]) << i;
      mz |= static_cast<uint32_t>(s.bits[half + i]) << i;
    }
    const uint64_t zflips = table_[0][mx];
    const uint64_t xflips = table_[1][mz];
    for (int q = 0; q < L.num_data(); ++q) {
      out.z[q] = static_cast<uint8_t>(zflips >> q & 1u);
      out.x[q] = static_cast<uint8_t>(xflips >> q & 1u);
    }
    return;
  }
  std::vector<int> defects_x;
  std::vector<int> defects_z;
  for (int a = 0; a < L.num_ancillas(); ++a) {
    if (!s.bits[a]) continue;
    (L.ancilla_type(a) == AncillaType::kX ? defects_x : defects_z).push_back(a);
  }
  solve(AncillaType::kX, defects_x, out.z);
  solve(AncillaType::kZ, defects_z, out.x);
}

ErrorConfig MwpmDecoder::decode(const Syndrome& s) const {
  ErrorConfig out;
  decode_into(s, out);
  return out;
}

ErrorConfig decode_mwpm(const Layout& layout, const Syndrome& s) {
  return MwpmDecoder(layout).decode(s);
}

}  // namespace hldsim
