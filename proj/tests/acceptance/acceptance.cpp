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

// Acceptance run: one PASS/FAIL line per criterion. The process exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "hldsim/eval.hpp"
#include "hldsim/hwcost.hpp"
#include "hldsim/lattice.hpp"
#include "hldsim/mwpm.hpp"
#include "hldsim/nn.hpp"
#include "hldsim/noise.hpp"
#include "hldsim/ped.hpp"
#include "hldsim/train.hpp"
#include "oracles.hpp"

namespace {

using namespace hldsim;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Syndrome random_syndrome(int n, std::mt19937_64& rng) {
  Syndrome s(n);
  for (auto& b : s.bits) b = rng() & 1;
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 10 log-spaced points in [0.03, 0.3], 10^6 shots each.
PseudoThreshold measure(const Decoder& dec, const Layout& l, int64_t shots = 1000000) {
  const auto eps = log_spaced(0.03, 0.3, 10);
  return pseudo_threshold(benchmark(dec, l, eps, shots, 1));
}

Outcome ped_round_trip() {
  Outcome o;
  {
    const Layout l(3);
    const PureErrorDecoder ped(l);
    for (int k = 0; k < 256; ++k) {
      Syndrome s(8);
      for (int a = 0; a < 8; ++a) s.bits[a] = k >> a & 1;
      if (!(compute_syndrome(l, ped.decode(s)) == s)) o.pass = false;
    }
  }
  for (int d : {5, 7, 9}) {
    const Layout l(d);
    const PureErrorDecoder ped(l);
    std::mt19937_64 rng(d);
    for (int k = 0; k < 100000; ++k) {
      const Syndrome s = random_syndrome(l.num_ancillas(), rng);
      if (!(compute_syndrome(l, ped.decode(s)) == s)) o.pass = false;
    }
  }
  o.detail = "256 syndromes at d=3, 1e5 each at d=5,7,9";
  return o;
}

Outcome ped_worked_example() {
  const Layout l(5);
  Syndrome s(24);
  s.bits[8] = 1;
  const ErrorConfig e = ped_decode(l, s);
  Outcome o;
  for (int q = 0; q < 25; ++q) {
    if (e.x[q] != 0 || e.z[q] != (q == 23 || q == 24)) o.pass = false;
  }
  o.detail = "x=" + to_bitstring(e.x) + " z=" + to_bitstring(e.z);
  return o;
}

Outcome equivariance() {
  Outcome o;
  double worst = 0.0;
  for (int d : {3, 5, 7, 9}) {
    const Layout l(d);
    const PureErrorDecoder ped(l);
    std::mt19937_64 rng(1000 + d);
    NetworkConfig cfg{d, 16, 8, Transfer::kSqnl, true, std::nullopt};
    Weights w;
    for (int k = 0; k < 10000; ++k) {
      if (k % 1000 == 0) {
        cfg.transfer = static_cast<Transfer>((k / 1000) % 3);
        BaseWeights base(cfg);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (auto& v : base.all()) v = u(rng);
        w = expand_rotated(cfg, base, l);
      }
      const Syndrome s = random_syndrome(l.num_ancillas(), rng);
      const Syndrome r = rotate_syndrome(l, s);
      if (!(ped.decode(r) == rotate_error(l, ped.decode(s)))) o.pass = false;
      const auto a = forward_float(cfg, w, s);
      const auto b = forward_float(cfg, w, r);
      worst = std::max({worst, std::abs(a.yx - b.yz), std::abs(a.yz - b.yx)});
    }
  }
  if (worst > 1e-12) o.pass = false;
  o.detail = "1e4 cases per distance, max NN deviation " + fmt("%.2e", worst);
  return o;
}

Outcome mwpm_exactness() {
  Outcome o;
  std::mt19937_64 rng(44);
  int graphs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Defect graphs with 1..8 defects, alternating lattice and random weights.
    const int d = 3 + 2 * (trial % 4);
    const Layout l(d);
    const MwpmDecoder dec(l);
    MatchingGraph g;
    if (trial % 2 == 0) {
      std::vector<int> defects(static_cast<std::size_t>(l.num_x_ancillas()));
      for (int a = 0; a < l.num_x_ancillas(); ++a) defects[a] = a;
      std::shuffle(defects.begin(), defects.end(), rng);
      defects.resize(std::min<std::size_t>(defects.size(), 1 + rng() % 8));
      g = dec.build_graph(AncillaType::kX, defects);
    } else {
      const int k = 1 + static_cast<int>(rng() % 8);
      g.num_nodes = 2 * k;
      for (int i = 0; i < g.num_nodes; ++i) {
        for (int j = i + 1; j < g.num_nodes; ++j) g.edges.push_back({i, j, static_cast<int64_t>(rng() % 30)});
      }
    }
    ++graphs;
    if (matching_weight(g, min_weight_perfect_matching(g)) != oracle::brute_force_matching(g)) o.pass = false;
  }
  const Layout l(3);
  const MwpmDecoder dec(l);
  int corrected = 0;
  for (int q = 0; q < 9; ++q) {
    for (int p = 1; p <= 3; ++p) {
      ErrorConfig e(9);
      e.x[q] = p & 1;
      e.z[q] = (p >> 1) & 1;
      if (logical_class(l, e ^ dec.decode(compute_syndrome(l, e))).is_identity()) ++corrected;
    }
  }
  if (corrected != 27) o.pass = false;
  o.detail = std::to_string(graphs) + " graphs vs brute force, " + std::to_string(corrected) +
             "/27 single-qubit errors corrected";
  return o;
}

Outcome mwpm_baseline() {
  Outcome o;
  std::ostringstream ss;
  const std::pair<int, std::pair<double, double>> targets[] = {{3, {0.08251, 0.010}},
                                                               {5, {0.10372, 0.015}}};
  for (const auto& [d, t] : targets) {
    const Layout l(d);
    const MatchingDecoder dec(l);
    const auto r = measure(dec, l);
    if (std::abs(r.p_th - t.first) > t.second) o.pass = false;
    ss << "d=" << d << " p_th=" << fmt("%.5f", r.p_th) << " (target " << t.first << " +- " << t.second
       << ") ";
  }
  o.detail = ss.str();
  return o;
}

Outcome gradient_check() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    NetworkConfig cfg;
    cfg.d = k % 5 == 4 ? 5 : 3;
    cfg.transfer = static_cast<Transfer>(k % 3);
    cfg.rotated = (k / 3) % 2 == 1;
    cfg.n1 = 4 * (1 + static_cast<int>(rng() % 2));
    cfg.n2 = 4 * (1 + static_cast<int>(rng() % 2));
    const double reg = (k % 4 == 0) ? 0.0 : 0.01 * static_cast<double>(1 + rng() % 5);
    const int reg_bits = 2 + static_cast<int>(rng() % 7);
    worst = std::max(worst, oracle::check_gradients(cfg, rng, reg, reg_bits).max_rel_error);
  }
  if (!(worst < 1e-5)) o.pass = false;
  o.detail = "100 configurations, max relative error " + fmt("%.2e", worst);
  return o;
}

struct TrainedNet {
  NetworkConfig cfg;
  Weights weights;
  double p_th = 0.0;
};

TrainedNet g_best;

Outcome desk_training() {
  Outcome o;
  const Layout l(3);
  const NetworkConfig cfg{3, 16, 4, Transfer::kSqnl, true, std::nullopt};
  std::ostringstream ss;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    TrainConfig tc;
    tc.batch_size = 4992;
    tc.n_batches = 4008;  // 2.0e7 samples
    tc.log_every = 4008;
    tc.p_train = 0.08251;
    tc.reg_scale = 1.0;
    tc.reg_bits = 8;
    tc.seed = seed;
    const auto r = train_loop(tc, cfg, l);
    double p = 0.0;
    try {
      p = measure(HighLevelDecoder(l, cfg, r.weights), l).p_th;
    } catch (const NoCrossingError&) {
    }
    ss << "seed " << seed << ": " << fmt("%.5f", p) << "  ";
    if (p > g_best.p_th) g_best = {cfg, r.weights, p};
  }
  if (!(g_best.p_th >= 0.090)) o.pass = false;
  o.detail = ss.str() + "best " + fmt("%.5f", g_best.p_th) + " (>= 0.090)";
  return o;
}

Outcome quantization() {
  Outcome o;
  std::mt19937_64 rng(77);
  int64_t checked = 0;
  for (int b = 3; b <= 9; ++b) {
    for (int k = 0; k < 10000; ++k) {
      NetworkConfig cfg;
      cfg.d = k % 2 ? 5 : 3;
      cfg.n1 = 4 * (1 + static_cast<int>(rng() % 4));
      cfg.n2 = 4 * (1 + static_cast<int>(rng() % 2));
      cfg.transfer = k % 3 == 0 ? Transfer::kRelu : Transfer::kSqnl;
      cfg.rotated = false;
      cfg.quant = QuantSpec{b, false};
      const auto q = oracle::random_codes(cfg, rng);
      const Syndrome s = random_syndrome(cfg.num_inputs(), rng);
      if (!(forward_fixed(cfg, q, s) == oracle::forward_fixed(cfg, q, s.bits))) o.pass = false;
      ++checked;
    }
  }
  std::string ratio = "n/a";
  if (g_best.p_th > 0.0) {
    const Layout l(3);
    NetworkConfig cfg = g_best.cfg;
    cfg.quant = QuantSpec{9, false};
    double p9 = 0.0;
    try {
      p9 = measure(HighLevelDecoder(l, cfg, quantize_weights(g_best.weights, *cfg.quant)), l).p_th;
    } catch (const NoCrossingError&) {
    }
    const double rel = (g_best.p_th - p9) / g_best.p_th;
    if (!(rel <= 0.05)) o.pass = false;
    ratio = "float " + fmt("%.5f", g_best.p_th) + ", 9-bit " + fmt("%.5f", p9) + ", degradation " +
            fmt("%.2f%%", 100 * rel);
  } else {
    o.pass = false;
  }
  o.detail = std::to_string(checked) + " (net, input) pairs bit-exact; " + ratio;
  return o;
}

Outcome fit_recovery() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [p, s, c] : {std::tuple{0.1, 2.0, 1.0}, std::tuple{0.08, 1.86, 0.0}}) {
    std::vector<BenchmarkPoint> pts;
    for (double e : log_spaced(0.03, 0.3, 10)) {
      BenchmarkPoint pt;
      pt.eps_p = e;
      pt.eps_l = std::exp(model_log_ler(p, s, c, e));
      pt.shots = 1;
      pts.push_back(pt);
    }
    const auto r = fit_model(pts);
    worst = std::max({worst, std::abs(r.p_th / p - 1), std::abs(r.s / s - 1),
                      c == 0.0 ? std::abs(r.c) : std::abs(r.c / c - 1)});
  }
  if (!(worst < 0.01)) o.pass = false;

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.02, 0.3);
  double worst_pt = 0.0;
  for (int k = 0; k < 1000; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (b / a < 1.01) continue;
    const int64_t n = 1000000;
    const double la = a * (0.5 + 0.45 * std::uniform_real_distribution<double>()(rng));
    const double lb = b * (1.05 + 0.5 * std::uniform_real_distribution<double>()(rng));
    const std::vector<BenchmarkPoint> pts = {
        make_point(a, static_cast<int64_t>(la * n), n), make_point(b, static_cast<int64_t>(lb * n), n)};
    const double g1 = std::log(pts[0].eps_l / a), g2 = std::log(pts[1].eps_l / b);
    const double x = std::log(a) - g1 * (std::log(b) - std::log(a)) / (g2 - g1);
    worst_pt = std::max(worst_pt, std::abs(pseudo_threshold(pts).p_th - std::exp(x)));
  }
  if (!(worst_pt <= 1e-12)) o.pass = false;
  o.detail = "max fit error " + fmt("%.2e", worst) + " relative, pseudo-threshold error " +
             fmt("%.2e", worst_pt);
  return o;
}

Outcome cost_properties() {
  Outcome o;
  for (Transfer t : {Transfer::kTanh, Transfer::kRelu, Transfer::kSqnl}) {
    for (NodeKind kind : {NodeKind::kInput, NodeKind::kHidden, NodeKind::kOutput}) {
      for (int m = 1; m <= 256; ++m) {
        for (int b = 1; b <= 9; ++b) {
          const auto c = node_cost(m, b, t, kind);
          for (const auto& p : {m > 1 ? node_cost(m - 1, b, t, kind) : c,
                                b > 1 ? node_cost(m, b - 1, t, kind) : c}) {
            if (p.pp_bits > c.pp_bits || p.fa_count > c.fa_count || p.tree_depth > c.tree_depth ||
                p.nl_bitops > c.nl_bitops || p.nl_depth > c.nl_depth || p.bitops > c.bitops) {
              o.pass = false;
            }
          }
        }
      }
    }
  }
  for (int d : {3, 5, 7, 9}) {
    for (int n1 : {8, 16, 32, 64, 128, 256}) {
      for (int n2 : {4, 8, 16, 32, 64}) {
        for (int b = 3; b <= 9; ++b) {
          const NetworkConfig cfg{d, n1, n2, Transfer::kSqnl, true, QuantSpec{b, false}};
          const auto r = network_cost(cfg);
          const auto h1 = node_cost(d * d - 1, b, cfg.transfer, NodeKind::kInput);
          const auto h2 = node_cost(n1, b, cfg.transfer, NodeKind::kHidden);
          const auto out = node_cost(n2, b, cfg.transfer, NodeKind::kOutput);
          if (r.total.bitops != n1 * h1.bitops + n2 * h2.bitops + 2 * out.bitops ||
              r.total.pp_bits != n1 * h1.pp_bits + n2 * h2.pp_bits + 2 * out.pp_bits ||
              r.total.fa_count != n1 * h1.fa_count + n2 * h2.fa_count + 2 * out.fa_count) {
            o.pass = false;
          }
        }
      }
    }
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ParetoPoint> pts(100);
    for (auto& p : pts) {
      p.cost = static_cast<double>(rng() % 50);
      p.performance = static_cast<double>(rng() % 50);
    }
    std::vector<std::size_t> brute;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool dominated = false;
      for (const auto& q : pts) {
        dominated |= q.cost <= pts[i].cost && q.performance >= pts[i].performance &&
                     (q.cost < pts[i].cost || q.performance > pts[i].performance);
      }
      if (!dominated) brute.push_back(i);
    }
    if (pareto_front(pts) != brute) o.pass = false;
  }
  o.detail = "monotone over m<=256, b<=9; additivity over 840 configs; 200 Pareto clouds";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "PED round-trip", 10, ped_round_trip},
      {2, "PED worked example", 0, ped_worked_example},
      {3, "Equivariance suite", 30, equivariance},
      {4, "MWPM exactness", 60, mwpm_exactness},
      {5, "MWPM baseline reproduction", 0, mwpm_baseline},
      {6, "Gradient correctness", 60, gradient_check},
      {7, "Desk-scale training", 0, desk_training},
      {8, "Quantization consistency", 0, quantization},
      {9, "Fit recovery", 0, fit_recovery},
      {10, "Cost model properties", 10, cost_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += " [over the " + fmt("%.0f", c.limit_s) + " s budget]";
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
