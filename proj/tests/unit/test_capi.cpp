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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hldsim/hldsim.h"

extern "C" int hldsim_c_smoke(void);

namespace {

TEST(CApi, CompilesAsC) { EXPECT_EQ(hldsim_c_smoke(), 0); }

TEST(CApi, Strings) {
  EXPECT_STRNE(hldsim_version(), "");
  EXPECT_STREQ(hldsim_status_string(HLDSIM_OK), "ok");
  EXPECT_STRNE(hldsim_status_string(HLDSIM_ERR_NO_CROSSING), "");
  EXPECT_STRNE(hldsim_status_string(static_cast<hldsim_status>(77)), "");
}

TEST(CApi, Layout) {
  hldsim_layout* l = nullptr;
  ASSERT_EQ(hldsim_layout_create(5, &l), HLDSIM_OK);
  EXPECT_EQ(hldsim_layout_distance(l), 5);
  EXPECT_EQ(hldsim_layout_num_data(l), 25);
  EXPECT_EQ(hldsim_layout_num_ancillas(l), 24);

  size_t needed = 0;
  char small[4];
  EXPECT_EQ(hldsim_layout_json(l, small, sizeof small, &needed), HLDSIM_ERR_BUFFER_TOO_SMALL);
  ASSERT_GT(needed, sizeof small);
  std::string buf(needed, '\0');
  ASSERT_EQ(hldsim_layout_json(l, buf.data(), buf.size(), nullptr), HLDSIM_OK);
  EXPECT_NE(buf.find("\"distance\""), std::string::npos);

  std::vector<uint8_t> x(25, 0), z(25, 0), s(24, 9);
  z[23] = z[24] = 1;
  ASSERT_EQ(hldsim_syndrome(l, x.data(), z.data(), s.data()), HLDSIM_OK);
  for (int a = 0; a < 24; ++a) EXPECT_EQ(s[a], a == 8 ? 1 : 0) << a;
  hldsim_layout_destroy(l);

  EXPECT_EQ(hldsim_layout_create(4, &l), HLDSIM_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(hldsim_last_error(), "");
  EXPECT_EQ(hldsim_layout_create(3, nullptr), HLDSIM_ERR_INVALID_ARGUMENT);
  hldsim_layout_destroy(nullptr);
}

TEST(CApi, DecodersRoundTripSyndromes) {
  hldsim_layout* l = nullptr;
  ASSERT_EQ(hldsim_layout_create(5, &l), HLDSIM_OK);
  for (auto kind : {HLDSIM_DECODER_TRIVIAL, HLDSIM_DECODER_MWPM}) {
    hldsim_decoder* dec = nullptr;
    ASSERT_EQ(hldsim_decoder_create(5, kind, nullptr, &dec), HLDSIM_OK);
    std::vector<uint8_t> s(24, 0), x(25), z(25), back(24);
    s[8] = 1;
    s[17] = 1;
    ASSERT_EQ(hldsim_decode(dec, s.data(), 24, x.data(), z.data(), 25), HLDSIM_OK);
    ASSERT_EQ(hldsim_syndrome(l, x.data(), z.data(), back.data()), HLDSIM_OK);
    EXPECT_EQ(back, s);
    EXPECT_EQ(hldsim_decode(dec, s.data(), 23, x.data(), z.data(), 25), HLDSIM_ERR_INVALID_ARGUMENT);
    hldsim_decoder_destroy(dec);
  }
  hldsim_decoder* dec = nullptr;
  EXPECT_EQ(hldsim_decoder_create(5, HLDSIM_DECODER_HLD, nullptr, &dec), HLDSIM_ERR_INVALID_ARGUMENT);
  hldsim_layout_destroy(l);
}

void count_rows(const hldsim_train_row* row, const hldsim_network* current, void* user) {
  auto* rows = static_cast<std::vector<hldsim_train_row>*>(user);
  rows->push_back(*row);
  EXPECT_EQ(hldsim_network_samples_seen(current), row->samples_seen);
}

TEST(CApi, NetworkLifecycle) {
  hldsim_network_config cfg;
  hldsim_network_config_default(&cfg);
  EXPECT_EQ(cfg.distance, 3);
  EXPECT_EQ(cfg.bits, 0);

  hldsim_network* net = nullptr;
  ASSERT_EQ(hldsim_network_create(&cfg, 5, &net), HLDSIM_OK);
  EXPECT_EQ(hldsim_network_samples_seen(net), 0);

  hldsim_train_config tc;
  hldsim_train_config_default(&tc);
  tc.batch_size = 64;
  tc.n_batches = 20;
  tc.log_every = 10;
  std::vector<hldsim_train_row> rows;
  ASSERT_EQ(hldsim_train(net, &tc, count_rows, &rows), HLDSIM_OK);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].samples_seen, 20 * 64);
  EXPECT_EQ(hldsim_network_samples_seen(net), 20 * 64);

  std::vector<uint8_t> s(8, 0);
  s[1] = 1;
  int lx = -1, lz = -1;
  ASSERT_EQ(hldsim_network_predict(net, s.data(), 8, &lx, &lz), HLDSIM_OK);
  EXPECT_TRUE(lx == 0 || lx == 1);
  EXPECT_EQ(hldsim_network_predict(net, s.data(), 7, &lx, &lz), HLDSIM_ERR_INVALID_ARGUMENT);

  hldsim_network* q = nullptr;
  ASSERT_EQ(hldsim_network_quantize(net, 9, 0, &q), HLDSIM_OK);
  hldsim_network_config qc;
  ASSERT_EQ(hldsim_network_get_config(q, &qc), HLDSIM_OK);
  EXPECT_EQ(qc.bits, 9);
  EXPECT_EQ(hldsim_network_quantize(net, 12, 0, &q), HLDSIM_ERR_INVALID_ARGUMENT);

  const auto dir = std::filesystem::temp_directory_path() / "hldsim_capi_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "q.ckpt").string();
  ASSERT_EQ(hldsim_network_save(q, path.c_str()), HLDSIM_OK);
  hldsim_network* loaded = nullptr;
  ASSERT_EQ(hldsim_network_load(path.c_str(), &loaded), HLDSIM_OK);
  hldsim_network_config lc;
  ASSERT_EQ(hldsim_network_get_config(loaded, &lc), HLDSIM_OK);
  EXPECT_EQ(lc.bits, 9);
  EXPECT_EQ(hldsim_network_samples_seen(loaded), 20 * 64);

  hldsim_decoder* d1 = nullptr;
  hldsim_decoder* d2 = nullptr;
  ASSERT_EQ(hldsim_decoder_create(3, HLDSIM_DECODER_HLD, q, &d1), HLDSIM_OK);
  ASSERT_EQ(hldsim_decoder_create(3, HLDSIM_DECODER_HLD, loaded, &d2), HLDSIM_OK);
  for (int k = 0; k < 256; ++k) {
    for (int a = 0; a < 8; ++a) s[a] = k >> a & 1;
    std::vector<uint8_t> x1(9), z1(9), x2(9), z2(9);
    ASSERT_EQ(hldsim_decode(d1, s.data(), 8, x1.data(), z1.data(), 9), HLDSIM_OK);
    ASSERT_EQ(hldsim_decode(d2, s.data(), 8, x2.data(), z2.data(), 9), HLDSIM_OK);
    ASSERT_EQ(x1, x2);
    ASSERT_EQ(z1, z2);
  }
  EXPECT_EQ(hldsim_decoder_create(5, HLDSIM_DECODER_HLD, q, &d1), HLDSIM_ERR_INVALID_ARGUMENT);
  hldsim_decoder_destroy(d2);

  EXPECT_EQ(hldsim_network_load((dir / "missing.ckpt").string().c_str(), &loaded),
            HLDSIM_ERR_NOT_FOUND);
  std::FILE* f = std::fopen((dir / "bad.ckpt").string().c_str(), "w");
  std::fputs("not a checkpoint\n", f);
  std::fclose(f);
  EXPECT_EQ(hldsim_network_load((dir / "bad.ckpt").string().c_str(), &loaded), HLDSIM_ERR_FORMAT);
  EXPECT_EQ(hldsim_network_save(q, "/nonexistent/dir/x.ckpt"), HLDSIM_ERR_IO);

  hldsim_network_destroy(q);
  hldsim_network_destroy(net);
  std::filesystem::remove_all(dir);

  cfg.n1 = 6;
  EXPECT_EQ(hldsim_network_create(&cfg, 1, &net), HLDSIM_ERR_INVALID_ARGUMENT);
}

TEST(CApi, BenchmarkAndThreshold) {
  hldsim_decoder* dec = nullptr;
  ASSERT_EQ(hldsim_decoder_create(3, HLDSIM_DECODER_MWPM, nullptr, &dec), HLDSIM_OK);
  double eps[4];
  ASSERT_EQ(hldsim_log_spaced(0.05, 0.15, 4, eps), HLDSIM_OK);
  hldsim_benchmark_point pts[4];
  ASSERT_EQ(hldsim_benchmark(dec, eps, 4, 20000, 1, 1, HLDSIM_FAIL_ANY, pts), HLDSIM_OK);
  for (const auto& p : pts) {
    EXPECT_EQ(p.shots, 20000);
    EXPECT_DOUBLE_EQ(p.eps_l, static_cast<double>(p.failures) / 20000);
  }
  double p_th, lo, hi;
  ASSERT_EQ(hldsim_pseudo_threshold(pts, 4, &p_th, &lo, &hi), HLDSIM_OK);
  EXPECT_GT(p_th, 0.06);
  EXPECT_LT(p_th, 0.11);
  EXPECT_LT(lo, p_th);
  EXPECT_GT(hi, p_th);
  EXPECT_EQ(hldsim_pseudo_threshold(pts, 1, &p_th, &lo, &hi), HLDSIM_ERR_NO_CROSSING);
  EXPECT_EQ(hldsim_benchmark(dec, eps, 0, 10, 1, 1, HLDSIM_FAIL_ANY, pts), HLDSIM_ERR_INVALID_ARGUMENT);
  hldsim_decoder_destroy(dec);
}

TEST(CApi, Fit) {
  hldsim_benchmark_point pts[8];
  for (int i = 0; i < 8; ++i) {
    const double e = 0.03 * std::pow(10.0, i / 7.0);
    pts[i] = {e, std::exp(std::log(0.1) + 2.0 * (1 - e) * (std::log(e) - std::log(0.1))), 1000, 0, 0};
  }
  hldsim_fit_result r;
  ASSERT_EQ(hldsim_fit(pts, 8, &r), HLDSIM_OK);
  EXPECT_NEAR(r.p_th, 0.1, 1e-6);
  EXPECT_NEAR(r.s, 2.0, 1e-6);
  EXPECT_NEAR(r.c, 1.0, 1e-6);
  EXPECT_EQ(r.converged, 1);
  EXPECT_EQ(hldsim_fit(pts, 3, &r), HLDSIM_ERR_INVALID_ARGUMENT);
}

TEST(CApi, Cost) {
  hldsim_cost c;
  ASSERT_EQ(hldsim_node_cost(8, 4, HLDSIM_TRANSFER_SQNL, HLDSIM_NODE_HIDDEN, &c), HLDSIM_OK);
  EXPECT_EQ(c.pp_bits, 128);
  EXPECT_EQ(hldsim_node_cost(0, 4, HLDSIM_TRANSFER_SQNL, HLDSIM_NODE_HIDDEN, &c),
            HLDSIM_ERR_INVALID_ARGUMENT);

  hldsim_network_config cfg;
  hldsim_network_config_default(&cfg);
  hldsim_cost total, layers[3];
  EXPECT_EQ(hldsim_network_cost(&cfg, &total, layers), HLDSIM_ERR_INVALID_ARGUMENT);
  cfg.bits = 6;
  ASSERT_EQ(hldsim_network_cost(&cfg, &total, layers), HLDSIM_OK);
  EXPECT_EQ(total.bitops, layers[0].bitops + layers[1].bitops + layers[2].bitops);
  ASSERT_EQ(hldsim_network_cost(&cfg, &total, nullptr), HLDSIM_OK);

  const double cost[] = {3, 1, 2, 2};
  const double perf[] = {3, 1, 2, 1};
  size_t idx[4], n = 0;
  ASSERT_EQ(hldsim_pareto_front(cost, perf, 4, idx, &n), HLDSIM_OK);
  ASSERT_EQ(n, 3u);
  EXPECT_EQ(idx[0], 0u);
  EXPECT_EQ(idx[1], 1u);
  EXPECT_EQ(idx[2], 2u);
}

}  // namespace
