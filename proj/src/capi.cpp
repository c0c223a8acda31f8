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

#include "hldsim/hldsim.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "hldsim/checkpoint.hpp"
#include "hldsim/eval.hpp"
#include "hldsim/hwcost.hpp"
#include "hldsim/lattice.hpp"
#include "hldsim/nn.hpp"
#include "hldsim/noise.hpp"
#include "hldsim/train.hpp"

struct hldsim_layout {
  hldsim::Layout layout;
};

struct hldsim_network {
  hldsim::Checkpoint ck;
};

struct hldsim_decoder {
  std::unique_ptr<hldsim::Layout> layout;
  std::unique_ptr<hldsim::Decoder> decoder;
};

namespace {

thread_local std::string g_last_error;

hldsim_status fail(hldsim_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class F>
hldsim_status guard(F&& body) noexcept {
  try {
    g_last_error.clear();
    return body();
  } catch (const hldsim::CheckpointError& e) {
    switch (e.kind()) {
      case hldsim::CheckpointError::Kind::kNotFound:
        return fail(HLDSIM_ERR_NOT_FOUND, e.what());
      case hldsim::CheckpointError::Kind::kIo:
        return fail(HLDSIM_ERR_IO, e.what());
      case hldsim::CheckpointError::Kind::kFormat:
        break;
    }
    return fail(HLDSIM_ERR_FORMAT, e.what());
  } catch (const hldsim::NoCrossingError& e) {
    return fail(HLDSIM_ERR_NO_CROSSING, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HLDSIM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(HLDSIM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HLDSIM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(HLDSIM_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(HLDSIM_ERR_INTERNAL, "unknown error");
  }
}

#define HLDSIM_REQUIRE(cond, msg) \
  do {                            \
    if (!(cond)) return fail(HLDSIM_ERR_INVALID_ARGUMENT, msg); \
  } while (0)

hldsim::Transfer to_transfer(hldsim_transfer t) {
  switch (t) {
    case HLDSIM_TRANSFER_TANH:
      return hldsim::Transfer::kTanh;
    case HLDSIM_TRANSFER_RELU:
      return hldsim::Transfer::kRelu;
    case HLDSIM_TRANSFER_SQNL:
      return hldsim::Transfer::kSqnl;
  }
  throw std::invalid_argument("unknown transfer function");
}

hldsim_transfer from_transfer(hldsim::Transfer t) {
  switch (t) {
    case hldsim::Transfer::kTanh:
      return HLDSIM_TRANSFER_TANH;
    case hldsim::Transfer::kRelu:
      return HLDSIM_TRANSFER_RELU;
    case hldsim::Transfer::kSqnl:
      break;
  }
  return HLDSIM_TRANSFER_SQNL;
}

hldsim::NetworkConfig to_config(const hldsim_network_config& c) {
  hldsim::NetworkConfig cfg;
  cfg.d = c.distance;
  cfg.n1 = c.n1;
  cfg.n2 = c.n2;
  cfg.transfer = to_transfer(c.transfer);
  cfg.rotated = c.rotated != 0;
  if (c.bits < 0) throw std::invalid_argument("bits must be >= 0");
  if (c.bits > 0) cfg.quant = hldsim::QuantSpec{c.bits, c.extra_sample_bit != 0};
  cfg.validate();
  if (cfg.quant) cfg.quant->validate();
  return cfg;
}

hldsim_network_config from_config(const hldsim::NetworkConfig& cfg) {
  hldsim_network_config c{};
  c.distance = cfg.d;
  c.n1 = cfg.n1;
  c.n2 = cfg.n2;
  c.transfer = from_transfer(cfg.transfer);
  c.rotated = cfg.rotated ? 1 : 0;
  c.bits = cfg.quant ? cfg.quant->bits : 0;
  c.extra_sample_bit = cfg.quant && cfg.quant->extra_sample_bit ? 1 : 0;
  return c;
}

hldsim::TrainConfig to_train(const hldsim_train_config& c) {
  hldsim::TrainConfig tc;
  tc.batch_size = c.batch_size;
  tc.n_batches = c.n_batches;
  tc.learning_rate = c.learning_rate;
  tc.beta1 = c.beta1;
  tc.beta2 = c.beta2;
  tc.epsilon = c.epsilon;
  tc.reg_scale = c.reg_scale;
  tc.reg_bits = c.reg_bits;
  tc.p_train = c.p_train;
  tc.seed = c.seed;
  tc.log_every = c.log_every;
  tc.threads = c.threads;
  tc.validate();
  return tc;
}

hldsim_cost to_cost(const hldsim::CostCounts& c) {
  return {c.pp_bits, c.fa_count, c.tree_depth, c.nl_bitops, c.nl_depth, c.bitops};
}

hldsim::BenchmarkPoint to_point(const hldsim_benchmark_point& p) {
  return {p.eps_p, p.eps_l, p.shots, p.failures, p.variance};
}

}  // namespace

extern "C" {

const char* hldsim_version(void) { return HLDSIM_VERSION; }

const char* hldsim_last_error(void) { return g_last_error.c_str(); }

const char* hldsim_status_string(hldsim_status status) {
  switch (status) {
    case HLDSIM_OK:
      return "ok";
    case HLDSIM_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HLDSIM_ERR_NOT_FOUND:
      return "not found";
    case HLDSIM_ERR_IO:
      return "i/o error";
    case HLDSIM_ERR_FORMAT:
      return "malformed input";
    case HLDSIM_ERR_NO_CROSSING:
      return "no crossing";
    case HLDSIM_ERR_NOT_CONVERGED:
      return "not converged";
    case HLDSIM_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case HLDSIM_ERR_RUNTIME:
      return "runtime error";
    case HLDSIM_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

hldsim_status hldsim_layout_create(int distance, hldsim_layout** out) {
  return guard([&] {
    HLDSIM_REQUIRE(out, "null output handle");
    *out = new hldsim_layout{hldsim::Layout(distance)};
    return HLDSIM_OK;
  });
}

void hldsim_layout_destroy(hldsim_layout* layout) { delete layout; }

int hldsim_layout_distance(const hldsim_layout* layout) {
  return layout ? layout->layout.distance() : 0;
}

int hldsim_layout_num_data(const hldsim_layout* layout) {
  return layout ? layout->layout.num_data() : 0;
}

int hldsim_layout_num_ancillas(const hldsim_layout* layout) {
  return layout ? layout->layout.num_ancillas() : 0;
}

hldsim_status hldsim_layout_json(const hldsim_layout* layout, char* buf, size_t cap,
                                 size_t* needed) {
  return guard([&] {
    HLDSIM_REQUIRE(layout, "null layout");
    const std::string json = layout->layout.to_json();
    if (needed) *needed = json.size() + 1;
    if (!buf || cap < json.size() + 1) {
      return fail(HLDSIM_ERR_BUFFER_TOO_SMALL, "buffer too small for layout JSON");
    }
    std::memcpy(buf, json.c_str(), json.size() + 1);
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_syndrome(const hldsim_layout* layout, const uint8_t* x, const uint8_t* z,
                              uint8_t* syndrome) {
  return guard([&] {
    HLDSIM_REQUIRE(layout && x && z && syndrome, "null argument");
    const auto& lay = layout->layout;
    hldsim::ErrorConfig e(lay.num_data());
    for (int q = 0; q < lay.num_data(); ++q) {
      e.x[q] = x[q] ? 1 : 0;
      e.z[q] = z[q] ? 1 : 0;
    }
    const auto s = hldsim::compute_syndrome(lay, e);
    std::memcpy(syndrome, s.bits.data(), s.bits.size());
    return HLDSIM_OK;
  });
}

void hldsim_network_config_default(hldsim_network_config* cfg) {
  if (cfg) *cfg = from_config(hldsim::NetworkConfig{});
}

hldsim_status hldsim_network_create(const hldsim_network_config* cfg, uint64_t seed,
                                    hldsim_network** out) {
  return guard([&] {
    HLDSIM_REQUIRE(cfg && out, "null argument");
    auto net = std::make_unique<hldsim_network>();
    net->ck.cfg = to_config(*cfg);
    const hldsim::Layout layout(net->ck.cfg.d);
    if (net->ck.cfg.rotated) {
      net->ck.base = hldsim::init_base_weights(net->ck.cfg, seed);
      net->ck.weights = hldsim::expand_rotated(net->ck.cfg, *net->ck.base, layout);
    } else {
      net->ck.weights = hldsim::init_weights(net->ck.cfg, seed);
    }
    if (net->ck.cfg.quant) {
      net->ck.quantized = hldsim::quantize_weights(*net->ck.weights, *net->ck.cfg.quant);
    }
    *out = net.release();
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_network_load(const char* path, hldsim_network** out) {
  return guard([&] {
    HLDSIM_REQUIRE(path && out, "null argument");
    auto net = std::make_unique<hldsim_network>();
    net->ck = hldsim::load_checkpoint(path);
    *out = net.release();
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_network_save(const hldsim_network* net, const char* path) {
  return guard([&] {
    HLDSIM_REQUIRE(net && path, "null argument");
    hldsim::save_checkpoint(path, net->ck);
    return HLDSIM_OK;
  });
}

void hldsim_network_destroy(hldsim_network* net) { delete net; }

hldsim_status hldsim_network_get_config(const hldsim_network* net, hldsim_network_config* cfg) {
  return guard([&] {
    HLDSIM_REQUIRE(net && cfg, "null argument");
    *cfg = from_config(net->ck.cfg);
    return HLDSIM_OK;
  });
}

int64_t hldsim_network_samples_seen(const hldsim_network* net) {
  return net ? net->ck.samples_seen : 0;
}

hldsim_status hldsim_network_quantize(const hldsim_network* net, int bits, int extra_sample_bit,
                                      hldsim_network** out) {
  return guard([&] {
    HLDSIM_REQUIRE(net && out, "null argument");
    const hldsim::QuantSpec spec{bits, extra_sample_bit != 0};
    spec.validate();
    auto q = std::make_unique<hldsim_network>();
    q->ck = net->ck;
    q->ck.weights = net->ck.float_weights();
    q->ck.cfg.quant = spec;
    q->ck.quantized = hldsim::quantize_weights(*q->ck.weights, spec);
    *out = q.release();
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_network_predict(const hldsim_network* net, const uint8_t* syndrome, size_t n,
                                     int* lx, int* lz) {
  return guard([&] {
    HLDSIM_REQUIRE(net && syndrome && lx && lz, "null argument");
    hldsim::Syndrome s(n);
    for (size_t i = 0; i < n; ++i) s.bits[i] = syndrome[i] ? 1 : 0;
    hldsim::LogicalClass cls;
    if (net->ck.quantized) {
      cls = hldsim::forward_fixed(net->ck.cfg, *net->ck.quantized, s);
    } else {
      cls = hldsim::forward_float(net->ck.cfg, *net->ck.weights, s).cls;
    }
    *lx = cls.lx ? 1 : 0;
    *lz = cls.lz ? 1 : 0;
    return HLDSIM_OK;
  });
}

void hldsim_train_config_default(hldsim_train_config* cfg) {
  if (!cfg) return;
  const hldsim::TrainConfig tc;
  *cfg = hldsim_train_config{tc.batch_size, tc.n_batches, tc.learning_rate, tc.beta1,
                             tc.beta2,      tc.epsilon,   tc.reg_scale,     tc.reg_bits,
                             tc.p_train,    tc.seed,      tc.log_every,     tc.threads};
}

hldsim_status hldsim_train(hldsim_network* net, const hldsim_train_config* cfg,
                           hldsim_train_callback callback, void* user) {
  return guard([&] {
    HLDSIM_REQUIRE(net && cfg, "null argument");
    const hldsim::TrainConfig tc = to_train(*cfg);
    auto& ck = net->ck;
    if (ck.cfg.rotated && !ck.base) {
      return fail(HLDSIM_ERR_INVALID_ARGUMENT, "rotated network has no base weights to train");
    }
    const hldsim::Layout layout(ck.cfg.d);
    const int64_t start_samples = ck.samples_seen;

    auto snapshot = [&](const hldsim::Weights& w, const std::optional<hldsim::BaseWeights>& base,
                        int64_t seen) {
      hldsim_network cur;
      cur.ck.cfg = ck.cfg;
      cur.ck.weights = w;
      cur.ck.base = base;
      cur.ck.samples_seen = seen;
      if (ck.cfg.quant) cur.ck.quantized = hldsim::quantize_weights(w, *ck.cfg.quant);
      return cur;
    };
    hldsim::TrainCallback on_log;
    if (callback) {
      on_log = [&](const hldsim::TrainLogRow& row, const hldsim::Weights& w,
                   const std::optional<hldsim::BaseWeights>& base) {
        const int64_t seen = start_samples + row.samples_seen;
        hldsim_network cur = snapshot(w, base, seen);
        const hldsim_train_row r{row.iteration, seen, row.ler, row.loss};
        callback(&r, &cur, user);
      };
    }
    auto result = hldsim::train_loop_from(tc, ck.cfg, layout, ck.float_weights(), ck.base, on_log);
    ck.weights = std::move(result.weights);
    ck.base = std::move(result.base);
    ck.samples_seen = start_samples + tc.batch_size * tc.n_batches;
    if (ck.cfg.quant) ck.quantized = hldsim::quantize_weights(*ck.weights, *ck.cfg.quant);
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_decoder_create(int distance, hldsim_decoder_kind kind,
                                    const hldsim_network* net, hldsim_decoder** out) {
  return guard([&] {
    HLDSIM_REQUIRE(out, "null output handle");
    auto dec = std::make_unique<hldsim_decoder>();
    dec->layout = std::make_unique<hldsim::Layout>(distance);
    switch (kind) {
      case HLDSIM_DECODER_TRIVIAL:
        dec->decoder = std::make_unique<hldsim::TrivialDecoder>(*dec->layout);
        break;
      case HLDSIM_DECODER_MWPM:
        dec->decoder = std::make_unique<hldsim::MatchingDecoder>(*dec->layout);
        break;
      case HLDSIM_DECODER_HLD:
        HLDSIM_REQUIRE(net, "the hld decoder needs a network");
        if (net->ck.quantized) {
          dec->decoder = std::make_unique<hldsim::HighLevelDecoder>(*dec->layout, net->ck.cfg,
                                                                    *net->ck.quantized);
        } else {
          dec->decoder = std::make_unique<hldsim::HighLevelDecoder>(*dec->layout, net->ck.cfg,
                                                                    net->ck.float_weights());
        }
        break;
      default:
        return fail(HLDSIM_ERR_INVALID_ARGUMENT, "unknown decoder kind");
    }
    *out = dec.release();
    return HLDSIM_OK;
  });
}

void hldsim_decoder_destroy(hldsim_decoder* decoder) { delete decoder; }

hldsim_status hldsim_decode(const hldsim_decoder* decoder, const uint8_t* syndrome,
                            size_t n_syndrome, uint8_t* x, uint8_t* z, size_t n_data) {
  return guard([&] {
    HLDSIM_REQUIRE(decoder && syndrome && x && z, "null argument");
    const auto& lay = *decoder->layout;
    HLDSIM_REQUIRE(n_syndrome == static_cast<size_t>(lay.num_ancillas()),
                   "syndrome length does not match the distance");
    HLDSIM_REQUIRE(n_data == static_cast<size_t>(lay.num_data()),
                   "output length does not match the distance");
    hldsim::Syndrome s(n_syndrome);
    for (size_t i = 0; i < n_syndrome; ++i) {
      HLDSIM_REQUIRE(syndrome[i] <= 1, "syndrome entries must be 0 or 1");
      s.bits[i] = syndrome[i];
    }
    hldsim::ErrorConfig e(n_data);
    decoder->decoder->correct(s, e);
    std::memcpy(x, e.x.data(), n_data);
    std::memcpy(z, e.z.data(), n_data);
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_benchmark(const hldsim_decoder* decoder, const double* eps, size_t n_eps,
                               int64_t shots, uint64_t seed, int threads, hldsim_failure_mode mode,
                               hldsim_benchmark_point* out) {
  return guard([&] {
    HLDSIM_REQUIRE(decoder && (eps || n_eps == 0) && out, "null argument");
    hldsim::BenchmarkOptions opt;
    opt.threads = threads;
    switch (mode) {
      case HLDSIM_FAIL_ANY:
        opt.mode = hldsim::FailureMode::kAny;
        break;
      case HLDSIM_FAIL_X:
        opt.mode = hldsim::FailureMode::kX;
        break;
      case HLDSIM_FAIL_Z:
        opt.mode = hldsim::FailureMode::kZ;
        break;
      default:
        return fail(HLDSIM_ERR_INVALID_ARGUMENT, "unknown failure mode");
    }
    const auto pts = hldsim::benchmark(*decoder->decoder, *decoder->layout,
                                       std::span<const double>(eps, n_eps), shots, seed, opt);
    for (size_t i = 0; i < pts.size(); ++i) {
      out[i] = {pts[i].eps_p, pts[i].eps_l, pts[i].shots, pts[i].failures, pts[i].variance};
    }
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_log_spaced(double lo, double hi, int n, double* out) {
  return guard([&] {
    HLDSIM_REQUIRE(out, "null argument");
    const auto v = hldsim::log_spaced(lo, hi, n);
    std::copy(v.begin(), v.end(), out);
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_pseudo_threshold(const hldsim_benchmark_point* points, size_t n, double* p_th,
                                      double* ci_low, double* ci_high) {
  return guard([&] {
    HLDSIM_REQUIRE((points || n == 0) && p_th, "null argument");
    std::vector<hldsim::BenchmarkPoint> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back(to_point(points[i]));
    const auto pt = hldsim::pseudo_threshold(pts);
    *p_th = pt.p_th;
    if (ci_low) *ci_low = pt.ci_low;
    if (ci_high) *ci_high = pt.ci_high;
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_fit(const hldsim_benchmark_point* points, size_t n, hldsim_fit_result* out) {
  return guard([&] {
    HLDSIM_REQUIRE((points || n == 0) && out, "null argument");
    std::vector<hldsim::BenchmarkPoint> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back(to_point(points[i]));
    const auto fit = hldsim::fit_model(pts);
    *out = {fit.p_th, fit.s, fit.c, fit.residual, fit.evaluations, fit.converged ? 1 : 0};
    if (!fit.converged) return fail(HLDSIM_ERR_NOT_CONVERGED, fit.message.c_str());
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_node_cost(int m, int bits, hldsim_transfer transfer, hldsim_node_kind kind,
                               hldsim_cost* out) {
  return guard([&] {
    HLDSIM_REQUIRE(out, "null argument");
    hldsim::NodeKind k;
    switch (kind) {
      case HLDSIM_NODE_INPUT:
        k = hldsim::NodeKind::kInput;
        break;
      case HLDSIM_NODE_HIDDEN:
        k = hldsim::NodeKind::kHidden;
        break;
      case HLDSIM_NODE_OUTPUT:
        k = hldsim::NodeKind::kOutput;
        break;
      default:
        return fail(HLDSIM_ERR_INVALID_ARGUMENT, "unknown node kind");
    }
    *out = to_cost(hldsim::node_cost(m, bits, to_transfer(transfer), k));
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_network_cost(const hldsim_network_config* cfg, hldsim_cost* total,
                                  hldsim_cost* layers) {
  return guard([&] {
    HLDSIM_REQUIRE(cfg && total, "null argument");
    const auto report = hldsim::network_cost(to_config(*cfg));
    *total = to_cost(report.total);
    if (layers) {
      for (size_t i = 0; i < report.layers.size(); ++i) layers[i] = to_cost(report.layers[i].total);
    }
    return HLDSIM_OK;
  });
}

hldsim_status hldsim_pareto_front(const double* cost, const double* performance, size_t n,
                                  size_t* out_idx, size_t* out_n) {
  return guard([&] {
    HLDSIM_REQUIRE(((cost && performance && out_idx) || n == 0) && out_n, "null argument");
    std::vector<hldsim::ParetoPoint> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {cost[i], performance[i]};
    const auto front = hldsim::pareto_front(pts);
    std::copy(front.begin(), front.end(), out_idx);
    *out_n = front.size();
    return HLDSIM_OK;
  });
}

}  // extern "C"
