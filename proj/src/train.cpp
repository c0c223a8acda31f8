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

#include "hldsim/train.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "hldsim/noise.hpp"
#include "hldsim/ped.hpp"

namespace hldsim {

double default_train_rate(int d) {
  switch (d) {
    case 3:
      return 0.08251;
    case 5:
      return 0.10372;
    case 7:
      return 0.11368;
    case 9:
      return 0.11932;
    default:
      return 0.12;
  }
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (n_batches < 0) throw std::invalid_argument("n_batches must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("ADAM betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("ADAM epsilon must be positive");
  if (!(reg_scale >= 0.0)) throw std::invalid_argument("reg_scale must be >= 0");
  if (reg_bits < 2 || reg_bits > 8) throw std::invalid_argument("reg_bits must lie in [2, 8]");
  if (p_train > 1.0) throw std::invalid_argument("p_train must be <= 1");
  if (log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

LogicalClass make_target(const Layout& layout, const ErrorConfig& actual, const ErrorConfig& ped_out) {
  if (!(compute_syndrome(layout, actual) == compute_syndrome(layout, ped_out))) {
    throw std::invalid_argument("actual error and pure error have different syndromes");
  }
  return logical_class_unchecked(layout, actual ^ ped_out);
}

namespace {

double target_value(bool bit) { return bit ? 1.0 : -1.0; }

double regularizer(std::span<const double> w, double reg_scale, int reg_bits) {
  if (reg_scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : w) {
    const double dq = v - quantize_value(v, reg_bits);
    sum += v * v + dq * dq;
  }
  return reg_scale * sum;
}

constexpr std::size_t kBlock = 64;

struct Scratch {
  std::vector<double> a1, h1, a2, h2, dh1, da2;
};

// Adds the gradient of sum (y - t)^2 over samples [begin, end) into `g`.
void accumulate_block(const NetworkConfig& cfg, const Weights& w, std::span<const Sample> batch,
                      std::size_t begin, std::size_t end, Weights& g, double& loss_sum,
                      int64_t& errors, Scratch& sc) {
  const int nin = cfg.num_inputs();
  const int n1 = cfg.n1;
  const int n2 = cfg.n2;
  sc.a1.resize(n1);
  sc.h1.resize(n1);
  sc.a2.resize(n2);
  sc.h2.resize(n2);
  sc.dh1.resize(n1);
  sc.da2.resize(n2);
  const auto w1 = w.w1();
  const auto w2 = w.w2();
  const auto wout = w.wout();
  auto gw1 = g.w1();
  auto gb1 = g.b1();
  auto gw2 = g.w2();
  auto gb2 = g.b2();
  auto gwout = g.wout();
  auto gbout = g.bout();
  for (std::size_t n = begin; n < end; ++n) {
    const auto& s = batch[n].syndrome.bits;
    for (int j = 0; j < n1; ++j) {
      double acc = w.b1()[j];
      const double* row = w1.data() + static_cast<std::size_t>(j) * nin;
      for (int i = 0; i < nin; ++i) {
        if (s[i]) acc += row[i];
      }
      sc.a1[j] = acc;
      sc.h1[j] = transfer(cfg.transfer, acc);
    }
    for (int k = 0; k < n2; ++k) {
      double acc = w.b2()[k];
      const double* row = w2.data() + static_cast<std::size_t>(k) * n1;
      for (int j = 0; j < n1; ++j) acc += row[j] * sc.h1[j];
      sc.a2[k] = acc;
      sc.h2[k] = transfer(cfg.transfer, acc);
    }
    double dy[2];
    bool wrong = false;
    const bool tgt[2] = {batch[n].target.lx, batch[n].target.lz};
    for (int o = 0; o < 2; ++o) {
      double y = w.bout()[o];
      const double* row = wout.data() + static_cast<std::size_t>(o) * n2;
      for (int k = 0; k < n2; ++k) y += row[k] * sc.h2[k];
      const double diff = y - target_value(tgt[o]);
      loss_sum += diff * diff;
      dy[o] = 2.0 * diff;
      if ((y > 0.0) != tgt[o]) wrong = true;
    }
    if (wrong) ++errors;

    std::fill(sc.da2.begin(), sc.da2.end(), 0.0);
    for (int o = 0; o < 2; ++o) {
      gbout[o] += dy[o];
      const double* row = wout.data() + static_cast<std::size_t>(o) * n2;
      double* grow = gwout.data() + static_cast<std::size_t>(o) * n2;
      for (int k = 0; k < n2; ++k) {
        grow[k] += dy[o] * sc.h2[k];
        sc.da2[k] += dy[o] * row[k];
      }
    }
    std::fill(sc.dh1.begin(), sc.dh1.end(), 0.0);
    for (int k = 0; k < n2; ++k) {
      const double da = sc.da2[k] * transfer_derivative(cfg.transfer, sc.a2[k]);
      if (da == 0.0) continue;
      gb2[k] += da;
      const double* row = w2.data() + static_cast<std::size_t>(k) * n1;
      double* grow = gw2.data() + static_cast<std::size_t>(k) * n1;
      for (int j = 0; j < n1; ++j) {
        grow[j] += da * sc.h1[j];
        sc.dh1[j] += da * row[j];
      }
    }
    for (int j = 0; j < n1; ++j) {
      const double da = sc.dh1[j] * transfer_derivative(cfg.transfer, sc.a1[j]);
      if (da == 0.0) continue;
      gb1[j] += da;
      double* grow = gw1.data() + static_cast<std::size_t>(j) * nin;
      for (int i = 0; i < nin; ++i) {
        if (s[i]) grow[i] += da;
      }
    }
  }
}

}  // namespace

double loss(std::span<const std::array<double, 2>> outputs, std::span<const LogicalClass> targets,
            const Params& weights, double reg_scale, int reg_bits) {
  if (outputs.size() != targets.size()) {
    throw std::invalid_argument("outputs and targets differ in length");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < outputs.size(); ++n) {
    const double dx = outputs[n][0] - target_value(targets[n].lx);
    const double dz = outputs[n][1] - target_value(targets[n].lz);
    sum += dx * dx + dz * dz;
  }
  return sum + regularizer(weights.all(), reg_scale, reg_bits);
}

GradientResult gradients(const NetworkConfig& cfg, const Weights& w, std::span<const Sample> batch,
                         double reg_scale, int reg_bits, int threads) {
  if (w.sizes() != full_sizes(cfg)) throw std::invalid_argument("weight shape mismatch");
  for (const auto& sample : batch) {
    if (static_cast<int>(sample.syndrome.size()) != cfg.num_inputs()) {
      throw std::invalid_argument("sample syndrome length does not match network inputs");
    }
  }
  GradientResult out{Weights(cfg), 0.0, 0};
  const std::size_t n_blocks = (batch.size() + kBlock - 1) / kBlock;

  if (threads <= 1 || n_blocks <= 1) {
    Weights block(cfg);
    Scratch sc;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      std::fill(block.all().begin(), block.all().end(), 0.0);
      double block_loss = 0.0;
      accumulate_block(cfg, w, batch, b * kBlock, std::min(batch.size(), (b + 1) * kBlock), block,
                       block_loss, out.errors, sc);
      auto dst = out.grad.all();
      auto src = block.all();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
      out.loss += block_loss;
    }
  } else {
    std::vector<Weights> blocks(n_blocks, Weights(cfg));
    std::vector<double> block_loss(n_blocks, 0.0);
    std::vector<int64_t> block_err(n_blocks, 0);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n_blocks);
    std::vector<std::future<void>> jobs;
    for (std::size_t t = 0; t < workers; ++t) {
      jobs.push_back(std::async(std::launch::async, [&, t] {
        Scratch sc;
        for (std::size_t b = t; b < n_blocks; b += workers) {
          accumulate_block(cfg, w, batch, b * kBlock, std::min(batch.size(), (b + 1) * kBlock),
                           blocks[b], block_loss[b], block_err[b], sc);
        }
      }));
    }
    for (auto& job : jobs) job.get();
    auto dst = out.grad.all();
    for (std::size_t b = 0; b < n_blocks; ++b) {
      auto src = blocks[b].all();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
      out.loss += block_loss[b];
      out.errors += block_err[b];
    }
  }

  if (reg_scale != 0.0) {
    auto g = out.grad.all();
    auto v = w.all();
    for (std::size_t i = 0; i < v.size(); ++i) {
      g[i] += reg_scale * (2.0 * v[i] + 2.0 * (v[i] - quantize_value(v[i], reg_bits)));
    }
    out.loss += regularizer(v, reg_scale, reg_bits);
  }
  return out;
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, double lr,
               double beta1, double beta2, double eps) {
  if (params.size() != grad.size()) throw std::invalid_argument("gradient shape mismatch");
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.t = 0;
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

namespace {

void fill_uniform(std::span<double> dst, double fan_in, ShotRng& rng) {
  const double limit = 1.0 / std::sqrt(fan_in);
  for (double& v : dst) v = (2.0 * rng.uniform() - 1.0) * limit;
}

template <class P>
void init_params(P& p, const NetworkConfig& cfg, uint64_t seed) {
  ShotRng rng(seed, RngStream::kInit, 0);
  fill_uniform(p.w1(), cfg.num_inputs(), rng);
  fill_uniform(p.b1(), cfg.num_inputs(), rng);
  fill_uniform(p.w2(), cfg.n1, rng);
  fill_uniform(p.b2(), cfg.n1, rng);
  fill_uniform(p.wout(), cfg.n2, rng);
  fill_uniform(p.bout(), cfg.n2, rng);
}

}  // namespace

Weights init_weights(const NetworkConfig& cfg, uint64_t seed) {
  cfg.validate();
  Weights w(cfg);
  init_params(w, cfg, seed);
  return w;
}

BaseWeights init_base_weights(const NetworkConfig& cfg, uint64_t seed) {
  cfg.validate();
  BaseWeights w(cfg);
  init_params(w, cfg, seed);
  return w;
}

TrainResult train_loop(const TrainConfig& tc, const NetworkConfig& cfg, const Layout& layout,
                       const TrainCallback& on_log) {
  cfg.validate();
  if (cfg.rotated) {
    BaseWeights base = init_base_weights(cfg, tc.seed);
    Weights full = expand_rotated(cfg, base, layout);
    return train_loop_from(tc, cfg, layout, std::move(full), std::move(base), on_log);
  }
  return train_loop_from(tc, cfg, layout, init_weights(cfg, tc.seed), std::nullopt, on_log);
}

TrainResult train_loop_from(const TrainConfig& tc, const NetworkConfig& cfg, const Layout& layout,
                            Weights start, std::optional<BaseWeights> start_base,
                            const TrainCallback& on_log) {
  tc.validate();
  cfg.validate();
  if (layout.distance() != cfg.d) throw std::invalid_argument("layout distance mismatch");
  if (cfg.rotated && !start_base) {
    throw std::invalid_argument("rotated training needs base weights");
  }
  const double p = tc.p_train > 0.0 ? tc.p_train : default_train_rate(cfg.d);

  TrainResult result;
  result.weights = std::move(start);
  result.base = std::move(start_base);
  if (cfg.rotated) result.weights = expand_rotated(cfg, *result.base, layout);

  const PureErrorDecoder ped(layout);
  AdamState adam(cfg.rotated ? result.base->size() : result.weights.size());
  std::vector<Sample> batch(static_cast<std::size_t>(tc.batch_size));
  ErrorConfig actual(layout.num_data());
  ErrorConfig pure(layout.num_data());

  int64_t window_errors = 0;
  int64_t window_samples = 0;
  double window_loss = 0.0;
  for (int64_t b = 0; b < tc.n_batches; ++b) {
    for (int64_t k = 0; k < tc.batch_size; ++k) {
      ShotRng rng(tc.seed, RngStream::kTrain, static_cast<uint64_t>(b * tc.batch_size + k));
      Sample& sample = batch[static_cast<std::size_t>(k)];
      sample_depolarizing_into(layout, p, rng, actual);
      compute_syndrome_into(layout, actual, sample.syndrome);
      ped.decode_into(sample.syndrome, pure);
      actual ^= pure;
      sample.target = logical_class_unchecked(layout, actual);
    }
    GradientResult gr =
        gradients(cfg, result.weights, batch, tc.reg_scale, tc.reg_bits, tc.threads);
    if (!std::isfinite(gr.loss)) {
      std::ostringstream msg;
      msg << "non-finite loss at batch " << b << " (lr=" << tc.learning_rate
          << ", reg_scale=" << tc.reg_scale << ")";
      throw std::runtime_error(msg.str());
    }
    window_errors += gr.errors;
    window_samples += tc.batch_size;
    window_loss += gr.loss;

    if (cfg.rotated) {
      BaseWeights g = fold_rotated(cfg, gr.grad, layout);
      adam_step(result.base->all(), g.all(), adam, tc.learning_rate, tc.beta1, tc.beta2,
                tc.epsilon);
      result.weights = expand_rotated(cfg, *result.base, layout);
    } else {
      adam_step(result.weights.all(), gr.grad.all(), adam, tc.learning_rate, tc.beta1, tc.beta2,
                tc.epsilon);
    }

    if ((b + 1) % tc.log_every == 0 || b + 1 == tc.n_batches) {
      TrainLogRow row;
      row.iteration = (b + tc.log_every) / tc.log_every;
      row.samples_seen = (b + 1) * tc.batch_size;
      row.ler = static_cast<double>(window_errors) / static_cast<double>(window_samples);
      row.loss = window_loss / static_cast<double>(window_samples);
      result.log.push_back(row);
      if (on_log) on_log(row, result.weights, result.base);
      window_errors = 0;
      window_samples = 0;
      window_loss = 0.0;
    }
  }
  return result;
}

}  // namespace hldsim
