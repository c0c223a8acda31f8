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

#ifndef HLDSIM_TRAIN_HPP_
#define HLDSIM_TRAIN_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hldsim/lattice.hpp"
#include "hldsim/nn.hpp"
#include "hldsim/types.hpp"

namespace hldsim {

/// MWPM pseudo-thresholds used as the default training error rate.
double default_train_rate(int d);

struct TrainConfig {
  int64_t batch_size = 4992;
  int64_t n_batches = 300000;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double reg_scale = 0.0;
  int reg_bits = 8;
  /// Physical error rate of the training samples; <= 0 selects
  /// default_train_rate(d).
  double p_train = 0.0;
  uint64_t seed = 1;
  /// Batches per logged iteration.
  int64_t log_every = 2000;
  int threads = 1;

  /// Throws std::invalid_argument on an invalid field.
  void validate() const;
};

struct Sample {
  Syndrome syndrome;
  LogicalClass target;
};

/// Logical difference between the actual error and the pure error, i.e. the
/// class the network has to predict. Throws std::invalid_argument if the two
/// configurations have different syndromes.
LogicalClass make_target(const Layout& layout, const ErrorConfig& actual, const ErrorConfig& ped_out);

/// Sum of squared output errors against +-1 targets plus
/// reg_scale * (sum w^2 + sum (w - w_q)^2) over every weight and bias, where
/// w_q is the nearest level of the reg_bits grid.
double loss(std::span<const std::array<double, 2>> outputs, std::span<const LogicalClass> targets,
            const Params& weights, double reg_scale, int reg_bits);

struct GradientResult {
  Weights grad;
  double loss = 0.0;
  int64_t errors = 0;  // samples whose sign prediction misses the target
};

/// Exact gradient of loss() with respect to the full weights. The
/// quantization target w_q is held constant, giving 2 (w - w_q) for the
/// second regularizer. Per-sample contributions are reduced in fixed blocks
/// so the result does not depend on `threads`.
GradientResult gradients(const NetworkConfig& cfg, const Weights& w, std::span<const Sample> batch,
                         double reg_scale, int reg_bits, int threads = 1);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t t = 0;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected ADAM update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state, double lr,
               double beta1, double beta2, double eps);

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per tensor; biases use the
/// fan-in of their layer.
Weights init_weights(const NetworkConfig& cfg, uint64_t seed);
BaseWeights init_base_weights(const NetworkConfig& cfg, uint64_t seed);

struct TrainLogRow {
  int64_t iteration = 0;
  int64_t samples_seen = 0;
  double ler = 0.0;
  double loss = 0.0;  // mean per sample over the iteration
};

struct TrainResult {
  Weights weights;
  std::optional<BaseWeights> base;  // rotated networks only
  std::vector<TrainLogRow> log;
};

/// Called after every logged iteration with the current state.
using TrainCallback = std::function<void(const TrainLogRow&, const Weights&,
                                         const std::optional<BaseWeights>&)>;

/// On-the-fly training: each batch samples fresh depolarizing errors at
/// p_train, targets come from the pure-error decoder, and one ADAM step is
/// taken on the regularized loss. Rotated networks update the base weights
/// and re-expand. Throws std::runtime_error on a non-finite loss.
TrainResult train_loop(const TrainConfig& tc, const NetworkConfig& cfg, const Layout& layout,
                       const TrainCallback& on_log = {});

/// Continues from given weights (and base weights for rotated networks).
TrainResult train_loop_from(const TrainConfig& tc, const NetworkConfig& cfg, const Layout& layout,
                            Weights start, std::optional<BaseWeights> start_base,
                            const TrainCallback& on_log = {});

}  // namespace hldsim

#endif  // HLDSIM_TRAIN_HPP_
