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

#ifndef HLDSIM_EVAL_HPP_
#define HLDSIM_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hldsim/lattice.hpp"
#include "hldsim/mwpm.hpp"
#include "hldsim/nn.hpp"
#include "hldsim/ped.hpp"
#include "hldsim/types.hpp"

namespace hldsim {

/// A decoder maps a syndrome to a correction with the same syndrome. The
/// layout passed at construction must outlive the decoder.
class Decoder {
 public:
  virtual ~Decoder() = default;
  virtual std::string name() const = 0;
  /// `out` must be sized for the layout; it is overwritten.
  virtual void correct(const Syndrome& s, ErrorConfig& out) const = 0;
};

/// Pure-error decoder alone, i.e. always predicts the identity class.
class TrivialDecoder : public Decoder {
 public:
  explicit TrivialDecoder(const Layout& layout) : ped_(layout) {}
  std::string name() const override { return "trivial"; }
  void correct(const Syndrome& s, ErrorConfig& out) const override;

 private:
  PureErrorDecoder ped_;
};

class MatchingDecoder : public Decoder {
 public:
  explicit MatchingDecoder(const Layout& layout) : mwpm_(layout) {}
  std::string name() const override { return "mwpm"; }
  void correct(const Syndrome& s, ErrorConfig& out) const override;

 private:
  MwpmDecoder mwpm_;
};

/// Pure-error decoder followed by the network's logical prediction. Built
/// from float weights or from quantized weights (bit-exact fixed point).
class HighLevelDecoder : public Decoder {
 public:
  HighLevelDecoder(const Layout& layout, NetworkConfig cfg, Weights weights);
  HighLevelDecoder(const Layout& layout, NetworkConfig cfg, QuantizedWeights weights);

  std::string name() const override { return "hld"; }
  void correct(const Syndrome& s, ErrorConfig& out) const override;
  LogicalClass predict(const Syndrome& s) const;

 private:
  const Layout* layout_;
  PureErrorDecoder ped_;
  NetworkConfig cfg_;
  Weights weights_;
  std::optional<QuantizedWeights> quantized_;
  ErrorConfig ops_[4];  // logical operators indexed by lx + 2 lz
};

/// Which residual bits count as a logical failure.
enum class FailureMode { kAny, kX, kZ };

struct BenchmarkOptions {
  int threads = 1;
  FailureMode mode = FailureMode::kAny;
};

struct BenchmarkPoint {
  double eps_p = 0.0;
  double eps_l = 0.0;
  int64_t shots = 0;
  int64_t failures = 0;
  double variance = 0.0;  // eps_l (1 - eps_l) / shots
};

BenchmarkPoint make_point(double eps_p, int64_t failures, int64_t shots);

/// Monte Carlo logical error rate per physical error rate. Shot k of point i
/// draws from ShotRng(splitmix64(seed + i), kEval, k), so results are
/// independent of the thread count.
/// Throws std::invalid_argument on an empty list, shots < 1 or p outside [0, 1].
std::vector<BenchmarkPoint> benchmark(const Decoder& decoder, const Layout& layout,
                                      std::span<const double> eps_list, int64_t shots, uint64_t seed,
                                      const BenchmarkOptions& options = {});

/// n values spaced evenly in log between lo and hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int n);

class NoCrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PseudoThreshold {
  double p_th = 0.0;
  double ci_low = 0.0;   // 99.9% interval
  double ci_high = 0.0;
};

/// Crossing of the logical error rate with eps_l = eps_p. Points are sorted
/// by eps_p and points with eps_l = 0 are ignored. The first adjacent pair
/// whose g = log eps_l - log eps_p changes sign is interpolated linearly in
/// (log eps_p, g). The interval propagates the two binomial variances
/// through the log and divides by the slope of g.
/// Throws NoCrossingError if no pair brackets the line.
PseudoThreshold pseudo_threshold(std::span<const BenchmarkPoint> points);

struct FitResult {
  double p_th = 0.0;
  double s = 0.0;
  double c = 0.0;
  double residual = 0.0;  // sum of squared log residuals
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

/// log eps_l = log p_th + s (1 - c eps_p) (log eps_p - log p_th)
double model_log_ler(double p_th, double s, double c, double eps_p);

/// Levenberg-Marquardt fit of model_log_ler in the log domain, seeded with
/// the pseudo-threshold (geometric mid-range if there is no crossing), the
/// end-to-end log-log slope and c = 0. On failure `converged` is false and
/// the best parameters so far are returned.
/// Throws std::invalid_argument with fewer than 4 points having eps_l > 0.
FitResult fit_model(std::span<const BenchmarkPoint> points);

}  // namespace hldsim

#endif  // HLDSIM_EVAL_HPP_
