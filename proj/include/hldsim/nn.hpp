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

#ifndef HLDSIM_NN_HPP_
#define HLDSIM_NN_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hldsim/lattice.hpp"
#include "hldsim/types.hpp"

namespace hldsim {

enum class Transfer { kTanh, kRelu, kSqnl };

std::string_view to_string(Transfer fn);
/// Accepts "tanh", "relu", "sqnl" (case-insensitive).
Transfer parse_transfer(std::string_view name);

double transfer(Transfer fn, double x);
double transfer_derivative(Transfer fn, double x);

/// Two's complement fixed point with `bits` total bits and bits-1 fractional
/// bits, i.e. values k * 2^-(bits-1) in [-1, 1 - 2^-(bits-1)]. With
/// extra_sample_bit the sampling grid (weights and data) uses one more bit.
struct QuantSpec {
  int bits = 9;
  bool extra_sample_bit = false;

  int effective_bits() const { return bits + (extra_sample_bit ? 1 : 0); }
  int frac_bits() const { return effective_bits() - 1; }
  /// Throws std::invalid_argument unless 3 <= bits <= 9.
  void validate() const;
  friend bool operator==(const QuantSpec&, const QuantSpec&) = default;
};

struct NetworkConfig {
  int d = 3;
  int n1 = 16;
  int n2 = 4;
  Transfer transfer = Transfer::kSqnl;
  bool rotated = true;
  std::optional<QuantSpec> quant;

  int num_inputs() const { return d * d - 1; }
  /// Throws std::invalid_argument on a non-positive layer size, an invalid
  /// distance, or rotated layers not divisible by four.
  void validate() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct TensorSizes {
  std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0, wout = 0, bout = 0;
  std::size_t total() const { return w1 + b1 + w2 + b2 + wout + bout; }
  friend bool operator==(const TensorSizes&, const TensorSizes&) = default;
};

/// Six parameter tensors stored back to back so optimisers and
/// regularisers can treat them as one flat vector. Matrices are row-major
/// with one row per destination node.
class Params {
 public:
  Params() = default;
  explicit Params(const TensorSizes& sizes) : sizes_(sizes), data_(sizes.total(), 0.0) {}

  const TensorSizes& sizes() const { return sizes_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> all() { return data_; }
  std::span<const double> all() const { return data_; }

  std::span<double> w1() { return slice(0, sizes_.w1); }
  std::span<double> b1() { return slice(off_b1(), sizes_.b1); }
  std::span<double> w2() { return slice(off_w2(), sizes_.w2); }
  std::span<double> b2() { return slice(off_b2(), sizes_.b2); }
  std::span<double> wout() { return slice(off_wout(), sizes_.wout); }
  std::span<double> bout() { return slice(off_bout(), sizes_.bout); }
  std::span<const double> w1() const { return slice(0, sizes_.w1); }
  std::span<const double> b1() const { return slice(off_b1(), sizes_.b1); }
  std::span<const double> w2() const { return slice(off_w2(), sizes_.w2); }
  std::span<const double> b2() const { return slice(off_b2(), sizes_.b2); }
  std::span<const double> wout() const { return slice(off_wout(), sizes_.wout); }
  std::span<const double> bout() const { return slice(off_bout(), sizes_.bout); }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  std::size_t off_b1() const { return sizes_.w1; }
  std::size_t off_w2() const { return off_b1() + sizes_.b1; }
  std::size_t off_b2() const { return off_w2() + sizes_.w2; }
  std::size_t off_wout() const { return off_b2() + sizes_.b2; }
  std::size_t off_bout() const { return off_wout() + sizes_.wout; }
  std::span<double> slice(std::size_t off, std::size_t n) { return {data_.data() + off, n}; }
  std::span<const double> slice(std::size_t off, std::size_t n) const {
    return {data_.data() + off, n};
  }

  TensorSizes sizes_;
  std::vector<double> data_;
};

/// Full network: W1 (n1 x inputs), b1, W2 (n2 x n1), b2, Wout (2 x n2), bout
/// (2). Output row 0 signals logical X, row 1 logical Z.
class Weights : public Params {
 public:
  Weights() = default;
  explicit Weights(const NetworkConfig& cfg);
};

/// Independent parameters of a rotation-shared network: W1 (n1/4 x inputs),
/// b1 (n1/4), W2 (n2/4 x n1), b2 (n2/4), Wout (2 x n2/4), bout (1).
class BaseWeights : public Params {
 public:
  BaseWeights() = default;
  explicit BaseWeights(const NetworkConfig& cfg);
};

TensorSizes full_sizes(const NetworkConfig& cfg);
TensorSizes base_sizes(const NetworkConfig& cfg);

/// Expands quarter-size weights into a network whose outputs swap X and Z
/// when the input syndrome is rotated by 90 degrees. Hidden node j of group g
/// in layer 1 sees the syndrome through rot_anc^-g; layer 2 is block
/// circulant over groups; output o of group g reads base row sigma^g(o) where
/// sigma swaps X and Z; the output bias is shared.
/// Throws std::invalid_argument if the config is not rotated or shapes differ.
Weights expand_rotated(const NetworkConfig& cfg, const BaseWeights& base, const Layout& layout);

/// Adjoint of expand_rotated: sums a full-shape gradient over the four copies
/// of every base parameter.
BaseWeights fold_rotated(const NetworkConfig& cfg, const Weights& full, const Layout& layout);

struct ForwardOutput {
  double yx = 0.0;
  double yz = 0.0;
  LogicalClass cls;
};

/// Float inference. Hidden layers apply the transfer function, the two
/// output nodes are affine and classify by strict sign.
/// Throws std::invalid_argument on shape mismatch or non-finite weights.
ForwardOutput forward_float(const NetworkConfig& cfg, const Weights& w, const Syndrome& s);
/// Same without validation, for callers that checked the weights once.
ForwardOutput forward_float_unchecked(const NetworkConfig& cfg, const Weights& w,
                                      std::span<const uint8_t> s);

// ---------------------------------------------------------------------------
// Fixed point.

/// Weights as signed integer codes; value = code * 2^-frac_bits.
struct QuantizedWeights {
  QuantSpec spec;
  TensorSizes sizes;
  std::vector<int32_t> w1, b1, w2, b2, wout, bout;

  double value(int32_t code) const;
  friend bool operator==(const QuantizedWeights&, const QuantizedWeights&) = default;
};

/// Nearest level of the `bits`-bit grid (ties toward -inf), clipped to
/// [-1, 1 - 2^-(bits-1)]. Returned as an integer code.
int32_t quantize_code(double w, int bits);
double quantize_value(double w, int bits);

/// Quantizes every tensor on the sampling grid of `q`.
QuantizedWeights quantize_weights(const Params& weights, const QuantSpec& q);
/// Float view of quantized weights.
Weights dequantize(const NetworkConfig& cfg, const QuantizedWeights& q);

/// Fixed-point transfer block. `acc` carries `acc_frac` fractional bits; the
/// result carries `out_frac` fractional bits, truncated toward -inf and
/// saturated to [-1, 1 - 2^-out_frac].
///
/// SQNL follows the node datapath: the fractional part u of the two's
/// complement accumulator goes through a squaring unit and
///   x >= 0:  y = 2u - u^2
///   x <  0:  y = u^2 - 1        (x = u - 1)
/// which equals Eq. SQNL without evaluating x^2 on the signed value.
int64_t transfer_fixed(Transfer fn, int64_t acc, int acc_frac, int out_frac);

/// Bit-exact integer emulation of the node datapath. Layer-1 inputs are
/// single bits (AND instead of multiply), accumulators are exact, hidden
/// outputs go through transfer_fixed, output nodes report sign bits only.
/// Throws std::invalid_argument if cfg.quant is missing, the weights were
/// quantized with a different spec, or shapes do not match.
LogicalClass forward_fixed(const NetworkConfig& cfg, const QuantizedWeights& q, const Syndrome& s);
LogicalClass forward_fixed_unchecked(const NetworkConfig& cfg, const QuantizedWeights& q,
                                     std::span<const uint8_t> s);

}  // namespace hldsim

#endif  // HLDSIM_NN_HPP_
