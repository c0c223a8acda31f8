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

#include "hldsim/nn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hldsim {

std::string_view to_string(Transfer fn) {
  switch (fn) {
    case Transfer::kTanh:
      return "tanh";
    case Transfer::kRelu:
      return "relu";
    case Transfer::kSqnl:
      return "sqnl";
  }
  return "?";
}

Transfer parse_transfer(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "tanh") return Transfer::kTanh;
  if (lower == "relu") return Transfer::kRelu;
  if (lower == "sqnl") return Transfer::kSqnl;
  throw std::invalid_argument("unknown transfer function '" + std::string(name) + "'");
}

double transfer(Transfer fn, double x) {
  switch (fn) {
    case Transfer::kTanh:
      return std::tanh(x);
    case Transfer::kRelu:
      return x < 0.0 ? 0.0 : x;
    case Transfer::kSqnl:
      if (x < -1.0) return -1.0;
      if (x < 0.0) return 2.0 * x + x * x;
      if (x <= 1.0) return 2.0 * x - x * x;
      return 1.0;
  }
  return 0.0;
}

double transfer_derivative(Transfer fn, double x) {
  switch (fn) {
    case Transfer::kTanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Transfer::kRelu:
      return x < 0.0 ? 0.0 : 1.0;
    case Transfer::kSqnl:
      if (x < -1.0 || x > 1.0) return 0.0;
      return x < 0.0 ? 2.0 + 2.0 * x : 2.0 - 2.0 * x;
  }
  return 0.0;
}

void QuantSpec::validate() const {
  if (bits < 3 || bits > 9) {
    throw std::invalid_argument("quantization bits must lie in [3, 9], got " +
                                std::to_string(bits));
  }
}

void NetworkConfig::validate() const {
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("hidden layer sizes must be positive");
  if (rotated && (n1 % 4 != 0 || n2 % 4 != 0)) {
    throw std::invalid_argument("rotated networks need hidden sizes divisible by 4");
  }
  if (quant) quant->validate();
}

TensorSizes full_sizes(const NetworkConfig& cfg) {
  const auto nin = static_cast<std::size_t>(cfg.num_inputs());
  const auto n1 = static_cast<std::size_t>(cfg.n1);
  const auto n2 = static_cast<std::size_t>(cfg.n2);
  return {n1 * nin, n1, n2 * n1, n2, 2 * n2, 2};
}

TensorSizes base_sizes(const NetworkConfig& cfg) {
  if (cfg.n1 % 4 != 0 || cfg.n2 % 4 != 0) {
    throw std::invalid_argument("rotated networks need hidden sizes divisible by 4");
  }
  const auto nin = static_cast<std::size_t>(cfg.num_inputs());
  const auto q1 = static_cast<std::size_t>(cfg.n1 / 4);
  const auto q2 = static_cast<std::size_t>(cfg.n2 / 4);
  return {q1 * nin, q1, q2 * static_cast<std::size_t>(cfg.n1), q2, 2 * q2, 1};
}

Weights::Weights(const NetworkConfig& cfg) : Params(full_sizes(cfg)) {}
BaseWeights::BaseWeights(const NetworkConfig& cfg) : Params(base_sizes(cfg)) {}

namespace {

// perms[g][i] = rot_anc^-g(i).
std::array<std::vector<int>, 4> inverse_rotation_powers(const Layout& layout) {
  std::array<std::vector<int>, 4> perms;
  const int n = layout.num_ancillas();
  perms[0].resize(n);
  for (int i = 0; i < n; ++i) perms[0][i] = i;
  for (int g = 1; g < 4; ++g) {
    perms[g].resize(n);
    for (int i = 0; i < n; ++i) perms[g][i] = layout.rot_anc_inverse()[perms[g - 1][i]];
  }
  return perms;
}

void check_rotated(const NetworkConfig& cfg, const Layout& layout) {
  if (!cfg.rotated) throw std::invalid_argument("network is not rotation-shared");
  if (layout.distance() != cfg.d) throw std::invalid_argument("layout distance mismatch");
}

}  // namespace

Weights expand_rotated(const NetworkConfig& cfg, const BaseWeights& base, const Layout& layout) {
  check_rotated(cfg, layout);
  if (base.sizes() != base_sizes(cfg)) throw std::invalid_argument("base weight shape mismatch");
  const auto perms = inverse_rotation_powers(layout);
  const int nin = cfg.num_inputs();
  const int q1 = cfg.n1 / 4;
  const int q2 = cfg.n2 / 4;
  Weights w(cfg);
  auto w1 = w.w1();
  auto b1 = w.b1();
  for (int g = 0; g < 4; ++g) {
    for (int j = 0; j < q1; ++j) {
      for (int i = 0; i < nin; ++i) {
        w1[(g * q1 + j) * nin + i] = base.w1()[j * nin + perms[g][i]];
      }
      b1[g * q1 + j] = base.b1()[j];
    }
  }
  auto w2 = w.w2();
  auto b2 = w.b2();
  for (int g = 0; g < 4; ++g) {
    for (int j = 0; j < q2; ++j) {
      for (int gp = 0; gp < 4; ++gp) {
        const int h = ((gp - g) % 4 + 4) % 4;
        for (int jp = 0; jp < q1; ++jp) {
          w2[(g * q2 + j) * cfg.n1 + gp * q1 + jp] = base.w2()[j * cfg.n1 + h * q1 + jp];
        }
      }
      b2[g * q2 + j] = base.b2()[j];
    }
  }
  auto wout = w.wout();
  for (int o = 0; o < 2; ++o) {
    for (int g = 0; g < 4; ++g) {
      const int src = (g % 2 == 0) ? o : 1 - o;
      for (int j = 0; j < q2; ++j) wout[o * cfg.n2 + g * q2 + j] = base.wout()[src * q2 + j];
    }
  }
  w.bout()[0] = base.bout()[0];
  w.bout()[1] = base.bout()[0];
  return w;
}

BaseWeights fold_rotated(const NetworkConfig& cfg, const Weights& full, const Layout& layout) {
  check_rotated(cfg, layout);
  if (full.sizes() != full_sizes(cfg)) throw std::invalid_argument("weight shape mismatch");
  const auto perms = inverse_rotation_powers(layout);
  const int nin = cfg.num_inputs();
  const int q1 = cfg.n1 / 4;
  const int q2 = cfg.n2 / 4;
  BaseWeights base(cfg);
  for (int g = 0; g < 4; ++g) {
    for (int j = 0; j < q1; ++j) {
      for (int i = 0; i < nin; ++i) {
        base.w1()[j * nin + perms[g][i]] += full.w1()[(g * q1 + j) * nin + i];
      }
      base.b1()[j] += full.b1()[g * q1 + j];
    }
  }
  for (int g = 0; g < 4; ++g) {
    for (int j = 0; j < q2; ++j) {
      for (int gp = 0; gp < 4; ++gp) {
        const int h = ((gp - g) % 4 + 4) % 4;
        for (int jp = 0; jp < q1; ++jp) {
          base.w2()[j * cfg.n1 + h * q1 + jp] += full.w2()[(g * q2 + j) * cfg.n1 + gp * q1 + jp];
        }
      }
      base.b2()[j] += full.b2()[g * q2 + j];
    }
  }
  for (int o = 0; o < 2; ++o) {
    for (int g = 0; g < 4; ++g) {
      const int src = (g % 2 == 0) ? o : 1 - o;
      for (int j = 0; j < q2; ++j) base.wout()[src * q2 + j] += full.wout()[o * cfg.n2 + g * q2 + j];
    }
  }
  base.bout()[0] = full.bout()[0] + full.bout()[1];
  return base;
}

ForwardOutput forward_float_unchecked(const NetworkConfig& cfg, const Weights& w,
                                      std::span<const uint8_t> s) {
  thread_local std::vector<double> h1;
  thread_local std::vector<double> h2;
  const int nin = cfg.num_inputs();
  h1.resize(cfg.n1);
  h2.resize(cfg.n2);
  const auto w1 = w.w1();
  for (int j = 0; j < cfg.n1; ++j) {
    double acc = w.b1()[j];
    const double* row = w1.data() + static_cast<std::size_t>(j) * nin;
    for (int i = 0; i < nin; ++i) {
      if (s[i]) acc += row[i];
    }
    h1[j] = transfer(cfg.transfer, acc);
  }
  const auto w2 = w.w2();
  for (int j = 0; j < cfg.n2; ++j) {
    double acc = w.b2()[j];
    const double* row = w2.data() + static_cast<std::size_t>(j) * cfg.n1;
    for (int i = 0; i < cfg.n1; ++i) acc += row[i] * h1[i];
    h2[j] = transfer(cfg.transfer, acc);
  }
  ForwardOutput out;
  double y[2];
  for (int o = 0; o < 2; ++o) {
    double acc = w.bout()[o];
    const double* row = w.wout().data() + static_cast<std::size_t>(o) * cfg.n2;
    for (int i = 0; i < cfg.n2; ++i) acc += row[i] * h2[i];
    y[o] = acc;
  }
  out.yx = y[0];
  out.yz = y[1];
  out.cls = {y[0] > 0.0, y[1] > 0.0};
  return out;
}

ForwardOutput forward_float(const NetworkConfig& cfg, const Weights& w, const Syndrome& s) {
  cfg.validate();
  if (w.sizes() != full_sizes(cfg)) throw std::invalid_argument("weight shape mismatch");
  if (static_cast<int>(s.size()) != cfg.num_inputs()) {
    throw std::invalid_argument("syndrome length does not match network inputs");
  }
  for (double v : w.all()) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite weight");
  }
  return forward_float_unchecked(cfg, w, s.bits);
}

// ---------------------------------------------------------------------------

double QuantizedWeights::value(int32_t code) const {
  return std::ldexp(static_cast<double>(code), -spec.frac_bits());
}

int32_t quantize_code(double w, int bits) {
  if (bits < 2 || bits > 30) throw std::invalid_argument("quantization bits out of range");
  const int frac = bits - 1;
  const int64_t lo = -(int64_t{1} << frac);
  const int64_t hi = (int64_t{1} << frac) - 1;
  if (std::isnan(w)) throw std::invalid_argument("cannot quantize NaN");
  const double scaled = std::ldexp(w, frac);
  if (scaled <= static_cast<double>(lo)) return static_cast<int32_t>(lo);
  if (scaled >= static_cast<double>(hi)) return static_cast<int32_t>(hi);
  // Nearest integer with exact halves going down: ceil(x - 1/2). The
  // subtraction is exact because |scaled| < 2^30.
  return static_cast<int32_t>(std::ceil(scaled - 0.5));
}

double quantize_value(double w, int bits) {
  return std::ldexp(static_cast<double>(quantize_code(w, bits)), -(bits - 1));
}

QuantizedWeights quantize_weights(const Params& weights, const QuantSpec& q) {
  q.validate();
  const int bits = q.effective_bits();
  QuantizedWeights out;
  out.spec = q;
  out.sizes = weights.sizes();
  auto conv = [bits](std::span<const double> src, std::vector<int32_t>& dst) {
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_code(src[i], bits);
  };
  conv(weights.w1(), out.w1);
  conv(weights.b1(), out.b1);
  conv(weights.w2(), out.w2);
  conv(weights.b2(), out.b2);
  conv(weights.wout(), out.wout);
  conv(weights.bout(), out.bout);
  return out;
}

Weights dequantize(const NetworkConfig& cfg, const QuantizedWeights& q) {
  Weights w(cfg);
  if (q.sizes != w.sizes()) throw std::invalid_argument("quantized weight shape mismatch");
  auto conv = [&q](const std::vector<int32_t>& src, std::span<double> dst) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = q.value(src[i]);
  };
  conv(q.w1, w.w1());
  conv(q.b1, w.b1());
  conv(q.w2, w.w2());
  conv(q.b2, w.b2());
  conv(q.wout, w.wout());
  conv(q.bout, w.bout());
  return w;
}

int64_t transfer_fixed(Transfer fn, int64_t acc, int acc_frac, int out_frac) {
  if (acc_frac < out_frac || acc_frac > 24 || out_frac < 1) {
    throw std::invalid_argument("unsupported fixed-point format");
  }
  const int64_t one = int64_t{1} << acc_frac;
  const int64_t max_code = (int64_t{1} << out_frac) - 1;
  const int64_t min_code = -(int64_t{1} << out_frac);
  switch (fn) {
    case Transfer::kSqnl: {
      if (acc >= one) return max_code;
      if (acc < -one) return min_code;
      const int64_t u = acc & (one - 1);  // fractional bits of the accumulator
      const int64_t sq = u * u;           // 2 * acc_frac fractional bits
      const int64_t y = acc >= 0 ? 2 * u * one - sq : sq - one * one;
      return std::min(y >> (2 * acc_frac - out_frac), max_code);
    }
    case Transfer::kRelu: {
      if (acc <= 0) return 0;
      return std::min(acc >> (acc_frac - out_frac), max_code);
    }
    case Transfer::kTanh: {
      // No integer datapath for tanh; evaluate in double and truncate.
      const double y = std::tanh(std::ldexp(static_cast<double>(acc), -acc_frac));
      const auto code = static_cast<int64_t>(std::floor(std::ldexp(y, out_frac)));
      return std::clamp(code, min_code, max_code);
    }
  }
  return 0;
}

LogicalClass forward_fixed_unchecked(const NetworkConfig& cfg, const QuantizedWeights& q,
                                     std::span<const uint8_t> s) {
  thread_local std::vector<int64_t> h1;
  thread_local std::vector<int64_t> h2;
  const int f = q.spec.frac_bits();
  const int nin = cfg.num_inputs();
  h1.resize(cfg.n1);
  h2.resize(cfg.n2);
  for (int j = 0; j < cfg.n1; ++j) {
    int64_t acc = q.b1[j];
    const int32_t* row = q.w1.data() + static_cast<std::size_t>(j) * nin;
    for (int i = 0; i < nin; ++i) {
      if (s[i]) acc += row[i];
    }
    h1[j] = transfer_fixed(cfg.transfer, acc, f, f);
  }
  for (int j = 0; j < cfg.n2; ++j) {
    int64_t acc = static_cast<int64_t>(q.b2[j]) * (int64_t{1} << f);
    const int32_t* row = q.w2.data() + static_cast<std::size_t>(j) * cfg.n1;
    for (int i = 0; i < cfg.n1; ++i) acc += static_cast<int64_t>(row[i]) * h1[i];
    h2[j] = transfer_fixed(cfg.transfer, acc, 2 * f, f);
  }
  bool bit[2];
  for (int o = 0; o < 2; ++o) {
    int64_t acc = static_cast<int64_t>(q.bout[o]) * (int64_t{1} << f);
    const int32_t* row = q.wout.data() + static_cast<std::size_t>(o) * cfg.n2;
    for (int i = 0; i < cfg.n2; ++i) acc += static_cast<int64_t>(row[i]) * h2[i];
    bit[o] = acc > 0;
  }
  return {bit[0], bit[1]};
}

LogicalClass forward_fixed(const NetworkConfig& cfg, const QuantizedWeights& q, const Syndrome& s) {
  cfg.validate();
  if (!cfg.quant) throw std::invalid_argument("network config has no quantization spec");
  if (!(q.spec == *cfg.quant)) throw std::invalid_argument("weights quantized with another spec");
  if (q.sizes != full_sizes(cfg) || q.w1.size() != q.sizes.w1 || q.b1.size() != q.sizes.b1 ||
      q.w2.size() != q.sizes.w2 || q.b2.size() != q.sizes.b2 || q.wout.size() != q.sizes.wout ||
      q.bout.size() != q.sizes.bout) {
    throw std::invalid_argument("quantized weight shape mismatch");
  }
  if (static_cast<int>(s.size()) != cfg.num_inputs()) {
    throw std::invalid_argument("syndrome length does not match network inputs");
  }
  const int f = q.spec.frac_bits();
  const int64_t lo = -(int64_t{1} << f);
  const int64_t hi = (int64_t{1} << f) - 1;
  for (const auto* t : {&q.w1, &q.b1, &q.w2, &q.b2, &q.wout, &q.bout}) {
    for (int32_t code : *t) {
      if (code < lo || code > hi) throw std::invalid_argument("weight code off the fixed-point grid");
    }
  }
  return forward_fixed_unchecked(cfg, q, s.bits);
}

}  // namespace hldsim
