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
#include <random>

#include "hldsim/lattice.hpp"
#include "hldsim/nn.hpp"
#include "oracles.hpp"

namespace hldsim {
namespace {

void fill_random(std::span<double> v, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& x : v) x = u(rng);
}

Syndrome random_syndrome(int n, std::mt19937_64& rng) {
  Syndrome s(n);
  for (auto& b : s.bits) b = rng() & 1;
  return s;
}

TEST(Transfer, Values) {
  EXPECT_DOUBLE_EQ(transfer(Transfer::kSqnl, 0.5), 0.75);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kSqnl, -0.5), -0.75);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kSqnl, -2.0), -1.0);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kSqnl, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kSqnl, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kRelu, -3.0), 0.0);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kRelu, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kTanh, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(transfer(Transfer::kTanh, 0.7), std::tanh(0.7));
}

TEST(Transfer, Derivatives) {
  EXPECT_DOUBLE_EQ(transfer_derivative(Transfer::kSqnl, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(transfer_derivative(Transfer::kSqnl, -0.5), 1.0);
  EXPECT_DOUBLE_EQ(transfer_derivative(Transfer::kSqnl, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(transfer_derivative(Transfer::kSqnl, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(transfer_derivative(Transfer::kRelu, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(transfer_derivative(Transfer::kRelu, 1.0), 1.0);
  EXPECT_NEAR(transfer_derivative(Transfer::kTanh, 0.3), 1.0 - std::tanh(0.3) * std::tanh(0.3),
              1e-15);
}

TEST(Transfer, Names) {
  for (Transfer t : {Transfer::kTanh, Transfer::kRelu, Transfer::kSqnl}) {
    EXPECT_EQ(parse_transfer(to_string(t)), t);
  }
  EXPECT_THROW(parse_transfer("sigmoid"), std::invalid_argument);
}

TEST(NetworkConfig, Validation) {
  NetworkConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n1 = 6;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.rotated = false;
  EXPECT_NO_THROW(c.validate());
  c.n1 = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = NetworkConfig{};
  c.d = 4;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = NetworkConfig{};
  c.quant = QuantSpec{10, false};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.quant = QuantSpec{2, true};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Forward, ZeroWeights) {
  NetworkConfig cfg;
  const Weights w(cfg);
  const auto out = forward_float(cfg, w, Syndrome(8));
  EXPECT_EQ(out.yx, 0.0);
  EXPECT_EQ(out.yz, 0.0);
  EXPECT_TRUE(out.cls.is_identity());
}

TEST(Forward, ToyChain) {
  // Unit weights from input 0 through one node per layer to the X output.
  NetworkConfig cfg{3, 1, 1, Transfer::kSqnl, false, std::nullopt};
  Weights w(cfg);
  w.w1()[0] = 1.0;
  w.w2()[0] = 1.0;
  w.wout()[0] = 1.0;
  Syndrome s(8);
  s.bits[0] = 1;
  const auto out = forward_float(cfg, w, s);
  EXPECT_DOUBLE_EQ(out.yx, 1.0);
  EXPECT_EQ(out.cls, (LogicalClass{true, false}));
}

TEST(Forward, Errors) {
  NetworkConfig cfg;
  Weights w(cfg);
  EXPECT_THROW(forward_float(cfg, w, Syndrome(24)), std::invalid_argument);
  w.b1()[0] = std::nan("");
  EXPECT_THROW(forward_float(cfg, w, Syndrome(8)), std::invalid_argument);
  NetworkConfig other = cfg;
  other.n1 = 8;
  EXPECT_THROW(forward_float(other, Weights(cfg), Syndrome(8)), std::invalid_argument);
}

TEST(Forward, MatchesDenseOracle) {
  std::mt19937_64 rng(11);
  for (Transfer t : {Transfer::kTanh, Transfer::kRelu, Transfer::kSqnl}) {
    NetworkConfig cfg{3, 4, 4, t, false, std::nullopt};
    for (int k = 0; k < 200; ++k) {
      Weights w(cfg);
      fill_random(w.all(), rng);
      const Syndrome s = random_syndrome(8, rng);
      const auto out = forward_float(cfg, w, s);
      const auto ref = oracle::dense_forward(cfg, w, s.bits);
      ASSERT_NEAR(out.yx, ref[0], 1e-12);
      ASSERT_NEAR(out.yz, ref[1], 1e-12);
    }
  }
}

TEST(Rotation, ZeroBaseExpandsToZero) {
  const Layout l(3);
  NetworkConfig cfg;
  const Weights w = expand_rotated(cfg, BaseWeights(cfg), l);
  for (double x : w.all()) EXPECT_EQ(x, 0.0);
}

TEST(Rotation, UnitVectorRows) {
  const Layout l(5);
  NetworkConfig cfg{5, 4, 4, Transfer::kSqnl, true, std::nullopt};
  const int nin = cfg.num_inputs();
  for (int k = 0; k < nin; ++k) {
    BaseWeights base(cfg);
    base.w1()[k] = 1.0;
    const Weights w = expand_rotated(cfg, base, l);
    int target = k;
    for (int g = 0; g < 4; ++g) {
      for (int i = 0; i < nin; ++i) {
        EXPECT_EQ(w.w1()[g * nin + i], i == target ? 1.0 : 0.0) << "k=" << k << " g=" << g;
      }
      target = l.rot_anc()[target];
    }
  }
}

TEST(Rotation, SharingStructure) {
  const Layout l(3);
  NetworkConfig cfg{3, 8, 4, Transfer::kSqnl, true, std::nullopt};
  std::mt19937_64 rng(3);
  BaseWeights base(cfg);
  fill_random(base.all(), rng);
  const Weights w = expand_rotated(cfg, base, l);
  const int q1 = cfg.n1 / 4, q2 = cfg.n2 / 4;
  for (int g = 0; g < 4; ++g) {
    for (int j = 0; j < q1; ++j) EXPECT_EQ(w.b1()[g * q1 + j], base.b1()[j]);
    for (int j = 0; j < q2; ++j) {
      EXPECT_EQ(w.b2()[g * q2 + j], base.b2()[j]);
      for (int gp = 0; gp < 4; ++gp) {
        for (int jp = 0; jp < q1; ++jp) {
          EXPECT_EQ(w.w2()[(g * q2 + j) * cfg.n1 + gp * q1 + jp],
                    base.w2()[j * cfg.n1 + ((gp - g + 4) % 4) * q1 + jp]);
        }
      }
      for (int o = 0; o < 2; ++o) {
        const int src = g % 2 ? 1 - o : o;
        EXPECT_EQ(w.wout()[o * cfg.n2 + g * q2 + j], base.wout()[src * q2 + j]);
      }
    }
  }
  EXPECT_EQ(w.bout()[0], base.bout()[0]);
  EXPECT_EQ(w.bout()[1], base.bout()[0]);
  // Folding sums the copies, so fold(expand(b)) = 4 b.
  const BaseWeights back = fold_rotated(cfg, w, l);
  for (std::size_t i = 0; i < back.size(); ++i) {
    const double expect = i + 1 == back.size() ? 2 * base.all()[i] : 4 * base.all()[i];
    EXPECT_NEAR(back.all()[i], expect, 1e-14) << i;
  }
}

TEST(Rotation, Errors) {
  const Layout l(3);
  NetworkConfig cfg{3, 4, 4, Transfer::kSqnl, false, std::nullopt};
  EXPECT_THROW(expand_rotated(cfg, BaseWeights(cfg), l), std::invalid_argument);
  cfg.rotated = true;
  cfg.n1 = 6;
  EXPECT_THROW(BaseWeights{cfg}, std::invalid_argument);
}

class Equivariance : public ::testing::TestWithParam<std::tuple<int, Transfer>> {};

TEST_P(Equivariance, RotatedSyndromeSwapsOutputs) {
  const auto [d, t] = GetParam();
  const Layout l(d);
  NetworkConfig cfg{d, 8, 4, t, true, std::nullopt};
  std::mt19937_64 rng(d * 7 + static_cast<int>(t));
  BaseWeights base(cfg);
  fill_random(base.all(), rng, 0.5);
  const Weights w = expand_rotated(cfg, base, l);
  for (int k = 0; k < 2000; ++k) {
    const Syndrome s = random_syndrome(l.num_ancillas(), rng);
    const auto a = forward_float(cfg, w, s);
    const auto b = forward_float(cfg, w, rotate_syndrome(l, s));
    ASSERT_NEAR(a.yx, b.yz, 1e-12);
    ASSERT_NEAR(a.yz, b.yx, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(All, Equivariance,
                         ::testing::Combine(::testing::Values(3, 5, 7, 9),
                                            ::testing::Values(Transfer::kTanh, Transfer::kRelu,
                                                              Transfer::kSqnl)));

TEST(Quantize, Examples) {
  EXPECT_EQ(quantize_value(0.8, 3), 0.75);
  EXPECT_EQ(quantize_value(1.3, 3), 0.75);
  EXPECT_EQ(quantize_value(-1.3, 3), -1.0);
  EXPECT_EQ(quantize_value(-1.0, 3), -1.0);
  // Halves go toward -infinity.
  EXPECT_EQ(quantize_value(0.125, 3), 0.0);
  EXPECT_EQ(quantize_value(-0.125, 3), -0.25);
  // One extra sampling bit gives a 0.125 grid on which 0.8 still rounds to
  // 0.75; 0.85 moves up to 0.875.
  EXPECT_EQ(quantize_value(0.8, 4), 0.75);
  EXPECT_EQ(quantize_value(0.85, 4), 0.875);
  EXPECT_EQ(quantize_value(1.3, 4), 0.875);
  EXPECT_THROW(quantize_code(std::nan(""), 4), std::invalid_argument);
}

TEST(Quantize, ExtraSampleBitWidensGrid) {
  NetworkConfig cfg{3, 4, 4, Transfer::kSqnl, false, std::nullopt};
  Weights w(cfg);
  w.w1()[0] = 0.8;
  w.w1()[1] = 0.85;
  const auto plain = quantize_weights(w, QuantSpec{3, false});
  const auto extra = quantize_weights(w, QuantSpec{3, true});
  EXPECT_EQ(plain.value(plain.w1[0]), 0.75);
  EXPECT_EQ(plain.value(plain.w1[1]), 0.75);
  EXPECT_EQ(extra.value(extra.w1[0]), 0.75);
  EXPECT_EQ(extra.value(extra.w1[1]), 0.875);
}

TEST(Quantize, Idempotent) {
  NetworkConfig cfg{3, 8, 4, Transfer::kSqnl, false, std::nullopt};
  std::mt19937_64 rng(2);
  for (int b = 3; b <= 9; ++b) {
    for (bool extra : {false, true}) {
      Weights w(cfg);
      fill_random(w.all(), rng, 1.5);
      cfg.quant = QuantSpec{b, extra};
      const auto q1 = quantize_weights(w, *cfg.quant);
      const auto q2 = quantize_weights(dequantize(cfg, q1), *cfg.quant);
      EXPECT_EQ(q1, q2);
      const double step = std::ldexp(1.0, -cfg.quant->frac_bits());
      const Weights back = dequantize(cfg, q1);
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w.all()[i];
        if (x > -1.0 && x < 1.0 - step) {
          ASSERT_LE(std::abs(back.all()[i] - x), step / 2);
        }
      }
    }
  }
}

TEST(Fixed, ZeroWeights) {
  NetworkConfig cfg;
  cfg.quant = QuantSpec{5, false};
  const auto q = quantize_weights(Weights(cfg), *cfg.quant);
  EXPECT_TRUE(forward_fixed(cfg, q, Syndrome(8)).is_identity());
}

TEST(Fixed, Errors) {
  NetworkConfig cfg;
  const auto q = quantize_weights(Weights(cfg), QuantSpec{5, false});
  EXPECT_THROW(forward_fixed(cfg, q, Syndrome(8)), std::invalid_argument);
  cfg.quant = QuantSpec{6, false};
  EXPECT_THROW(forward_fixed(cfg, q, Syndrome(8)), std::invalid_argument);
  cfg.quant = QuantSpec{5, false};
  auto bad = q;
  bad.w1[0] = 16;
  EXPECT_THROW(forward_fixed(cfg, bad, Syndrome(8)), std::invalid_argument);
}

TEST(Fixed, ExactlyRepresentableNetsAgreeWithFloat) {
  // ReLU nets whose weights are sparse powers of two keep every
  // intermediate value on the 9-bit grid, so both paths see the same
  // numbers.
  NetworkConfig cfg{3, 4, 4, Transfer::kRelu, false, QuantSpec{9, false}};
  std::mt19937_64 rng(9);
  int nonzero = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Weights w(cfg);
    auto pick = [&](std::span<double> v, double mag) {
      for (auto& x : v) x = (rng() % 3 == 0) ? 0.0 : (rng() & 1 ? mag : -mag);
    };
    pick(w.w1(), 1.0 / 16);
    pick(w.b1(), 1.0 / 16);
    pick(w.w2(), 1.0 / 4);
    pick(w.b2(), 1.0 / 16);
    pick(w.wout(), 1.0 / 2);
    pick(w.bout(), 1.0 / 64);
    const auto q = quantize_weights(w, *cfg.quant);
    ASSERT_EQ(dequantize(cfg, q), w);
    for (int k = 0; k < 20; ++k) {
      const Syndrome s = random_syndrome(8, rng);
      const auto f = forward_float(cfg, w, s);
      nonzero += !f.cls.is_identity();
      ASSERT_EQ(forward_fixed(cfg, q, s), f.cls);
    }
  }
  EXPECT_GT(nonzero, 100);
}

class FixedOracle : public ::testing::TestWithParam<std::tuple<int, Transfer, bool>> {};

TEST_P(FixedOracle, MatchesArbitraryPrecision) {
  const auto [b, t, rotated] = GetParam();
  NetworkConfig cfg{3, 8, 4, t, rotated, QuantSpec{b, false}};
  std::mt19937_64 rng(b * 31 + static_cast<int>(t));
  for (int trial = 0; trial < 300; ++trial) {
    const auto q = oracle::random_codes(cfg, rng);
    for (int k = 0; k < 4; ++k) {
      const Syndrome s = random_syndrome(8, rng);
      ASSERT_EQ(forward_fixed(cfg, q, s), oracle::forward_fixed(cfg, q, s.bits)) << trial;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Bits, FixedOracle,
                         ::testing::Combine(::testing::Range(3, 10),
                                            ::testing::Values(Transfer::kRelu, Transfer::kSqnl),
                                            ::testing::Values(false)));

TEST(Fixed, SqnlWithinOneStepOfReal) {
  for (int b = 3; b <= 9; ++b) {
    const int f = b - 1;
    for (int64_t code = -(int64_t{1} << f); code < (int64_t{1} << f); ++code) {
      const double x = std::ldexp(static_cast<double>(code), -f);
      const double y = std::ldexp(static_cast<double>(transfer_fixed(Transfer::kSqnl, code, f, f)), -f);
      ASSERT_LT(std::abs(y - transfer(Transfer::kSqnl, x)), std::ldexp(1.0, -f)) << b << " " << code;
    }
  }
}

TEST(Fixed, SqnlWideAccumulator) {
  // Second-layer format: 2f fractional bits in, f out.
  std::mt19937_64 rng(4);
  for (int f = 2; f <= 8; ++f) {
    for (int k = 0; k < 5000; ++k) {
      const int64_t acc = static_cast<int64_t>(rng() % (int64_t{6} << (2 * f))) - (int64_t{3} << (2 * f));
      const int64_t got = transfer_fixed(Transfer::kSqnl, acc, 2 * f, f);
      ASSERT_EQ(oracle::cpp_int(got), oracle::node_output(Transfer::kSqnl, acc, 2 * f, f));
    }
  }
}

}  // namespace
}  // namespace hldsim
