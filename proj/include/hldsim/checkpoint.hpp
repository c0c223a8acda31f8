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

#ifndef HLDSIM_CHECKPOINT_HPP_
#define HLDSIM_CHECKPOINT_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hldsim/nn.hpp"

namespace hldsim {

// Line-oriented text container:
//
//   hldsim-checkpoint 1
//   distance 3
//   n1 16
//   n2 4
//   transfer sqnl
//   rotated 1
//   bits 9              ("none" for float networks)
//   extra_sample_bit 0
//   samples_seen 0
//   float <tensor> <count> <hexfloat>...   full weights, exact doubles
//   base <tensor> <count> <hexfloat>...    base weights of rotated networks
//   code <tensor> <count> <int>...         quantized codes, value k * 2^-(b-1)
//   end
//
// Tensors are w1 b1 w2 b2 wout bout in that order. Each of the float, base
// and code groups is optional but at least one of float/code must be present.

struct Checkpoint {
  NetworkConfig cfg;
  std::optional<Weights> weights;
  std::optional<BaseWeights> base;
  std::optional<QuantizedWeights> quantized;
  int64_t samples_seen = 0;

  /// Float weights, dequantized from the codes if no float copy is stored.
  Weights float_weights() const;
};

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { kNotFound, kIo, kFormat };
  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
/// Throws CheckpointError(kFormat) on any syntax, shape or range problem.
Checkpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hldsim

#endif  // HLDSIM_CHECKPOINT_HPP_
