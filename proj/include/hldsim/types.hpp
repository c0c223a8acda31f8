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

#ifndef HLDSIM_TYPES_HPP_
#define HLDSIM_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hldsim {

/// Pauli error on every data qubit, stored as two bit planes. A qubit with
/// both planes set carries a Y error.
struct ErrorConfig {
  std::vector<uint8_t> x;
  std::vector<uint8_t> z;

  ErrorConfig() = default;
  explicit ErrorConfig(std::size_t num_data) : x(num_data, 0), z(num_data, 0) {}

  std::size_t size() const { return x.size(); }
  bool is_identity() const;

  /// Per-plane XOR. Throws std::invalid_argument on size mismatch.
  ErrorConfig& operator^=(const ErrorConfig& other);
  friend ErrorConfig operator^(ErrorConfig a, const ErrorConfig& b) { return a ^= b; }
  friend bool operator==(const ErrorConfig&, const ErrorConfig&) = default;
};

/// Ancilla parity bits ordered by ancilla index.
struct Syndrome {
  std::vector<uint8_t> bits;

  Syndrome() = default;
  explicit Syndrome(std::size_t num_ancillas) : bits(num_ancillas, 0) {}

  std::size_t size() const { return bits.size(); }
  bool is_zero() const;

  Syndrome& operator^=(const Syndrome& other);
  friend Syndrome operator^(Syndrome a, const Syndrome& b) { return a ^= b; }
  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

/// Logical difference between two error configurations with equal syndrome.
/// (lx, lz) = (0,0) I, (1,0) X, (0,1) Z, (1,1) Y.
struct LogicalClass {
  bool lx = false;
  bool lz = false;

  bool is_identity() const { return !lx && !lz; }
  LogicalClass swapped() const { return {lz, lx}; }
  friend LogicalClass operator^(LogicalClass a, LogicalClass b) {
    return {a.lx != b.lx, a.lz != b.lz};
  }
  friend bool operator==(LogicalClass, LogicalClass) = default;
};

// Bit-string helpers used by the CLI and the C API: '0'/'1' characters,
// index 0 first.
std::string to_bitstring(const std::vector<uint8_t>& bits);
std::vector<uint8_t> from_bitstring(std::string_view text);

}  // namespace hldsim

#endif  // HLDSIM_TYPES_HPP_
