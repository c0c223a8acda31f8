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

#include "hldsim/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace hldsim {

bool ErrorConfig::is_identity() const {
  return std::none_of(x.begin(), x.end(), [](uint8_t b) { return b != 0; }) &&
         std::none_of(z.begin(), z.end(), [](uint8_t b) { return b != 0; });
}

ErrorConfig& ErrorConfig::operator^=(const ErrorConfig& other) {
  if (other.x.size() != x.size() || other.z.size() != z.size()) {
    throw std::invalid_argument("ErrorConfig size mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] ^= other.x[i];
    z[i] ^= other.z[i];
  }
  return *this;
}

bool Syndrome::is_zero() const {
  return std::none_of(bits.begin(), bits.end(), [](uint8_t b) { return b != 0; });
}

Syndrome& Syndrome::operator^=(const Syndrome& other) {
  if (other.bits.size() != bits.size()) {
    throw std::invalid_argument("Syndrome size mismatch");
  }
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] ^= other.bits[i];
  return *this;
}

std::string to_bitstring(const std::vector<uint8_t>& bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i] = '1';
  }
  return out;
}

std::vector<uint8_t> from_bitstring(std::string_view text) {
  std::vector<uint8_t> out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch == '0') {
      out.push_back(0);
    } else if (ch == '1') {
      out.push_back(1);
    } else {
      throw std::invalid_argument(std::string("bit string contains '") + ch + "'");
    }
  }
  return out;
}

}  // namespace hldsim
