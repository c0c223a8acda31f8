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

#include "hldsim/ped.hpp"

#include <stdexcept>
#include <string>

namespace hldsim {

ChainIndices chain_indices(int d, const ChainSpec& chain) {
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
  const int t = chain.type;
  const int r = chain.side;
  const int c = chain.id;
  if ((t != 0 && t != 1) || (r != -1 && r != 1) || c < 0 || c > (d + 1) / 2 - 1) {
    throw std::invalid_argument("chain (" + std::to_string(t) + ", " + std::to_string(r) + ", " +
                                std::to_string(c) + ") out of range for d=" + std::to_string(d));
  }
  const int len = (d - 1) / 2;
  ChainIndices out;
  out.data.reserve(len);
  out.ancillas.reserve(len);
  for (int i = 0; i < len; ++i) {
    out.data.push_back(((d - 1) / 2 + r * (i + 1) + 1) * (t * d + (1 - t)) - 1 +
                       2 * c * (d * (1 - t) - t));
    out.ancillas.push_back(((d * d - 1) / 4) * (1 + 2 * t) + ((r - 1) / 2 + r * i) * ((d + 1) / 2) +
                           c);
  }
  return out;
}

std::vector<ChainSpec> all_chains(int d) {
  std::vector<ChainSpec> out;
  for (int t = 0; t <= 1; ++t) {
    for (int r : {-1, 1}) {
      for (int c = 0; c < (d + 1) / 2; ++c) out.push_back({t, r, c});
    }
  }
  return out;
}

PureErrorDecoder::PureErrorDecoder(const Layout& layout) : layout_(&layout) {
  for (const ChainSpec& spec : all_chains(layout.distance())) {
    chains_.push_back({spec.type == 1, chain_indices(layout.distance(), spec)});
  }
}

void PureErrorDecoder::decode_into(const Syndrome& s, ErrorConfig& out) const {
  if (static_cast<int>(s.size()) != layout_->num_ancillas()) {
    throw std::invalid_argument("syndrome length does not match layout");
  }
  out.x.assign(layout_->num_data(), 0);
  out.z.assign(layout_->num_data(), 0);
  for (const Chain& chain : chains_) {
    auto& plane = chain.writes_x ? out.x : out.z;
    uint8_t running = 0;
    for (std::size_t i = 0; i < chain.idx.data.size(); ++i) {
      running ^= s.bits[chain.idx.ancillas[i]];
      plane[chain.idx.data[i]] ^= running;
    }
  }
}

ErrorConfig PureErrorDecoder::decode(const Syndrome& s) const {
  ErrorConfig out;
  decode_into(s, out);
  return out;
}

ErrorConfig ped_decode(const Layout& layout, const Syndrome& s) {
  return PureErrorDecoder(layout).decode(s);
}

}  // namespace hldsim
