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

#include "hldsim/noise.hpp"

#include <stdexcept>

namespace hldsim {

namespace {
constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}

uint64_t splitmix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ShotRng::ShotRng(uint64_t seed, RngStream stream, uint64_t shot)
    : key_(splitmix64(splitmix64(seed + kGoldenGamma * static_cast<uint64_t>(stream)) ^
                      (shot * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

uint64_t ShotRng::next_u64() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGoldenGamma);
}

void sample_depolarizing_into(const Layout& layout, double p, ShotRng& rng, ErrorConfig& out) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("error probability must lie in [0, 1]");
  }
  const int n = layout.num_data();
  out.x.assign(n, 0);
  out.z.assign(n, 0);
  if (p == 0.0) return;
  for (int q = 0; q < n; ++q) {
    const double u = rng.uniform();
    if (u >= p) continue;
    // Conditioned on u < p, u/p is uniform on [0, 1): split it in thirds.
    const double v = 3.0 * u / p;
    if (v < 1.0) {
      out.x[q] = 1;  // X
    } else if (v < 2.0) {
      out.x[q] = 1;  // Y
      out.z[q] = 1;
    } else {
      out.z[q] = 1;  // Z
    }
  }
}

ErrorConfig sample_depolarizing(const Layout& layout, double p, ShotRng& rng) {
  ErrorConfig out(layout.num_data());
  sample_depolarizing_into(layout, p, rng, out);
  return out;
}

void compute_syndrome_into(const Layout& layout, const ErrorConfig& e, Syndrome& out) {
  if (static_cast<int>(e.x.size()) != layout.num_data() ||
      static_cast<int>(e.z.size()) != layout.num_data()) {
    throw std::invalid_argument("error config size does not match layout");
  }
  const int n = layout.num_ancillas();
  out.bits.resize(n);
  for (int a = 0; a < n; ++a) {
    const auto& plane = layout.ancilla_type(a) == AncillaType::kX ? e.z : e.x;
    uint8_t parity = 0;
    for (int q : layout.ancilla_adjacency(a)) parity ^= plane[q];
    out.bits[a] = parity;
  }
}

Syndrome compute_syndrome(const Layout& layout, const ErrorConfig& e) {
  Syndrome s;
  compute_syndrome_into(layout, e, s);
  return s;
}

}  // namespace hldsim
