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

#include "hldsim/lattice.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hldsim/noise.hpp"
#include "hldsim/ped.hpp"

namespace hldsim {
namespace {

struct Plaquette {
  int row;
  int col;
  AncillaType type;
  std::vector<int> adj;
};

// Plaquettes keyed by their top-left corner (row, col), both in [-1, d-1].
// Checkerboard: even row+col is X. Weight-2 X plaquettes close the top and
// bottom edges, weight-2 Z plaquettes the left and right edges.
std::map<std::pair<int, int>, Plaquette> enumerate_plaquettes(int d) {
  std::map<std::pair<int, int>, Plaquette> out;
  for (int pr = -1; pr < d; ++pr) {
    for (int pc = -1; pc < d; ++pc) {
      const bool bulk = pr >= 0 && pr <= d - 2 && pc >= 0 && pc <= d - 2;
      const AncillaType type = ((pr + pc) % 2 == 0) ? AncillaType::kX : AncillaType::kZ;
      const bool top_bottom = (pr == -1 || pr == d - 1) && pc >= 0 && pc <= d - 2;
      const bool left_right = (pc == -1 || pc == d - 1) && pr >= 0 && pr <= d - 2;
      if (!(bulk || (top_bottom && type == AncillaType::kX) ||
            (left_right && type == AncillaType::kZ))) {
        continue;
      }
      Plaquette p{pr, pc, type, {}};
      for (int r = pr; r <= pr + 1; ++r) {
        for (int c = pc; c <= pc + 1; ++c) {
          if (r >= 0 && r < d && c >= 0 && c < d) p.adj.push_back(r * d + c);
        }
      }
      out.emplace(std::make_pair(pr, pc), std::move(p));
    }
  }
  return out;
}

}  // namespace

Layout::Layout(int d) : d_(d) {
  if (d < 3 || d % 2 == 0) {
    throw std::invalid_argument("distance must be odd and >= 3, got " + std::to_string(d));
  }
  const int n_data = d * d;
  const int n_anc = n_data - 1;
  auto plaquettes = enumerate_plaquettes(d);

  // Data-qubit neighbourhoods in terms of plaquette keys.
  std::vector<std::vector<std::pair<int, int>>> nbr_keys[2];
  nbr_keys[0].resize(n_data);
  nbr_keys[1].resize(n_data);
  for (const auto& [key, p] : plaquettes) {
    for (int q : p.adj) nbr_keys[static_cast<int>(p.type)][q].push_back(key);
  }

  // Ancilla indices come from walking each chain from its edge end back to
  // the centre: the last data qubit touches exactly one ancilla of the
  // chain's type (a_{L-1}); every earlier q_i touches a_i and a_{i+1}.
  std::map<std::pair<int, int>, int> index_of;
  std::vector<bool> used(n_anc, false);
  for (const ChainSpec& spec : all_chains(d)) {
    const ChainIndices ci = chain_indices(d, spec);
    const auto& nbrs = nbr_keys[spec.type];
    std::pair<int, int> next{-2, -2};
    for (int i = static_cast<int>(ci.data.size()) - 1; i >= 0; --i) {
      std::vector<std::pair<int, int>> cand;
      for (const auto& key : nbrs[ci.data[i]]) {
        if (key != next) cand.push_back(key);
      }
      const int a = ci.ancillas[i];
      if (cand.size() != 1 || a < 0 || a >= n_anc || used[a] || index_of.count(cand[0])) {
        throw std::logic_error("inconsistent chain geometry at d=" + std::to_string(d));
      }
      used[a] = true;
      index_of[cand[0]] = a;
      next = cand[0];
    }
  }
  if (static_cast<int>(index_of.size()) != n_anc ||
      static_cast<int>(plaquettes.size()) != n_anc) {
    throw std::logic_error("chains do not cover every ancilla");
  }

  anc_type_.resize(n_anc);
  anc_adj_.resize(n_anc);
  anc_row_.resize(n_anc);
  anc_col_.resize(n_anc);
  for (const auto& [key, a] : index_of) {
    const Plaquette& p = plaquettes.at(key);
    anc_type_[a] = p.type;
    anc_adj_[a] = p.adj;
    anc_row_[a] = p.row;
    anc_col_[a] = p.col;
  }
  for (int a = 0; a < n_anc; ++a) {
    const bool lower_half = a < n_anc / 2;
    if (lower_half != (anc_type_[a] == AncillaType::kX)) {
      throw std::logic_error("ancilla types not split by index half");
    }
  }

  data_x_nbrs_.assign(n_data, {});
  data_z_nbrs_.assign(n_data, {});
  for (int a = 0; a < n_anc; ++a) {
    auto& target = anc_type_[a] == AncillaType::kX ? data_x_nbrs_ : data_z_nbrs_;
    for (int q : anc_adj_[a]) target[q].push_back(a);
  }

  rot_data_.resize(n_data);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) rot_data_[r * d + c] = c * d + (d - 1 - r);
  }
  // Plaquette (pr, pc) has centre (pr + 1/2, pc + 1/2); under the clockwise
  // rotation it becomes plaquette (pc, d - 2 - pr).
  rot_anc_.resize(n_anc);
  rot_anc_inv_.resize(n_anc);
  for (int a = 0; a < n_anc; ++a) {
    const auto key = std::make_pair(anc_col_[a], d - 2 - anc_row_[a]);
    const int b = index_of.at(key);
    rot_anc_[a] = b;
    rot_anc_inv_[b] = a;
  }

  const int mid = (d - 1) / 2;
  for (int r = 0; r < d; ++r) cut_x_.push_back(r * d + mid);
  for (int c = 0; c < d; ++c) cut_z_.push_back(mid * d + c);
}

std::string Layout::to_json() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<int>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
  };
  os << "{\n  \"distance\": " << d_ << ",\n  \"num_data\": " << num_data()
     << ",\n  \"num_ancillas\": " << num_ancillas() << ",\n  \"ancillas\": [\n";
  for (int a = 0; a < num_ancillas(); ++a) {
    os << "    {\"index\": " << a << ", \"type\": \""
       << (anc_type_[a] == AncillaType::kX ? 'X' : 'Z') << "\", \"row\": " << anc_row_[a]
       << ", \"col\": " << anc_col_[a] << ", \"data\": ";
    list(anc_adj_[a]);
    os << '}' << (a + 1 < num_ancillas() ? "," : "") << '\n';
  }
  os << "  ],\n  \"rot_data\": ";
  list(rot_data_);
  os << ",\n  \"rot_anc\": ";
  list(rot_anc_);
  os << ",\n  \"logical_cut_x\": ";
  list(cut_x_);
  os << ",\n  \"logical_cut_z\": ";
  list(cut_z_);
  os << "\n}\n";
  return os.str();
}

Syndrome rotate_syndrome(const Layout& layout, const Syndrome& s) {
  if (static_cast<int>(s.size()) != layout.num_ancillas()) {
    throw std::invalid_argument("syndrome length does not match layout");
  }
  Syndrome out(s.size());
  const auto& rot = layout.rot_anc();
  for (std::size_t a = 0; a < s.size(); ++a) out.bits[rot[a]] = s.bits[a];
  return out;
}

ErrorConfig rotate_error(const Layout& layout, const ErrorConfig& e) {
  if (static_cast<int>(e.x.size()) != layout.num_data() ||
      static_cast<int>(e.z.size()) != layout.num_data()) {
    throw std::invalid_argument("error config size does not match layout");
  }
  ErrorConfig out(e.size());
  const auto& rot = layout.rot_data();
  for (std::size_t q = 0; q < e.size(); ++q) {
    out.z[rot[q]] = e.x[q];
    out.x[rot[q]] = e.z[q];
  }
  return out;
}

LogicalClass logical_class_unchecked(const Layout& layout, const ErrorConfig& residual) {
  uint8_t lx = 0;
  uint8_t lz = 0;
  for (int q : layout.logical_cut_z()) lx ^= residual.x[q];
  for (int q : layout.logical_cut_x()) lz ^= residual.z[q];
  return {lx != 0, lz != 0};
}

LogicalClass logical_class(const Layout& layout, const ErrorConfig& residual) {
  if (!compute_syndrome(layout, residual).is_zero()) {
    throw std::invalid_argument("logical_class requires a residual with trivial syndrome");
  }
  return logical_class_unchecked(layout, residual);
}

ErrorConfig logical_operator(const Layout& layout, LogicalClass cls) {
  ErrorConfig out(layout.num_data());
  if (cls.lx) {
    for (int q : layout.logical_cut_x()) out.x[q] = 1;
  }
  if (cls.lz) {
    for (int q : layout.logical_cut_z()) out.z[q] = 1;
  }
  return out;
}

}  // namespace hldsim
