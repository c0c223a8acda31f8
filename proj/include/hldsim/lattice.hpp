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

#ifndef HLDSIM_LATTICE_HPP_
#define HLDSIM_LATTICE_HPP_

#include <string>
#include <vector>

#include "hldsim/types.hpp"

namespace hldsim {

enum class AncillaType : uint8_t { kX = 0, kZ = 1 };

/// Geometry of a distance-d rotated surface code.
///
/// Data qubits form a d x d grid indexed row-major from the top-left corner.
/// Ancillas sit on plaquette centres; X-type stabilizers close the top and
/// bottom edges, Z-type stabilizers close the left and right edges. X-ancillas
/// read the Z component of adjacent data errors and Z-ancillas read the X
/// component.
///
/// Ancilla numbering is the one induced by the pure-error chains (see
/// ped.hpp): X-ancillas take indices [0, (d^2-1)/2) and Z-ancillas the upper
/// half. The layout is immutable once built.
class Layout {
 public:
  /// Throws std::invalid_argument unless d is odd and >= 3.
  explicit Layout(int d);

  int distance() const { return d_; }
  int num_data() const { return d_ * d_; }
  int num_ancillas() const { return d_ * d_ - 1; }
  int num_x_ancillas() const { return num_ancillas() / 2; }

  AncillaType ancilla_type(int a) const { return anc_type_[a]; }
  /// Adjacent data qubits of ancilla `a`, ascending (2 or 4 entries).
  const std::vector<int>& ancilla_adjacency(int a) const { return anc_adj_[a]; }
  /// Ancillas of the given type adjacent to data qubit `q`, ascending.
  const std::vector<int>& data_neighbors(int q, AncillaType type) const {
    return type == AncillaType::kX ? data_x_nbrs_[q] : data_z_nbrs_[q];
  }

  /// Plaquette coordinates (top-left data corner, may be -1 on boundaries).
  int ancilla_row(int a) const { return anc_row_[a]; }
  int ancilla_col(int a) const { return anc_col_[a]; }

  /// Clockwise 90 degree rotation: data (r, c) -> (c, d-1-r).
  const std::vector<int>& rot_data() const { return rot_data_; }
  const std::vector<int>& rot_anc() const { return rot_anc_; }
  const std::vector<int>& rot_anc_inverse() const { return rot_anc_inv_; }

  /// Centre column (a top-to-bottom cut) and centre row (a left-to-right cut).
  const std::vector<int>& logical_cut_x() const { return cut_x_; }
  const std::vector<int>& logical_cut_z() const { return cut_z_; }

  /// Debug dump of the geometry as a JSON object.
  std::string to_json() const;

 private:
  int d_;
  std::vector<AncillaType> anc_type_;
  std::vector<std::vector<int>> anc_adj_;
  std::vector<std::vector<int>> data_x_nbrs_;
  std::vector<std::vector<int>> data_z_nbrs_;
  std::vector<int> anc_row_;
  std::vector<int> anc_col_;
  std::vector<int> rot_data_;
  std::vector<int> rot_anc_;
  std::vector<int> rot_anc_inv_;
  std::vector<int> cut_x_;
  std::vector<int> cut_z_;
};

/// Bit i of the result is bit rot_anc^-1(i) of `s`.
Syndrome rotate_syndrome(const Layout& layout, const Syndrome& s);

/// Moves every data error along rot_data and exchanges the X and Z planes.
ErrorConfig rotate_error(const Layout& layout, const ErrorConfig& e);

/// Logical class of a residual with trivial syndrome. lx is the X-plane
/// parity on the centre row, lz the Z-plane parity on the centre column.
/// Throws std::invalid_argument if the residual has a non-trivial syndrome.
LogicalClass logical_class(const Layout& layout, const ErrorConfig& residual);

/// Same as logical_class() without the syndrome check. Used on hot paths
/// where the caller already guarantees the precondition.
LogicalClass logical_class_unchecked(const Layout& layout, const ErrorConfig& residual);

/// Representative logical operator for a class: a centre-column X chain for
/// lx and a centre-row Z chain for lz.
ErrorConfig logical_operator(const Layout& layout, LogicalClass cls);

}  // namespace hldsim

#endif  // HLDSIM_LATTICE_HPP_
