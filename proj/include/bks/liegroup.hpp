// Copyright 2026 The bkspair Authors.
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

#pragma once

#include <string>
#include <vector>

#include "bks/types.hpp"

namespace bks {

enum class GroupKind { Torus, SU2, SU3 };

/// Choice of Ad-invariant inner product on the Lie algebra.
///  - UnitVolume: the Riemannian volume of K is 1 (the normalized Haar measure).
///  - Reference: the "basic" form -tr(XY) in the defining representation
///    (long roots have |alpha|^2 = 2; for U(1) the generator i has unit length).
enum class Normalization { UnitVolume, Reference, Custom };

std::string to_string(GroupKind kind);
std::string to_string(Normalization norm);

/// Root system, Weyl group and a concrete matrix model of a compact group.
///
/// The Lie algebra is realised as anti-Hermitian matrices in the defining
/// representation (diagonal for tori). basis() is orthonormal for the chosen
/// inner product lambda * (-tr XY). The Cartan subalgebra is spanned by the
/// diagonal basis elements; coordinates on it are orthonormal, and roots and
/// weights are stored as vectors in the same coordinates (dual identified via
/// the inner product). A weight mu acts on the Cartan as R(H) = i mu(H).
class GroupSpec {
 public:
  static GroupSpec torus(int n, Normalization norm = Normalization::UnitVolume);
  static GroupSpec su2(Normalization norm = Normalization::UnitVolume);
  static GroupSpec su3(Normalization norm = Normalization::UnitVolume);
  /// Explicit scale lambda applied to the reference form.
  static GroupSpec with_scale(GroupKind kind, double scale, int torus_rank = 1);
  static GroupSpec make(GroupKind kind, Normalization norm, int torus_rank = 1);

  GroupKind kind() const { return kind_; }
  Normalization normalization() const { return normalization_; }
  std::string name() const;
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  double scale() const { return scale_; }
  bool is_torus() const { return kind_ == GroupKind::Torus; }
  /// Number of integer labels identifying an irrep.
  int label_size() const;

  const std::vector<Vec>& positive_roots() const { return positive_roots_; }
  const std::vector<Vec>& simple_roots() const { return simple_roots_; }
  const Vec& rho() const { return rho_; }
  double rho_norm_sq() const { return rho_.squaredNorm(); }
  /// Weyl group elements as orthogonal matrices on the Cartan coordinates.
  const std::vector<Mat>& weyl_group() const { return weyl_; }
  const std::vector<int>& weyl_signs() const { return weyl_sign_; }

  /// Defining-representation size N (torus: n, diagonal).
  int matrix_size() const { return matrix_size_; }
  const std::vector<CMat>& basis() const { return basis_; }
  /// Positions of the Cartan basis vectors inside basis().
  const std::vector<int>& cartan_indices() const { return cartan_indices_; }
  /// Diagonal-entry functionals: H = i diag(theta_1(H), ..., theta_N(H)).
  const std::vector<Vec>& diagonal_weights() const { return eps_; }
  /// ad_{X_a} in the orthonormal basis.
  const std::vector<Mat>& ad_basis() const { return ad_basis_; }

  CMat algebra_element(const Vec& y) const;
  Vec cartan_to_algebra(const Vec& h) const;
  Vec algebra_coordinates(const CMat& Y) const;
  double inner(const CMat& X, const CMat& Y) const;

  /// Key/value text ("kind = su2" ...), consumed by the CLI config reader.
  std::string to_key_value() const;
  static GroupSpec from_key_value(const std::string& text);

  bool same_as(const GroupSpec& other) const;

 private:
  GroupSpec(GroupKind kind, int torus_rank, double scale, Normalization norm);

  GroupKind kind_;
  Normalization normalization_;
  int rank_ = 0;
  int dim_ = 0;
  int matrix_size_ = 0;
  double scale_ = 1.0;
  std::vector<CMat> basis_;
  std::vector<int> cartan_indices_;
  std::vector<Vec> eps_;
  std::vector<Vec> positive_roots_;
  std::vector<Vec> simple_roots_;
  Vec rho_;
  std::vector<Mat> weyl_;
  std::vector<int> weyl_sign_;
  std::vector<Mat> ad_basis_;
  // Positive roots in simple-root coordinates.
  std::vector<std::vector<int>> root_coefficients_;

  friend long dim_irrep(const GroupSpec&, const Vec&);
};

/// Irreducible representation: integer label, highest weight, dimension, Casimir.
///
/// Labels: torus -> (k_1..k_n); SU(2) -> (2j); SU(3) -> (p, q).
struct Irrep {
  std::vector<int> label;
  Vec highest_weight;
  long dim = 1;
  double casimir = 0.0;
  /// Number of boxes of the Young diagram (|k|_1 for tori); bounds ||R(g)|| <= ||g||^boxes.
  int boxes = 0;

  std::string to_string() const;
  bool operator==(const Irrep& o) const { return label == o.label; }
  bool operator<(const Irrep& o) const { return label < o.label; }
};

Irrep make_irrep(const GroupSpec& group, const std::vector<int>& label);
Vec highest_weight(const GroupSpec& group, const std::vector<int>& label);

/// All dominant integral weights with casimir <= cutoff, sorted by (casimir, label).
std::vector<Irrep> enumerate_irreps(const GroupSpec& group, double casimir_cutoff);

/// Weyl dimension formula in exact rational arithmetic.
long dim_irrep(const GroupSpec& group, const Vec& weight);
/// <lambda, lambda + 2 rho> in the dual inner product of the group's scale.
double casimir(const GroupSpec& group, const Vec& weight);

/// Element e^{zH} of the complexified maximal torus.
struct CartanArgument {
  Vec h;
  cplx z{1.0, 0.0};
};

/// Analytically continued character via the Weyl character formula. Points on
/// Weyl-denominator walls are handled by a perturbation along rho followed by
/// polynomial (Neville) extrapolation. Returns chi * e^{-log_scale}.
cplx character(const GroupSpec& group, const Irrep& irrep, const CartanArgument& arg,
               double log_scale = 0.0);

/// Character of an arbitrary element of K_C given as a defining-rep matrix:
/// the Schur polynomial of its eigenvalues, summed over weights. No singular
/// points and no cancellation between leading terms.
cplx character_of_element(const GroupSpec& group, const Irrep& irrep, const CMat& g);

/// e^{zY} in the defining representation, Y given by orthonormal coordinates.
CMat exp_algebra(const GroupSpec& group, const Vec& y, cplx z = cplx(1.0, 0.0));

/// Spin-j matrix of g in SL(2,C) acting on degree-2j symmetric tensors.
/// j2 = 2j. Row/column i corresponds to the monomial e1^{2j-i} e2^{i}.
CMat wigner_matrix(int j2, const CMat& g);

/// Matrix elements R_ij(g) of an irrep in the defining matrix model
/// (SU(2): wigner_matrix; tori: 1x1 character). SU(3) is not supported.
CMat representation_matrix(const GroupSpec& group, const Irrep& irrep, const CMat& g);

Mat ad_matrix(const GroupSpec& group, const Vec& y);

/// Scale lambda (relative to -tr XY) giving K unit Riemannian volume.
double calibrate_scale(GroupKind kind, int torus_rank = 1);
/// Riemannian volume of K for the reference form -tr XY.
double reference_volume(GroupKind kind, int torus_rank = 1);

}  // namespace bks
