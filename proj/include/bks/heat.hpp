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

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "bks/liegroup.hpp"
#include "bks/quadrature.hpp"

namespace bks {

/// Finite Peter-Weyl expansion f(x) = sum_R sum_ij f^R_ij R_ij(x).
///
/// The same table represents the holomorphic extension to K_C. For SU(3) only
/// class-function blocks (multiples of the identity) can be evaluated pointwise.
class BandLimitedFunction {
 public:
  struct Block {
    Irrep irrep;
    CMat coeff;
  };

  explicit BandLimitedFunction(const GroupSpec& group);

  static BandLimitedFunction character(const GroupSpec& group, const Irrep& r);
  static BandLimitedFunction matrix_element(const GroupSpec& group, const Irrep& r, int i, int j);
  /// Seeded random coefficients on every irrep with casimir <= cutoff.
  static BandLimitedFunction random(const GroupSpec& group, double casimir_cutoff, std::uint64_t seed,
                                    bool class_functions_only = false);

  const GroupSpec& group() const { return group_; }
  const std::map<std::vector<int>, Block>& blocks() const { return blocks_; }
  void set_block(const Irrep& r, const CMat& coeff);
  /// Zero block when R is absent.
  CMat block(const Irrep& r) const;
  double band_limit() const;
  bool empty() const { return blocks_.empty(); }

  cplx evaluate(const CMat& g) const;
  /// Coefficients of the complex conjugate function on K.
  BandLimitedFunction conjugate() const;
  /// Applies op to every block (same irrep, new coefficients).
  BandLimitedFunction transformed(const std::function<CMat(const Irrep&, const CMat&)>& op) const;

  BandLimitedFunction operator+(const BandLimitedFunction& o) const;
  BandLimitedFunction operator*(cplx a) const;

  /// <f, f'>_{L^2(K, dx)} = sum_R (1/d_R) sum_ij conj(f_ij) f'_ij.
  static cplx inner(const BandLimitedFunction& f, const BandLimitedFunction& fp);

  std::string to_json() const;
  static BandLimitedFunction from_json(const std::string& text);

 private:
  GroupSpec group_;
  std::map<std::vector<int>, Block> blocks_;
};

struct HeatParameters {
  double hbar0 = 1.0;
  double s = 1.0;
  double hbar() const { return s * hbar0; }
};

/// a_s = (pi hbar0)^{n/2} e^{|rho|^2 hbar0 s}.
double a_s(const GroupSpec& group, double hbar0, double s);
long double log_a_s(const GroupSpec& group, double hbar0, double s);

struct SeriesValue {
  cplx value;
  /// Bound on sum_{c_R > cutoff} d_R^2 e^{-hbar c_R/2} ||g||^{boxes}.
  double tail_bound = 0.0;
  long terms = 0;
};

/// rho_hbar(g) = sum_{c_R <= cutoff} d_R e^{-hbar c_R/2} chi_R(g); throws
/// TruncationError when the tail bound exceeds `tolerance`.
SeriesValue heat_kernel(const GroupSpec& group, double hbar, const CMat& g, double cutoff,
                        double tolerance = std::numeric_limits<double>::infinity());
/// Smallest casimir cutoff whose tail bound at growth G = ||g|| is below tol.
double heat_kernel_cutoff(const GroupSpec& group, double hbar, double growth, double tolerance);

/// Density of the K-averaged heat-kernel measure at x e^{iY} relative to
/// eta(Y)^2 dx dY: (a_s s^{n/2} eta(Y))^{-1} e^{-|Y|^2/hbar}, hbar = s hbar0.
double nu_density(const GroupSpec& group, double hbar0, double s, const Vec& y);
/// Total mass of nu_hbar by algebra quadrature (should be 1).
Estimate<cplx> nu_mass(const GroupSpec& group, double hbar0, double s, AlgebraQuadrature q);

/// Blockwise f^R -> e^{-hbar c_R/2} f^R.
BandLimitedFunction cst_forward(double hbar, const BandLimitedFunction& f);
/// Blockwise F^R -> e^{+hbar c_R/2} F^R; refuses when the amplification exceeds max_condition.
BandLimitedFunction cst_inverse(double hbar, const BandLimitedFunction& F, double max_condition = 1e12);

/// Holomorphic L^2(K_C, nu_hbar) inner product, analytic: sum_R e^{hbar c_R}/d_R sum conj(F) F'.
cplx hl2_inner(double hbar0, double s, const BandLimitedFunction& F, const BandLimitedFunction& Fp);
/// Same inner product by nested quadrature: algebra rule in Y (its sigma is
/// overridden to sqrt(hbar/2)), deterministic group rule in x.
Estimate<cplx> hl2_inner_quadrature(double hbar0, double s, const BandLimitedFunction& F,
                                    const BandLimitedFunction& Fp, AlgebraQuadrature yq,
                                    const GroupQuadrature& xq);

}  // namespace bks
