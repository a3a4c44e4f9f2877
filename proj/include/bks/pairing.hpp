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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bks/heat.hpp"
#include "bks/liegroup.hpp"
#include "bks/quadrature.hpp"

namespace bks {

/// sigma_s = (C_{s hbar0} f) o psi_s e^{-s|Y|^2/2hbar0} sqrt(Omega_s); at s = 0, f sqrt(Omega_0).
struct QuantumSection {
  double s = 0.0;
  BandLimitedFunction f;
};

enum class Trivialization {
  HalfForm,   // amplitude relative to sqrt(Omega_s)
  UnitFrame,  // amplitude relative to sqrt(Omega_s) / sqrt(|Omega_s|)
};
std::string to_string(Trivialization t);

/// Section of the prequantum bundle (tensor half-forms) at parameter s, given
/// by a black-box amplitude a(x, Y).
struct PrequantumSection {
  GroupSpec group;
  double s = 1.0;
  Trivialization tag = Trivialization::UnitFrame;
  std::function<cplx(const CMat& x, const Vec& y)> amplitude;
};

struct PairingReport {
  std::string identity;
  std::string group;
  /// Ordered parameter echo (s, s', hbar0, irrep, quadrature, seed, ...).
  std::vector<std::pair<std::string, std::string>> parameters;
  cplx lhs;
  cplx rhs;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  /// The residual compared against the tolerance ("relative" or "absolute").
  std::string residual_kind = "relative";
  /// Quadrature / truncation error estimate carried by the numeric side.
  double error_estimate = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Free-form flags, e.g. quadrature error above tolerance.
  std::vector<std::string> flags;
  /// Additional named numbers (per-s ratios, extrapolation pieces, ...).
  std::vector<std::pair<std::string, double>> details;

  double residual() const { return residual_kind == "absolute" ? abs_residual : rel_residual; }
  void set_values(cplx numeric, cplx reference, double tol, const std::string& kind = "relative");
  void add_parameter(const std::string& key, double v);
  void add_parameter(const std::string& key, const std::string& v);
};

/// Numeric value v * e^{log_scale}.
struct ScaledEstimate {
  double value = 0.0;
  double error = 0.0;
  double log_scale = 0.0;
  long evaluations = 0;
  double full() const;
};

/// int_k chi_R(e^{itY}) e^{-t|Y|^2/2hbar0} (t/2)^{n/2} eta(tY/2) dY. The rule's
/// sigma, centre and orbit centre are set here; its backend and resolution are
/// taken from quad. Returned relative to e^{t hbar0 |lambda+rho|^2 / 2}.
ScaledEstimate char_gaussian_scaled(const GroupSpec& group, double hbar0, double t, const Irrep& r,
                                    AlgebraQuadrature quad);
double char_gaussian_integral(const GroupSpec& group, double hbar0, double t, const Irrep& r,
                              const AlgebraQuadrature& quad);
/// log of d_R (pi hbar0)^{n/2} e^{t hbar0 (c_R + |rho|^2)/2}.
double char_gaussian_log_closed(const GroupSpec& group, double hbar0, double t, const Irrep& r);

/// The k-integral of the matrix R(e^{itY}) against the same
/// weight, by direct full-dimensional quadrature (no Schur reduction). SU(2) and tori.
Estimate<CMat> matrix_gaussian_integral(const GroupSpec& group, double hbar0, double t,
                                        const Irrep& r, AlgebraQuadrature quad);

/// BKS pairing <sigma_s, sigma'_{s'}>: K-integral by orthogonality, k-integral by
/// Schur reduction to char_gaussian_integral. s = 0 or s' = 0 dispatch to the
/// vertical pairing / vertical inner product.
Estimate<cplx> quantum_pair(double hbar0, const QuantumSection& a, const QuantumSection& b,
                            const AlgebraQuadrature& quad);
/// a_{(s+s')/2} <f, f'>.
cplx quantum_pair_closed(double hbar0, const QuantumSection& a, const QuantumSection& b);

/// sigma^R_{s,ij}: the section whose holomorphic function is R_ij.
QuantumSection matrix_element_section(const GroupSpec& group, double hbar0, double s,
                                      const Irrep& r, int i = 0, int j = 0);

/// e^{-((s-s')/2) hbar0 (c_R + |rho|^2)}.
double bks_factor(const GroupSpec& group, double hbar0, double s, double sp, const Irrep& r);
long double bks_log_factor(const GroupSpec& group, double hbar0, double s, double sp,
                           const Irrep& r);
Estimate<double> bks_factor_numeric(const GroupSpec& group, double hbar0, double s, double sp,
                                    const Irrep& r, const AlgebraQuadrature& quad);
/// Log of bks_factor_numeric; the error is absolute in the log.
Estimate<double> bks_log_factor_numeric(const GroupSpec& group, double hbar0, double s, double sp,
                                        const Irrep& r, const AlgebraQuadrature& quad);

/// B^Q_{ss'}: blockwise lemma factor on matrix-element coefficients, retag to s.
QuantumSection bks_map_apply(double hbar0, double s, const QuantumSection& sp);

PairingReport verify_unitarity(const GroupSpec& group, double hbar0, double s, double sp,
                               const Irrep& r, const AlgebraQuadrature& quad, double tol);
PairingReport verify_factorization(const GroupSpec& group, double hbar0, double s, double sp,
                                   const Irrep& r, double tol = 1e-14);

/// int conj((C_{s hbar0} f)(x e^{isY})) f'(x) e^{-s|Y|^2/2hbar0} (s/2)^{n/2} eta(sY/2) dx dY.
Estimate<cplx> vertical_pair(double hbar0, double s, const BandLimitedFunction& f,
                             const BandLimitedFunction& fp, const AlgebraQuadrature& quad);
/// (pi hbar0)^{n/2} <f, f'>.
cplx vertical_inner(double hbar0, const BandLimitedFunction& f, const BandLimitedFunction& fp);

struct Extrapolation {
  cplx value;
  double error = 0.0;
  std::vector<double> nodes;
  std::vector<cplx> samples;
};
/// Linear Richardson extrapolation of quantum_pair(sigma_s(f), sigma'_{s'}(f')) to s' = 0.
Extrapolation vertical_limit(double hbar0, double s, const BandLimitedFunction& f,
                             const BandLimitedFunction& fp, const AlgebraQuadrature& quad,
                             const std::vector<double>& sp_nodes = {1e-2, 1e-3});

/// r(s) = ||sigma_s||^2 / ((pi hbar0)^{n/2} ||f||^2) on each s of a decreasing list.
PairingReport continuity_check(const GroupSpec& group, double hbar0, const BandLimitedFunction& f,
                               const std::vector<double>& s_list, const AlgebraQuadrature& quad,
                               double tol);

struct DeltaQuadrature {
  AlgebraQuadrature algebra;
  /// Group rule for numeric K-integrals (U(1)) and K-averaging (SU(2), cartan-reduced).
  GroupQuadrature group;
  /// Relative tolerance on heat-kernel series tails.
  double tail_tolerance = 1e-14;
};

/// int_{K_C} ( int_K rho_{2hbar}(x^{-1} g^* g) R_ij(x) dx ) dnu_hbar(g) against delta_ij.
PairingReport verify_delta_identity(const GroupSpec& group, double hbar0, double s, const Irrep& r,
                                    const DeltaQuadrature& quad, double tol);

/// int_{K_C} ( int_K conj(rho_hbar(g e^{itY} x1^{-1})) rho_hbar'(g e^{-itY} x2^{-1}) f(x1) dx1 )
/// dnu_hbar''(g) against f(x2), f = conj(R_ij), hbar = s hbar0, hbar' = s' hbar0,
/// hbar'' = (hbar + hbar')/2. Evaluated at both t values; the residual is the
/// worse of the two against f(x2) and the t-difference is reported as a detail.
PairingReport verify_delta_two(const GroupSpec& group, double hbar0, double s, double sp,
                               double t0, double t1, const Irrep& r, const CMat& x2,
                               const DeltaQuadrature& quad, double tol, double t_tol);

/// ||sigma||^2 = int_{T*K} |a|^2 (unit frame) or |a|^2 |Omega_s| (half-form) dx dY.
/// The algebra rule must contain the amplitude's decay (weight_in_integrand is forced).
Estimate<double> prequantum_norm_sq(const PrequantumSection& sec, AlgebraQuadrature yq,
                                    const GroupQuadrature& xq);
/// B^{prQ}_{ss'}: multiply the unit-frame amplitude by sqrt(phi(s, s', Y)), retag to s.
PrequantumSection preq_map_apply(double s, const PrequantumSection& sp);
/// Parallel transport of unit-frame amplitudes: same amplitude, retag to s.
PrequantumSection preq_parallel_transport(double s, const PrequantumSection& sp);
/// Converts between the two trivializations at the section's own s.
PrequantumSection retrivialize(const PrequantumSection& sec, Trivialization tag);

}  // namespace bks
