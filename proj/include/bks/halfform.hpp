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

#include <vector>

#include "bks/liegroup.hpp"

namespace bks {

/// |alpha(Y)| for every positive root, from the spectrum of ad_Y. Ad-invariant.
std::vector<double> root_values(const GroupSpec& group, const Vec& y);

/// log(sinh(x)/x), even in x, accurate for all x.
double log_sinhc(double x);

/// eta(Y) = prod_{alpha>0} sinh(alpha(Y))/alpha(Y).
double eta(const GroupSpec& group, const Vec& y);
double log_eta(const GroupSpec& group, const Vec& y);
/// log eta(tY) from precomputed root values of Y.
double log_eta_scaled(const std::vector<double>& alphas, double t);

/// |Omega_s|^2 = s^n eta^2(sY).
double omega_norm_sq(const GroupSpec& group, double s, const Vec& y);
double log_omega_norm_sq(const GroupSpec& group, double s, const Vec& y);

/// Closed-form wedge density u^n eta^2(uY), u = (s+s')/2. s' = 0 is admitted.
double wedge_density(const GroupSpec& group, double s, double sp, const Vec& y);
double log_wedge_density(const GroupSpec& group, double s, double sp, const Vec& y);

enum class DeterminantRoute {
  /// Blocks built in the unitary eigenbasis of i*ad_Y; well conditioned.
  Spectral,
  /// Blocks built in the orthonormal basis from matrix exponentials / phi_1.
  Dense,
};

/// det[[conj M_s, conj N_s], [M_s', N_s']] / (2i)^n with
/// M_t = e^{-it ad_Y} and N_t = (1 - e^{-it ad_Y}) ad_Y^{-1} = i t phi_1(-it ad_Y).
cplx wedge_density_det(const GroupSpec& group, double s, double sp, const Vec& y,
                       DeterminantRoute route = DeterminantRoute::Spectral);

/// phi_1(A) = (e^A - 1)/A for a square matrix (series for small ||A||).
CMat phi1(const CMat& a);

/// phi(s,s',Y) = |Omega_u|^2 / (|Omega_s| |Omega_s'|), u = (s+s')/2.
double phi(const GroupSpec& group, double s, double sp, const Vec& y);
double log_phi(const GroupSpec& group, double s, double sp, const Vec& y);

/// Five-point central difference of phi(s, ., Y) at s' = s.
double phi_flatness_residual(const GroupSpec& group, double s, const Vec& y, double h);

}  // namespace bks
