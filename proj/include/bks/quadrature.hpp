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

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bks/liegroup.hpp"

namespace bks {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);
/// n-point Gauss-Hermite rule for the weight e^{-x^2} on the real line.
Rule1D gauss_hermite(int n);

/// Neumaier-compensated accumulator (componentwise for complex values).
class CompensatedSum {
 public:
  void add(double v) { add(re_, re_c_, v); }
  void add(cplx v) {
    add(re_, re_c_, v.real());
    add(im_, im_c_, v.imag());
  }
  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }
  double real() const { return re_ + re_c_; }

 private:
  static void add(double& s, double& c, double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

enum class AlgebraBackend { CartanReduced, GaussHermiteFull, MonteCarlo };
enum class McProposal { Gaussian, WeylOrbit };
std::string to_string(AlgebraBackend b);
AlgebraBackend algebra_backend_from_string(const std::string& s);

/// A node in the Lie algebra: orthonormal coordinates y and, when the node was
/// produced by a Cartan-based rule, Cartan coordinates h of a conjugate of y.
struct AlgebraPoint {
  Vec y;
  Vec h;
  bool has_cartan = false;
  /// -|y|^2 / (2 sigma^2), the log of the Gaussian weight at this node.
  double log_weight = 0.0;
};

/// Rule for integrals of the form  int_k F(Y) exp(-|Y|^2 / (2 sigma^2)) dY.
struct AlgebraQuadrature {
  AlgebraBackend backend = AlgebraBackend::CartanReduced;
  double sigma = 1.0;
  /// Ad-invariant integrands only: largest |centre| of the Gaussian bumps of
  /// F * weight on the Cartan, used to size the box.
  double center_radius = 0.0;
  /// When set the integrand returns F(Y) * exp(log_weight) itself and the rule
  /// does not apply the Gaussian (for F that overflows on its own).
  bool weight_in_integrand = false;

  // cartan-reduced
  int gl_order = 12;
  double panels_per_sigma = 2.0;
  double extent_sigmas = 14.0;

  // gauss-hermite-full
  int gh_nodes = 64;

  // monte-carlo
  long samples = 100000;
  std::uint64_t seed = 1;
  McProposal proposal = McProposal::Gaussian;
  /// Cartan centre c of the Weyl-orbit mixture  (1/|W|) sum_w N(w c, sigma^2).
  Vec orbit_center;
};

/// Rule for normalized-Haar integrals over K.
enum class GroupBackend { TorusTrapezoid, SU2Euler, HaarMC };
std::string to_string(GroupBackend b);
GroupBackend group_backend_from_string(const std::string& s);

struct GroupQuadrature {
  GroupBackend backend = GroupBackend::TorusTrapezoid;
  int resolution = 16;
  long samples = 100000;
  std::uint64_t seed = 1;
};

template <class T>
struct Estimate {
  T value{};
  double error = 0.0;
  long evaluations = 0;
};

using AlgebraIntegrand = std::function<cplx(const AlgebraPoint&)>;
using GroupIntegrand = std::function<cplx(const CMat&)>;

/// c_K with int_k F dY = c_K int_t F(H) prod_{alpha>0} alpha(H)^2 dH for Ad-invariant F.
double weyl_constant(const GroupSpec& group, int hermite_nodes = 0);

/// Conjugate of Y inside the Cartan, in Cartan coordinates (eigenvalue sort).
Vec cartan_representative(const GroupSpec& group, const Vec& y);

Estimate<cplx> integrate_algebra(const GroupSpec& group, const AlgebraIntegrand& f,
                                 const AlgebraQuadrature& q);
Estimate<cplx> integrate_group(const GroupSpec& group, const GroupIntegrand& f,
                               const GroupQuadrature& q);

/// Deterministic node/weight list of a group rule (not for haar-mc).
struct GroupNodes {
  std::vector<CMat> x;
  std::vector<double> w;
};
GroupNodes group_nodes(const GroupSpec& group, GroupBackend backend, int resolution);

/// Haar-distributed element of K from a seeded engine.
class HaarSampler {
 public:
  HaarSampler(const GroupSpec& group, std::uint64_t seed);
  CMat next();
  std::mt19937_64& engine() { return rng_; }

 private:
  GroupSpec group_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace bks
