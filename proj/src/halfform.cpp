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

#include "bks/halfform.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace bks {
namespace {

constexpr cplx kI{0.0, 1.0};

void require_positive(double s, const char* what) {
  if (!(s > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

std::vector<double> root_values(const GroupSpec& group, const Vec& y) {
  const int nroots = static_cast<int>(group.positive_roots().size());
  if (y.size() != group.dim()) throw DomainError("algebra coordinates have wrong dimension");
  if (nroots == 0) return {};
  const Mat ad = ad_matrix(group, y);
  // -ad_Y^2 is symmetric PSD with eigenvalues alpha(Y)^2 (twice each) and r zeros.
  Eigen::SelfAdjointEigenSolver<Mat> es(ad.transpose() * ad, Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  std::vector<double> out;
  for (int k = 0; k < nroots; ++k) {
    const int i = group.rank() + 2 * k;
    out.push_back(std::sqrt(std::max(0.0, 0.5 * (ev(i) + ev(i + 1)))));
  }
  return out;
}

double log_sinhc(double x) {
  x = std::abs(x);
  if (x < 1e-4) {
    const double x2 = x * x;
    return x2 / 6.0 - x2 * x2 / 180.0;
  }
  if (x > 20.0) return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x) / x);
}

double log_eta_scaled(const std::vector<double>& alphas, double t) {
  double acc = 0.0;
  for (double a : alphas) acc += log_sinhc(t * a);
  return acc;
}

double log_eta(const GroupSpec& group, const Vec& y) {
  return log_eta_scaled(root_values(group, y), 1.0);
}

double eta(const GroupSpec& group, const Vec& y) { return std::exp(log_eta(group, y)); }

double log_omega_norm_sq(const GroupSpec& group, double s, const Vec& y) {
  require_positive(s, "s");
  return group.dim() * std::log(s) + 2.0 * log_eta_scaled(root_values(group, y), s);
}

double omega_norm_sq(const GroupSpec& group, double s, const Vec& y) {
  return std::exp(log_omega_norm_sq(group, s, y));
}

double log_wedge_density(const GroupSpec& group, double s, double sp, const Vec& y) {
  if (s < 0.0 || sp < 0.0 || !(s + sp > 0.0))
    throw DomainError("wedge density needs s, s' >= 0, not both zero");
  const double u = 0.5 * (s + sp);
  return group.dim() * std::log(u) + 2.0 * log_eta_scaled(root_values(group, y), u);
}

double wedge_density(const GroupSpec& group, double s, double sp, const Vec& y) {
  return std::exp(log_wedge_density(group, s, sp, y));
}

CMat phi1(const CMat& a) {
  const int n = static_cast<int>(a.rows());
  if (a.norm() < 1e-3) {
    CMat term = CMat::Identity(n, n), acc = CMat::Identity(n, n);
    for (int k = 1; k <= 8; ++k) {
      term = term * a / double(k + 1);
      acc += term;
    }
    return acc;
  }
  // exp [[A, I], [0, 0]] = [[e^A, phi_1(A)], [0, I]].
  CMat big = CMat::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = a;
  big.topRightCorner(n, n) = CMat::Identity(n, n);
  const CMat e = big.exp();
  return e.topRightCorner(n, n);
}

cplx wedge_density_det(const GroupSpec& group, double s, double sp, const Vec& y,
                       DeterminantRoute route) {
  require_positive(s, "s");
  require_positive(sp, "s'");
  const int n = group.dim();
  const Mat ad = ad_matrix(group, y);
  CMat big(2 * n, 2 * n);

  if (route == DeterminantRoute::Spectral) {
    // i*ad_Y = U diag(mu) U^*, so M_t = U e^{-t mu} U^*, N_t = U i(1-e^{-t mu})/mu U^*.
    const CMat herm = kI * ad.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (herm + herm.adjoint()), Eigen::EigenvaluesOnly);
    const Vec mu = es.eigenvalues();
    auto n_entry = [](double t, double m) {
      return m == 0.0 ? kI * t : kI * (-std::expm1(-t * m) / m);
    };
    big.setZero();
    for (int k = 0; k < n; ++k) {
      big(k, k) = std::exp(s * mu(k));
      big(k, n + k) = n_entry(-s, mu(k));
      big(n + k, k) = std::exp(-sp * mu(k));
      big(n + k, n + k) = n_entry(sp, mu(k));
    }
  } else {
    const CMat a = ad.cast<cplx>();
    auto m_of = [&](double t) -> CMat { return CMat(-kI * t * a).exp(); };
    auto n_of = [&](double t) -> CMat { return kI * t * phi1(-kI * t * a); };
    big.topLeftCorner(n, n) = m_of(s).conjugate();
    big.topRightCorner(n, n) = n_of(s).conjugate();
    big.bottomLeftCorner(n, n) = m_of(sp);
    big.bottomRightCorner(n, n) = n_of(sp);
  }
  return Eigen::PartialPivLU<CMat>(big).determinant() / std::pow(2.0 * kI, n);
}

double log_phi(const GroupSpec& group, double s, double sp, const Vec& y) {
  require_positive(s, "s");
  require_positive(sp, "s'");
  if (sp < s) std::swap(s, sp);
  const auto al = root_values(group, y);
  const double u = 0.5 * (s + sp);
  return group.dim() * std::log(u / std::sqrt(s * sp)) + 2.0 * log_eta_scaled(al, u) -
         log_eta_scaled(al, s) - log_eta_scaled(al, sp);
}

double phi(const GroupSpec& group, double s, double sp, const Vec& y) {
  return std::exp(log_phi(group, s, sp, y));
}

double phi_flatness_residual(const GroupSpec& group, double s, const Vec& y, double h) {
  require_positive(s, "s");
  require_positive(h, "h");
  if (s - 2.0 * h <= 0.0) throw DomainError("step too large for s");
  auto f = [&](double sp) { return phi(group, s, sp, y); };
  return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12.0 * h);
}

}  // namespace bks
