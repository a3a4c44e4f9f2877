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

#include "bks/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bks {
namespace {

constexpr cplx kI{0.0, 1.0};

cplx checked(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw QuadratureError("integrand returned a non-finite value");
  return v;
}

double jacobian(const GroupSpec& g, const Vec& h) {
  double j = 1.0;
  for (const Vec& a : g.positive_roots()) {
    const double v = a.dot(h);
    j *= v * v;
  }
  return j;
}

// Calls body(index vector) for every point of an r-fold tensor grid of size m.
template <class Body>
void tensor_loop(int r, int m, Body&& body) {
  std::vector<int> idx(r, 0);
  while (true) {
    body(idx);
    int i = 0;
    while (i < r && ++idx[i] == m) idx[i++] = 0;
    if (i == r) break;
  }
}

Rule1D composite_legendre(int order, int panels, double a, double b) {
  const Rule1D base = gauss_legendre(order);
  Rule1D out;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < order; ++k) {
      out.x.push_back(lo + 0.5 * h * (base.x[k] + 1.0));
      out.w.push_back(0.5 * h * base.w[k]);
    }
  }
  return out;
}

cplx cartan_reduced_once(const GroupSpec& g, const AlgebraIntegrand& f, const AlgebraQuadrature& q,
                         int panels, double ck, long* evals) {
  const int r = g.rank();
  const double L = q.center_radius + q.extent_sigmas * q.sigma;
  const Rule1D rule = composite_legendre(q.gl_order, panels, -L, L);
  const int m = static_cast<int>(rule.x.size());
  CompensatedSum acc;
  AlgebraPoint pt;
  pt.h.resize(r);
  pt.has_cartan = true;
  tensor_loop(r, m, [&](const std::vector<int>& idx) {
    double w = 1.0;
    for (int i = 0; i < r; ++i) {
      pt.h(i) = rule.x[idx[i]];
      w *= rule.w[idx[i]];
    }
    pt.log_weight = -pt.h.squaredNorm() / (2.0 * q.sigma * q.sigma);
    const double gauss = q.weight_in_integrand ? 1.0 : std::exp(pt.log_weight);
    if (gauss == 0.0) return;
    pt.y = g.is_torus() ? pt.h : g.cartan_to_algebra(pt.h);
    const double jac = g.is_torus() ? 1.0 : jacobian(g, pt.h);
    if (jac == 0.0) return;
    acc.add(checked(f(pt)) * (w * gauss * jac));
    ++*evals;
  });
  return ck * acc.value();
}

cplx hermite_once(const GroupSpec& g, const AlgebraIntegrand& f, const AlgebraQuadrature& q,
                  int nodes, long* evals) {
  const int d = g.dim();
  const Rule1D rule = gauss_hermite(nodes);
  const double sc = std::sqrt(2.0) * q.sigma;
  CompensatedSum acc;
  AlgebraPoint pt;
  pt.y.resize(d);
  pt.has_cartan = g.is_torus();
  tensor_loop(d, nodes, [&](const std::vector<int>& idx) {
    double lw = 0.0;
    for (int i = 0; i < d; ++i) {
      pt.y(i) = sc * rule.x[idx[i]];
      lw += std::log(sc * rule.w[idx[i]]);
      if (q.weight_in_integrand) lw += rule.x[idx[i]] * rule.x[idx[i]];
    }
    const double w = std::exp(lw);
    if (pt.has_cartan) pt.h = pt.y;
    pt.log_weight = -pt.y.squaredNorm() / (2.0 * q.sigma * q.sigma);
    acc.add(checked(f(pt)) * w);
    ++*evals;
  });
  return acc.value();
}

// All signed permutations of z.
std::vector<Vec> hyperoctahedral_orbit(const Vec& z) {
  const int r = static_cast<int>(z.size());
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Vec> out;
  do {
    for (int mask = 0; mask < (1 << r); ++mask) {
      Vec v(r);
      for (int i = 0; i < r; ++i) v(i) = ((mask >> i) & 1 ? -1.0 : 1.0) * z(perm[i]);
      out.push_back(v);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Estimate<cplx> monte_carlo(const GroupSpec& g, const AlgebraIntegrand& f, const AlgebraQuadrature& q) {
  if (q.samples < 2) throw DomainError("monte-carlo needs at least 2 samples");
  HaarSampler haar(g, q.seed);
  std::mt19937_64& rng = haar.engine();
  std::normal_distribution<double> N(0.0, 1.0);
  const double s2 = q.sigma * q.sigma;
  CompensatedSum sum;
  double m2_re = 0.0, m2_im = 0.0, mean_re = 0.0, mean_im = 0.0;
  long evals = 0;

  auto record = [&](long k, cplx v) {
    // Welford update, componentwise.
    const double dr = v.real() - mean_re, di = v.imag() - mean_im;
    mean_re += dr / double(k + 1);
    mean_im += di / double(k + 1);
    m2_re += dr * (v.real() - mean_re);
    m2_im += di * (v.imag() - mean_im);
    sum.add(v);
  };

  if (q.proposal == McProposal::Gaussian) {
    const int d = g.dim();
    const double mass = std::pow(2.0 * kPi * s2, 0.5 * d);
    AlgebraPoint pt;
    pt.has_cartan = g.is_torus();
    for (long k = 0; k < q.samples; ++k) {
      Vec z(d);
      for (int i = 0; i < d; ++i) z(i) = q.sigma * N(rng);
      pt.log_weight = -z.squaredNorm() / (2.0 * s2);
      const double m = q.weight_in_integrand ? mass * std::exp(-pt.log_weight) : mass;
      pt.y = z;
      if (pt.has_cartan) pt.h = z;
      const cplx a = checked(f(pt));
      pt.y = -z;
      if (pt.has_cartan) pt.h = -z;
      const cplx b = checked(f(pt));
      evals += 2;
      record(k, 0.5 * m * (a + b));
    }
  } else {
    const int r = g.rank();
    if (q.orbit_center.size() != r) throw DomainError("orbit proposal needs a Cartan centre");
    const double ck = g.is_torus() ? 1.0 : weyl_constant(g);
    const auto& W = g.weyl_group();
    std::vector<Vec> centers;
    for (const Mat& w : W) centers.push_back(w * q.orbit_center);
    const double log_norm = -0.5 * r * std::log(2.0 * kPi * s2) - std::log(double(W.size()));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(W.size()) - 1);
    AlgebraPoint pt;
    pt.has_cartan = true;
    for (long k = 0; k < q.samples; ++k) {
      Vec z(r);
      for (int i = 0; i < r; ++i) z(i) = N(rng);
      const Vec& c = centers[pick(rng)];
      const CMat x = haar.next();
      const auto orbit = hyperoctahedral_orbit(z);
      CompensatedSum local;
      for (const Vec& zz : orbit) {
        const Vec H = c + q.sigma * zz;
        double mx = -1e300;
        std::vector<double> ex(centers.size());
        for (std::size_t w = 0; w < centers.size(); ++w) {
          ex[w] = -(H - centers[w]).squaredNorm() / (2.0 * s2);
          mx = std::max(mx, ex[w]);
        }
        double se = 0.0;
        for (double e : ex) se += std::exp(e - mx);
        pt.log_weight = -H.squaredNorm() / (2.0 * s2);
        const double log_ratio =
            (q.weight_in_integrand ? 0.0 : pt.log_weight) - (log_norm + mx + std::log(se));
        pt.h = H;
        if (g.is_torus()) {
          pt.y = H;
        } else {
          const CMat Y = g.algebra_element(g.cartan_to_algebra(H));
          pt.y = g.algebra_coordinates(x * Y * x.adjoint());
        }
        local.add(checked(f(pt)) * (ck * jacobian(g, H) * std::exp(log_ratio)));
        ++evals;
      }
      record(k, local.value() / double(orbit.size()));
    }
  }
  Estimate<cplx> e;
  e.value = sum.value() / double(q.samples);
  const double var = (m2_re + m2_im) / double(q.samples - 1);
  e.error = std::sqrt(var / double(q.samples));
  e.evaluations = evals;
  return e;
}

}  // namespace

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    r.x[i] = c - h * z;
    r.x[n - 1 - i] = c + h * z;
    r.w[i] = r.w[n - 1 - i] = 2.0 * h / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

Rule1D gauss_hermite(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite order must be >= 1");
  const double pim4 = std::pow(kPi, -0.25);
  Rule1D r;
  r.x.assign(n, 0.0);
  r.w.assign(n, 0.0);
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(double(n), 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * r.x[0];
    else if (i == 3) z = 1.91 * z - 0.91 * r.x[1];
    else z = 2.0 * z - r.x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    r.x[i] = z;
    r.x[n - 1 - i] = -z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / (pp * pp);
  }
  // Ascending order.
  std::reverse(r.x.begin(), r.x.end());
  std::reverse(r.w.begin(), r.w.end());
  return r;
}

std::string to_string(AlgebraBackend b) {
  switch (b) {
    case AlgebraBackend::CartanReduced: return "cartan-reduced";
    case AlgebraBackend::GaussHermiteFull: return "gauss-hermite-full";
    case AlgebraBackend::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

AlgebraBackend algebra_backend_from_string(const std::string& s) {
  if (s == "cartan-reduced") return AlgebraBackend::CartanReduced;
  if (s == "gauss-hermite-full") return AlgebraBackend::GaussHermiteFull;
  if (s == "monte-carlo") return AlgebraBackend::MonteCarlo;
  throw DomainError("unknown algebra quadrature backend '" + s + "'");
}

std::string to_string(GroupBackend b) {
  switch (b) {
    case GroupBackend::TorusTrapezoid: return "torus-trapezoid";
    case GroupBackend::SU2Euler: return "su2-euler";
    case GroupBackend::HaarMC: return "haar-mc";
  }
  return "?";
}

GroupBackend group_backend_from_string(const std::string& s) {
  if (s == "torus-trapezoid") return GroupBackend::TorusTrapezoid;
  if (s == "su2-euler") return GroupBackend::SU2Euler;
  if (s == "haar-mc") return GroupBackend::HaarMC;
  throw DomainError("unknown group quadrature backend '" + s + "'");
}

double weyl_constant(const GroupSpec& group, int hermite_nodes) {
  if (group.is_torus()) throw DomainError("tori need no Weyl reduction");
  const int r = group.rank();
  const int m = hermite_nodes > 0 ? hermite_nodes
                                  : static_cast<int>(group.positive_roots().size()) + 2;
  const Rule1D rule = gauss_hermite(m);
  CompensatedSum acc;
  Vec h(r);
  tensor_loop(r, m, [&](const std::vector<int>& idx) {
    double w = 1.0;
    for (int i = 0; i < r; ++i) {
      h(i) = rule.x[idx[i]];
      w *= rule.w[idx[i]];
    }
    acc.add(w * jacobian(group, h));
  });
  return std::pow(kPi, 0.5 * group.dim()) / acc.real();
}

Vec cartan_representative(const GroupSpec& group, const Vec& y) {
  if (group.is_torus()) return y;
  const CMat herm = -kI * group.algebra_element(y);
  const int N = group.matrix_size();
  Vec ev(N);
  if (N == 2) {
    const Eigen::Matrix2cd m = 0.5 * (herm + herm.adjoint());
    ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  } else if (N == 3) {
    const Eigen::Matrix3cd m = 0.5 * (herm + herm.adjoint());
    ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  } else {
    ev = Eigen::SelfAdjointEigenSolver<CMat>(0.5 * (herm + herm.adjoint()), Eigen::EigenvaluesOnly)
             .eigenvalues();
  }
  CMat H = CMat::Zero(N, N);
  // Eigenvalues are ascending; reverse to land in the dominant chamber.
  for (int k = 0; k < N; ++k) H(k, k) = kI * ev(N - 1 - k);
  Vec h(group.rank());
  for (int c = 0; c < group.rank(); ++c) h(c) = group.inner(H, group.basis()[group.cartan_indices()[c]]);
  return h;
}

Estimate<cplx> integrate_algebra(const GroupSpec& group, const AlgebraIntegrand& f,
                                 const AlgebraQuadrature& q) {
  if (!(q.sigma > 0.0)) throw DomainError("quadrature width must be positive");
  Estimate<cplx> e;
  switch (q.backend) {
    case AlgebraBackend::CartanReduced: {
      const double ck = group.is_torus() ? 1.0 : weyl_constant(group);
      const double L = q.center_radius + q.extent_sigmas * q.sigma;
      const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * L * q.panels_per_sigma / q.sigma)));
      e.value = cartan_reduced_once(group, f, q, panels, ck, &e.evaluations);
      const cplx coarse = cartan_reduced_once(group, f, q, (panels + 1) / 2, ck, &e.evaluations);
      e.error = std::abs(e.value - coarse);
      return e;
    }
    case AlgebraBackend::GaussHermiteFull: {
      if (group.dim() > 3) throw DomainError("full Gauss-Hermite rule limited to dim <= 3");
      e.value = hermite_once(group, f, q, q.gh_nodes, &e.evaluations);
      const cplx coarse = hermite_once(group, f, q, std::max(1, q.gh_nodes / 2), &e.evaluations);
      e.error = std::abs(e.value - coarse);
      return e;
    }
    case AlgebraBackend::MonteCarlo:
      return monte_carlo(group, f, q);
  }
  return e;
}

GroupNodes group_nodes(const GroupSpec& group, GroupBackend backend, int n) {
  if (n < 1) throw DomainError("group quadrature resolution must be >= 1");
  GroupNodes out;
  if (backend == GroupBackend::TorusTrapezoid) {
    if (!group.is_torus()) throw DomainError("torus-trapezoid needs a torus");
    const int r = group.rank();
    tensor_loop(r, n, [&](const std::vector<int>& idx) {
      CMat x = CMat::Zero(r, r);
      for (int i = 0; i < r; ++i) x(i, i) = std::exp(kI * (2.0 * kPi * idx[i] / n));
      out.x.push_back(x);
      out.w.push_back(std::pow(double(n), -r));
    });
    return out;
  }
  if (backend == GroupBackend::SU2Euler) {
    if (group.kind() != GroupKind::SU2) throw DomainError("su2-euler needs SU(2)");
    const Rule1D cb = gauss_legendre(n);
    const int na = n, nc = 2 * n;
    for (int ia = 0; ia < na; ++ia) {
      const double a = 2.0 * kPi * ia / na;
      for (std::size_t ib = 0; ib < cb.x.size(); ++ib) {
        const double b = std::acos(cb.x[ib]);
        for (int ic = 0; ic < nc; ++ic) {
          const double c = 4.0 * kPi * ic / nc;
          Eigen::Matrix2cd A, B, C;
          A << std::exp(-kI * a / 2.0), 0, 0, std::exp(kI * a / 2.0);
          B << std::cos(b / 2), -std::sin(b / 2), std::sin(b / 2), std::cos(b / 2);
          C << std::exp(-kI * c / 2.0), 0, 0, std::exp(kI * c / 2.0);
          out.x.push_back(A * B * C);
          out.w.push_back(cb.w[ib] / (2.0 * na * nc));
        }
      }
    }
    return out;
  }
  throw DomainError("haar-mc has no deterministic node list");
}

Estimate<cplx> integrate_group(const GroupSpec& group, const GroupIntegrand& f,
                               const GroupQuadrature& q) {
  Estimate<cplx> e;
  if (q.backend == GroupBackend::HaarMC) {
    if (q.samples < 2) throw DomainError("haar-mc needs at least 2 samples");
    HaarSampler haar(group, q.seed);
    CompensatedSum sum;
    double sq = 0.0;
    for (long k = 0; k < q.samples; ++k) {
      const cplx v = checked(f(haar.next()));
      sum.add(v);
      sq += std::norm(v);
    }
    e.value = sum.value() / double(q.samples);
    const double var = std::max(0.0, (sq / q.samples - std::norm(e.value)) * q.samples / (q.samples - 1.0));
    e.error = std::sqrt(var / q.samples);
    e.evaluations = q.samples;
    return e;
  }
  auto run = [&](int n) {
    const GroupNodes nodes = group_nodes(group, q.backend, n);
    CompensatedSum acc;
    for (std::size_t k = 0; k < nodes.x.size(); ++k) acc.add(checked(f(nodes.x[k])) * nodes.w[k]);
    e.evaluations += static_cast<long>(nodes.x.size());
    return acc.value();
  };
  e.value = run(q.resolution);
  if (q.resolution > 1) e.error = std::abs(e.value - run(q.resolution - 1));
  return e;
}

HaarSampler::HaarSampler(const GroupSpec& group, std::uint64_t seed) : group_(group), rng_(seed) {}

CMat HaarSampler::next() {
  const int N = group_.matrix_size();
  if (group_.is_torus()) {
    CMat x = CMat::Zero(N, N);
    for (int i = 0; i < N; ++i) x(i, i) = std::exp(kI * (2.0 * kPi * uniform_(rng_)));
    return x;
  }
  CMat z(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) z(i, j) = cplx(normal_(rng_), normal_(rng_));
  Eigen::HouseholderQR<CMat> qr(z);
  CMat Q = qr.householderQ();
  const CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < N; ++j) Q.col(j) *= R(j, j) / std::abs(R(j, j));
  const cplx det = Q.determinant();
  return Q * std::pow(det, -1.0 / N);
}

}  // namespace bks
