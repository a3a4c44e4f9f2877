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

#include <cmath>
#include <random>

#include "bks/halfform.hpp"
#include "bks/quadrature.hpp"
#include "doctest.h"

using namespace bks;

namespace {

// Golub-Welsch: nodes and weights from the Jacobi matrix of the Hermite recurrence.
Rule1D golub_welsch_hermite(int n) {
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Rule1D r;
  for (int k = 0; k < n; ++k) {
    r.x.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    r.w.push_back(std::sqrt(kPi) * v * v);
  }
  return r;
}

AlgebraQuadrature gauss_weight(AlgebraBackend b, double center_radius = 0.0) {
  AlgebraQuadrature q;
  q.backend = b;
  q.sigma = 1.0 / std::sqrt(2.0);
  q.center_radius = center_radius;
  return q;
}

cplx one(const AlgebraPoint&) { return 1.0; }

}  // namespace

TEST_CASE("Gauss-Legendre exactness") {
  for (int n : {1, 2, 5, 12, 40}) {
    const Rule1D r = gauss_legendre(n, -0.5, 2.0);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow(r.x[i], k);
      const double want = (std::pow(2.0, k + 1) - std::pow(-0.5, k + 1)) / (k + 1);
      CHECK(s == doctest::Approx(want).epsilon(1e-12));
    }
    for (double w : r.w) CHECK(w > 0.0);
  }
}

TEST_CASE("Gauss-Hermite exactness and agreement with Golub-Welsch") {
  for (int n : {1, 3, 10, 31, 64}) {
    const Rule1D r = gauss_hermite(n);
    for (double w : r.w) CHECK(w > 0.0);
    for (int k = 0; 2 * k <= std::min(2 * n - 1, 60); ++k) {
      long double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.w[i] * std::pow((long double)r.x[i], 2 * k);
      const double want = std::tgamma(k + 0.5);
      CHECK(double(s) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  const Rule1D a = gauss_hermite(20), b = golub_welsch_hermite(20);
  for (int i = 0; i < 20; ++i) {
    CHECK(a.x[i] == doctest::Approx(b.x[i]).epsilon(1e-12));
    CHECK(a.w[i] == doctest::Approx(b.w[i]).epsilon(1e-9));
  }
}

TEST_CASE("Weyl constant") {
  for (const auto& g : {GroupSpec::su2(), GroupSpec::su3(), GroupSpec::su3(Normalization::Reference)}) {
    const double ck = weyl_constant(g);
    // Independent evaluation of int_t e^{-|H|^2} prod alpha^2 with a large tensor rule.
    const Rule1D r = gauss_hermite(30);
    double s = 0.0;
    Vec h(g.rank());
    if (g.rank() == 1) {
      for (int i = 0; i < 30; ++i) {
        h << r.x[i];
        double j = 1.0;
        for (const Vec& a : g.positive_roots()) j *= std::pow(a.dot(h), 2);
        s += r.w[i] * j;
      }
    } else {
      for (int i = 0; i < 30; ++i)
        for (int k = 0; k < 30; ++k) {
          h << r.x[i], r.x[k];
          double j = 1.0;
          for (const Vec& a : g.positive_roots()) j *= std::pow(a.dot(h), 2);
          s += r.w[i] * r.w[k] * j;
        }
    }
    CHECK(ck * s == doctest::Approx(std::pow(kPi, g.dim() / 2.0)).epsilon(1e-10));
    CHECK(weyl_constant(g, 12) == doctest::Approx(ck).epsilon(1e-8));
  }
  // Radial reduction on R^3: int e^{-r^2} 4 pi r^2 dr = pi^{3/2} gives c = 2 pi / |alpha|^2.
  const auto su2 = GroupSpec::su2();
  CHECK(weyl_constant(su2) ==
        doctest::Approx(2.0 * kPi / su2.positive_roots()[0].squaredNorm()).epsilon(1e-13));
  CHECK_THROWS_AS(weyl_constant(GroupSpec::torus(1)), DomainError);
}

TEST_CASE("Gaussian mass on every backend") {
  for (const auto& g : {GroupSpec::torus(1), GroupSpec::torus(2), GroupSpec::su2(), GroupSpec::su3()}) {
    CAPTURE(g.name());
    const double want = std::pow(kPi, g.dim() / 2.0);
    const auto c = integrate_algebra(g, one, gauss_weight(AlgebraBackend::CartanReduced));
    CHECK(std::abs(c.value - want) <= 1e-10 * want);
    if (g.dim() <= 3) {
      const auto h = integrate_algebra(g, one, gauss_weight(AlgebraBackend::GaussHermiteFull));
      CHECK(std::abs(h.value - want) <= 1e-10 * want);
    }
    auto q = gauss_weight(AlgebraBackend::MonteCarlo);
    q.samples = 2000;
    q.proposal = McProposal::WeylOrbit;
    q.orbit_center = Vec::Zero(g.rank());
    const auto m = integrate_algebra(g, one, q);
    CHECK(std::abs(m.value - want) <= 5.0 * m.error + 1e-12 * want);
  }
}

TEST_CASE("cross-backend agreement on e^{-|Y|^2} eta(Y)^2 over SU(2)") {
  const auto g = GroupSpec::su2();
  const double a = g.positive_roots()[0].norm();
  auto f = [&](const AlgebraPoint& p) -> cplx {
    const double e = eta(g, p.y);
    return e * e;
  };
  // int e^{-h^2} sinh^2(a h) dh = (sqrt(pi)/2)(e^{a^2} - 1), times c_K.
  const double exact = weyl_constant(g) * std::sqrt(kPi) / 2.0 * std::expm1(a * a);
  const auto c = integrate_algebra(g, f, gauss_weight(AlgebraBackend::CartanReduced, a));
  auto hq = gauss_weight(AlgebraBackend::GaussHermiteFull);
  hq.gh_nodes = 80;
  const auto h = integrate_algebra(g, f, hq);
  CHECK(std::abs(c.value - exact) <= 1e-10 * exact);
  CHECK(std::abs(c.value - h.value) <= c.error + h.error + 1e-9 * exact);
  CHECK(std::abs(h.value - exact) <= 1e-8 * exact);
  auto mq = gauss_weight(AlgebraBackend::MonteCarlo);
  mq.samples = 20000;
  mq.proposal = McProposal::WeylOrbit;
  Vec c0(1);
  c0 << a;
  mq.orbit_center = c0;
  const auto m = integrate_algebra(g, f, mq);
  CHECK(std::abs(m.value - exact) <= 5.0 * m.error + 1e-12 * exact);
  CHECK(m.error <= 1e-2 * exact);
}

TEST_CASE("odd integrands vanish") {
  const auto su2 = GroupSpec::su2();
  auto odd = [](const AlgebraPoint& p) -> cplx { return p.y(0) * p.y(1) * p.y(1) + p.y(2); };
  const auto h = integrate_algebra(su2, odd, gauss_weight(AlgebraBackend::GaussHermiteFull));
  CHECK(std::abs(h.value) <= 1e-12);
  const auto su3 = GroupSpec::su3();
  // Cubic Ad-invariant i tr(Y^3), odd under Y -> -Y.
  auto cubic = [&](const AlgebraPoint& p) -> cplx {
    const CMat Y = su3.algebra_element(p.y);
    return cplx(0, 1) * (Y * Y * Y).trace();
  };
  const auto c = integrate_algebra(su3, cubic, gauss_weight(AlgebraBackend::CartanReduced));
  CHECK(std::abs(c.value) <= 1e-12 * std::pow(kPi, 4));
  auto q = gauss_weight(AlgebraBackend::MonteCarlo);
  q.samples = 500;
  const auto m = integrate_algebra(GroupSpec::torus(3), [](const AlgebraPoint& p) -> cplx { return p.y(1); }, q);
  CHECK(std::abs(m.value) <= 1e-12);
}

TEST_CASE("Gauss-Hermite tensor rule is exact on polynomial times Gaussian") {
  const auto g = GroupSpec::su2();
  auto q = gauss_weight(AlgebraBackend::GaussHermiteFull);
  q.gh_nodes = 8;
  q.sigma = 0.8;
  // Degree 2n - 1 = 15 in each variable; moment of y0^4 y1^6 y2^2.
  auto f = [](const AlgebraPoint& p) -> cplx {
    return std::pow(p.y(0), 4) * std::pow(p.y(1), 6) * std::pow(p.y(2), 2);
  };
  auto moment = [&](int k) {
    return std::pow(2.0 * q.sigma * q.sigma, (k + 1) / 2.0) * std::tgamma((k + 1) / 2.0);
  };
  const auto r = integrate_algebra(g, f, q);
  const double want = moment(4) * moment(6) * moment(2);
  CHECK(std::abs(r.value - want) <= 1e-12 * want);
}

TEST_CASE("Monte Carlo determinism and convergence rate") {
  const auto g = GroupSpec::su2();
  auto f = [&](const AlgebraPoint& p) -> cplx { return std::cos(p.y(0)) + p.y(1) * p.y(1); };
  auto q = gauss_weight(AlgebraBackend::MonteCarlo);
  q.samples = 4000;
  q.seed = 99;
  const auto a = integrate_algebra(g, f, q);
  const auto b = integrate_algebra(g, f, q);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  q.samples = 16000;
  const auto c = integrate_algebra(g, f, q);
  CHECK(c.error / a.error == doctest::Approx(0.5).epsilon(0.2));
  const double exact = std::pow(kPi, 1.5) * (std::exp(-0.25) + 0.5);
  CHECK(std::abs(c.value - exact) <= 5.0 * c.error);
}

TEST_CASE("cartan-reduced error estimate shrinks under refinement") {
  const auto g = GroupSpec::su3();
  auto f = [&](const AlgebraPoint& p) -> cplx { return std::exp(-log_eta(g, p.y)); };
  auto q = gauss_weight(AlgebraBackend::CartanReduced);
  q.gl_order = 4;
  q.panels_per_sigma = 0.5;
  const auto coarse = integrate_algebra(g, f, q);
  q.panels_per_sigma = 2.0;
  const auto fine = integrate_algebra(g, f, q);
  CHECK(fine.error < coarse.error);
  CHECK(std::abs(fine.value - coarse.value) <= 2.0 * coarse.error);
}

TEST_CASE("non-finite samples raise") {
  auto bad = [](const AlgebraPoint&) -> cplx { return std::nan(""); };
  CHECK_THROWS_AS(integrate_algebra(GroupSpec::su2(), bad, gauss_weight(AlgebraBackend::CartanReduced)),
                  QuadratureError);
}

TEST_CASE("Cartan representative is Ad-invariant") {
  const auto g = GroupSpec::su3();
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  Vec y(8), x(8);
  for (int i = 0; i < 8; ++i) {
    y(i) = N(rng);
    x(i) = N(rng);
  }
  const CMat k = exp_algebra(g, x);
  const Vec y2 = g.algebra_coordinates(k * g.algebra_element(y) * k.adjoint());
  const Vec h1 = cartan_representative(g, y), h2 = cartan_representative(g, y2);
  CHECK((h1 - h2).norm() < 1e-10);
  CHECK(h1.norm() == doctest::Approx(y.norm()).epsilon(1e-12));
  for (const Vec& a : g.positive_roots()) CHECK(a.dot(h1) >= -1e-12);
}

TEST_CASE("group quadrature: mass, orthogonality and Schur relations") {
  const auto su2 = GroupSpec::su2();
  GroupQuadrature q;
  q.backend = GroupBackend::SU2Euler;
  q.resolution = 12;
  const auto nodes = group_nodes(su2, GroupBackend::SU2Euler, 12);
  double mass = 0.0;
  for (double w : nodes.w) mass += w;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(integrate_group(su2, [](const CMat&) -> cplx { return 1.0; }, q).value - 1.0) <= 1e-14);
  for (int j2 = 1; j2 <= 4; ++j2) {
    const Irrep r = make_irrep(su2, {j2});
    for (int i = 0; i <= j2; ++i)
      for (int k = 0; k <= j2; ++k) {
        const auto v = integrate_group(su2, [&](const CMat& x) { return wigner_matrix(j2, x)(i, k); }, q);
        CHECK(std::abs(v.value) <= 1e-10);
      }
    const auto n2 = integrate_group(su2, [&](const CMat& x) { return std::norm(character_of_element(su2, r, x)); }, q);
    CHECK(std::abs(n2.value - 1.0) <= 1e-8);
  }
  const auto t = GroupSpec::torus(2);
  GroupQuadrature tq;
  tq.resolution = 11;
  for (int k1 = -5; k1 <= 5; ++k1) {
    const Irrep r = make_irrep(t, {k1, 2});
    const auto v = integrate_group(t, [&](const CMat& x) { return character_of_element(t, r, x); }, tq);
    CHECK(std::abs(v.value) <= 1e-14);
    CHECK(v.error <= 1e-14);
  }
}

TEST_CASE("Haar Monte Carlo on SU(3)") {
  const auto g = GroupSpec::su3();
  HaarSampler s(g, 7);
  for (int k = 0; k < 20; ++k) {
    const CMat x = s.next();
    CHECK((x * x.adjoint() - CMat::Identity(3, 3)).norm() < 1e-13);
    CHECK(std::abs(x.determinant() - 1.0) < 1e-13);
  }
  GroupQuadrature q;
  q.backend = GroupBackend::HaarMC;
  q.samples = 40000;
  q.seed = 3;
  const Irrep fund = make_irrep(g, {1, 0}), adj = make_irrep(g, {1, 1});
  const auto m1 = integrate_group(g, [&](const CMat& x) { return character_of_element(g, fund, x); }, q);
  CHECK(std::abs(m1.value) <= 5.0 * m1.error);
  const auto m2 = integrate_group(g, [&](const CMat& x) { return std::norm(character_of_element(g, adj, x)); }, q);
  CHECK(std::abs(m2.value - 1.0) <= 5.0 * m2.error);
  const auto m3 = integrate_group(
      g, [&](const CMat& x) { return character_of_element(g, fund, x) * std::conj(character_of_element(g, adj, x)); }, q);
  CHECK(std::abs(m3.value) <= 5.0 * m3.error);
}
