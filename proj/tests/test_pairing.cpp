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
#include "bks/pairing.hpp"
#include "doctest.h"

using namespace bks;

namespace {

AlgebraQuadrature cartan() { return {}; }

AlgebraQuadrature hermite(int n) {
  AlgebraQuadrature q;
  q.backend = AlgebraBackend::GaussHermiteFull;
  q.gh_nodes = n;
  return q;
}

AlgebraQuadrature orbit_mc(long n, std::uint64_t seed) {
  AlgebraQuadrature q;
  q.backend = AlgebraBackend::MonteCarlo;
  q.proposal = McProposal::WeylOrbit;
  q.samples = n;
  q.seed = seed;
  return q;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// SU(2) constants from the scale alone: c_j = 2j(j+1)/lambda, |rho|^2 = 1/(2 lambda).
double su2_casimir(int j2) { return 0.5 * j2 * (0.5 * j2 + 1.0) * 2.0 / calibrate_scale(GroupKind::SU2); }
double su2_rho2() { return 0.5 / calibrate_scale(GroupKind::SU2); }

// Trapezoid in y of exp(b y - a y^2) on a wide window (U(1) pairing oracle).
double gaussian_moment(double a, double b) {
  const double c = b / (2.0 * a), w = 40.0 / std::sqrt(a);
  const int n = 40000;
  const double h = 2.0 * w / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = c - w + i * h;
    acc += (i == 0 || i == n ? 0.5 : 1.0) * std::exp(b * y - a * y * y);
  }
  return acc * h;
}

}  // namespace

TEST_CASE("char_gaussian_integral: U(1) closed forms") {
  const auto u1 = GroupSpec::torus(1);
  for (double t : {0.3, 1.0, 2.5}) {
    CHECK(rel(char_gaussian_integral(u1, 1.0, t, make_irrep(u1, {0}), cartan()), std::sqrt(kPi)) <= 1e-12);
  }
  // chi_1(e^{itY}) = e^{-2 pi t y}; weight e^{-t y^2/2}, prefactor (t/2)^{1/2}.
  const double t = 1.5;
  const double oracle = std::sqrt(0.5 * t) * gaussian_moment(0.5 * t, 2.0 * kPi * t);
  const double v = char_gaussian_integral(u1, 1.0, t, make_irrep(u1, {1}), cartan());
  CHECK(rel(v, oracle) <= 1e-10);
  CHECK(rel(v, std::sqrt(kPi) * std::exp(1.5 * 4.0 * kPi * kPi / 2.0)) <= 1e-10);
}

TEST_CASE("char_gaussian_integral: SU(2) backends and closed form") {
  const auto su2 = GroupSpec::su2();
  for (int j2 : {0, 1, 2, 3, 4, 5}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const Irrep r = make_irrep(su2, {j2});
      const auto e = char_gaussian_scaled(su2, 1.0, t, r, cartan());
      const double lclosed = std::log(j2 + 1.0) + 1.5 * std::log(kPi) + 0.5 * t * (su2_casimir(j2) + su2_rho2());
      CHECK(std::abs(std::log(e.value) + e.log_scale - lclosed) <= 1e-8);
      CHECK(e.error <= 1e-8 * e.value);
    }
  }
  const Irrep half = make_irrep(su2, {1});
  const double c = char_gaussian_integral(su2, 1.0, 1.0, half, cartan());
  const auto gh = char_gaussian_scaled(su2, 1.0, 1.0, half, hermite(48));
  CHECK(rel(gh.full(), c) <= 1e-6);
  CHECK(std::abs(gh.full() - c) <= 3.0 * gh.error * std::exp(gh.log_scale) + 1e-9 * c);
  const auto mc = char_gaussian_scaled(su2, 1.0, 1.0, half, orbit_mc(20000, 3));
  CHECK(std::abs(mc.full() - c) <= 5.0 * mc.error * std::exp(mc.log_scale));
}

TEST_CASE("char_gaussian_integral: SU(3) Monte Carlo against closed form") {
  const auto su3 = GroupSpec::su3();
  for (const auto& lab : {std::vector<int>{1, 0}, std::vector<int>{1, 1}}) {
    const Irrep r = make_irrep(su3, lab);
    const auto e = char_gaussian_scaled(su3, 1.0, 1.0, r, orbit_mc(20000, 11));
    const double closed = std::exp(char_gaussian_log_closed(su3, 1.0, 1.0, r) - e.log_scale);
    CHECK(std::abs(e.value - closed) <= 5.0 * e.error);
    CHECK(e.error <= 1e-2 * closed);
  }
}

TEST_CASE("Schur reduction: matrix Gaussian integral is a multiple of the identity") {
  const auto su2 = GroupSpec::su2();
  for (int j2 : {1, 2}) {
    const Irrep r = make_irrep(su2, {j2});
    const auto M = matrix_gaussian_integral(su2, 1.0, 1.0, r, hermite(40));
    const double G = char_gaussian_integral(su2, 1.0, 1.0, r, cartan());
    const CMat expect = CMat::Identity(j2 + 1, j2 + 1) * (G / (j2 + 1.0));
    CHECK((M.value - expect).cwiseAbs().maxCoeff() <= 1e-6 * G);
  }
}

TEST_CASE("quantum_pair: coincident, orthogonal and closed-form cases") {
  const auto su2 = GroupSpec::su2();
  const auto f = BandLimitedFunction::random(su2, su2_casimir(3) + 1e-9, 5);
  const QuantumSection a{0.8, f};
  const auto same = quantum_pair(1.0, a, a, cartan());
  CHECK(same.value.real() > 0.0);
  CHECK(rel(same.value.real(), a_s(su2, 1.0, 0.8) * BandLimitedFunction::inner(f, f).real()) <= 1e-8);

  const auto g = BandLimitedFunction::matrix_element(su2, make_irrep(su2, {2}), 0, 1);
  const auto h = BandLimitedFunction::matrix_element(su2, make_irrep(su2, {2}), 1, 1);
  const auto k = BandLimitedFunction::character(su2, make_irrep(su2, {1}));
  CHECK(std::abs(quantum_pair(1.0, {0.5, g}, {1.7, h}, cartan()).value) <= 1e-12);
  CHECK(std::abs(quantum_pair(1.0, {0.5, g}, {1.7, k}, cartan()).value) == 0.0);

  const auto u1 = GroupSpec::torus(1);
  const auto e1 = BandLimitedFunction::matrix_element(u1, make_irrep(u1, {1}), 0, 0);
  // conj(F(xe^{isY})) F'(xe^{is'Y}) = e^{-(s+s')c/2} e^{-2 pi (s+s') y}.
  const double s = 1.0, sp = 0.5, c = 4.0 * kPi * kPi;
  const double oracle = std::exp(-0.5 * (s + sp) * c) * std::sqrt(0.5 * (s + sp)) *
                        gaussian_moment(0.5 * (s + sp), 2.0 * kPi * (s + sp));
  const auto v = quantum_pair(1.0, {s, e1}, {sp, e1}, cartan());
  CHECK(rel(v.value.real(), oracle) <= 1e-10);
  CHECK(std::abs(v.value.imag()) <= 1e-14);
  CHECK_THROWS_AS(quantum_pair(1.0, {s, e1}, {sp, k}, cartan()), DomainError);
}

TEST_CASE("pairing theorem on random band-limited pairs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.25, 3.0);
  const auto su2 = GroupSpec::su2();
  const auto u1 = GroupSpec::torus(1);
  for (int k = 0; k < 4; ++k) {
    const auto f = BandLimitedFunction::random(su2, su2_casimir(4) + 1e-9, 100 + k);
    const auto fp = BandLimitedFunction::random(su2, su2_casimir(4) + 1e-9, 200 + k);
    const QuantumSection a{U(rng), f}, b{U(rng), fp};
    const cplx num = quantum_pair(1.0, a, b, cartan()).value;
    const cplx ref = quantum_pair_closed(1.0, a, b);
    CHECK(std::abs(num - ref) <= 1e-6 * std::abs(ref));
  }
  for (int k = 0; k < 4; ++k) {
    const auto f = BandLimitedFunction::random(u1, 25.0 * 4.0 * kPi * kPi + 1e-6, 300 + k);
    const auto fp = BandLimitedFunction::random(u1, 25.0 * 4.0 * kPi * kPi + 1e-6, 400 + k);
    const QuantumSection a{U(rng), f}, b{U(rng), fp};
    const cplx num = quantum_pair(1.0, a, b, cartan()).value;
    const cplx ref = quantum_pair_closed(1.0, a, b);
    CHECK(std::abs(num - ref) <= 1e-6 * std::abs(ref));
  }
}

TEST_CASE("bks factor: numeric against closed form") {
  const auto u1 = GroupSpec::torus(1);
  const auto e = bks_factor_numeric(u1, 1.0, 1.0, 0.5, make_irrep(u1, {1}), cartan());
  CHECK(rel(e.value, std::exp(-kPi * kPi)) <= 1e-9);
  CHECK(e.value == doctest::Approx(5.1724e-5).epsilon(1e-4));

  const auto su2 = GroupSpec::su2();
  const Irrep half = make_irrep(su2, {1});
  CHECK(rel(bks_factor_numeric(su2, 1.0, 0.7, 0.7, half, cartan()).value, 1.0) <= 1e-12);
  const double closed = std::exp(-0.5 * (su2_casimir(1) + su2_rho2()));
  const auto c = bks_factor_numeric(su2, 1.0, 2.0, 1.0, half, cartan());
  const auto g = bks_factor_numeric(su2, 1.0, 2.0, 1.0, half, hermite(48));
  CHECK(rel(c.value, closed) <= 1e-8);
  CHECK(std::abs(c.value - g.value) <= 3.0 * (c.error + g.error) + 1e-8 * closed);
  // s < s' gives a factor above 1.
  CHECK(bks_factor_numeric(su2, 1.0, 0.5, 1.0, half, cartan()).value > 1.0);
  CHECK(rel(bks_factor(su2, 1.0, 2.0, 1.0, half), closed) <= 1e-14);
}

TEST_CASE("bks map: identity, roundtrip, composition and abelian scalar") {
  const auto su2 = GroupSpec::su2();
  const auto f = BandLimitedFunction::random(su2, su2_casimir(3) + 1e-9, 9);
  const QuantumSection a{1.2, f};
  const auto same = bks_map_apply(1.0, 1.2, a);
  for (const auto& [key, b] : f.blocks()) CHECK((same.f.block(b.irrep) - b.coeff).norm() == 0.0);

  const auto there = bks_map_apply(1.0, 0.4, a);
  const auto back = bks_map_apply(1.0, 1.2, there);
  CHECK(back.s == 1.2);
  for (const auto& [key, b] : f.blocks()) CHECK((back.f.block(b.irrep) - b.coeff).norm() <= 4e-16 * b.coeff.norm());

  const auto two = bks_map_apply(1.0, 2.5, bks_map_apply(1.0, 0.4, a));
  const auto one = bks_map_apply(1.0, 2.5, a);
  for (const auto& [key, b] : f.blocks()) {
    const double n = one.f.block(b.irrep).norm();
    CHECK((two.f.block(b.irrep) - one.f.block(b.irrep)).norm() <= 4e-16 * n);
  }

  // Quantum norms are preserved.
  const double n0 = quantum_pair(1.0, a, a, cartan()).value.real();
  const double n1 = quantum_pair(1.0, there, there, cartan()).value.real();
  CHECK(rel(n1, n0) <= 1e-8);

  const auto u1 = GroupSpec::torus(1);
  const Irrep k2 = make_irrep(u1, {2});
  const auto m = BandLimitedFunction::matrix_element(u1, k2, 0, 0);
  const auto b = bks_map_apply(1.0, 0.3, {1.1, m});
  // On matrix-element coefficients m = e^{-s c/2} f the map is e^{-((s-s')/2) c}.
  const double mfrom = std::exp(-0.5 * 1.1 * k2.casimir), mto = std::exp(-0.5 * 0.3 * k2.casimir);
  CHECK(rel(b.f.block(k2)(0, 0).real() * mto / mfrom, std::exp(-0.5 * (0.3 - 1.1) * k2.casimir)) <= 1e-13);
}

TEST_CASE("unitarity reports") {
  const auto u1 = GroupSpec::torus(1);
  const auto r0 = verify_unitarity(u1, 1.0, 1.0, 0.3, make_irrep(u1, {0}), cartan(), 1e-6);
  CHECK(r0.pass);
  CHECK(r0.residual() <= 1e-14);
  const auto su2 = GroupSpec::su2();
  for (int j2 = 0; j2 <= 3; ++j2) {
    const auto r = verify_unitarity(su2, 1.0, 1.0, 0.3, make_irrep(su2, {j2}), cartan(), 1e-6);
    CHECK(r.pass);
    const auto z = verify_unitarity(su2, 1.0, 1.5, 0.0, make_irrep(su2, {j2}), cartan(), 1e-6);
    CHECK(z.pass);
  }
  const auto su3 = GroupSpec::su3();
  const auto m = verify_unitarity(su3, 1.0, 1.0, 2.0, make_irrep(su3, {1, 0}), orbit_mc(40000, 5), 1e-4);
  CHECK(m.residual() <= 5.0 * m.error_estimate + 1e-4);
}

TEST_CASE("factorization reports") {
  const auto u1 = GroupSpec::torus(2);
  const auto r = verify_factorization(u1, 1.0, 2.0, 0.5, make_irrep(u1, {1, -2}));
  CHECK(r.pass);
  const long double lemma = std::exp(-0.75L * make_irrep(u1, {1, -2}).casimir);
  CHECK(std::abs(r.rhs.real() - lemma) <= 1e-14 * lemma);
  const auto su2 = GroupSpec::su2();
  CHECK(verify_factorization(su2, 1.0, 0.9, 0.9, make_irrep(su2, {2})).rhs == cplx(1.0));
  const auto j1 = verify_factorization(su2, 1.0, 1.7, 0.4, make_irrep(su2, {2}));
  CHECK(j1.pass);
  CHECK(j1.residual() <= 1e-14);
}

TEST_CASE("vertical pairing, vertical inner product and the s' -> 0 limit") {
  const auto su2 = GroupSpec::su2();
  const auto g = BandLimitedFunction::matrix_element(su2, make_irrep(su2, {2}), 0, 1);
  const auto h = BandLimitedFunction::matrix_element(su2, make_irrep(su2, {2}), 2, 1);
  CHECK(std::abs(vertical_pair(1.0, 1.0, g, h, cartan()).value) <= 1e-12);
  const auto one = BandLimitedFunction::character(su2, make_irrep(su2, {0}));
  CHECK(rel(vertical_pair(1.0, 1.3, one, one, cartan()).value.real(), a_s(su2, 1.0, 0.65)) <= 1e-9);
  CHECK(rel(vertical_inner(1.0, one, one).real(), std::pow(kPi, 1.5)) <= 1e-14);
  const auto t2 = GroupSpec::torus(2);
  const auto ft = BandLimitedFunction::random(t2, 200.0, 4);
  CHECK(std::abs(vertical_inner(1.0, ft, ft) - kPi * BandLimitedFunction::inner(ft, ft)) <= 1e-13 * std::abs(vertical_inner(1.0, ft, ft)));

  const auto u1 = GroupSpec::torus(1);
  const auto e3 = BandLimitedFunction::matrix_element(u1, make_irrep(u1, {3}), 0, 0);
  // conj(F(x e^{isY})) f'(x) = e^{-s c/2} e^{-2 pi 3 s y}.
  const double c3 = 9.0 * 4.0 * kPi * kPi;
  const double oracle = std::exp(-0.5 * c3) * std::sqrt(0.5) * gaussian_moment(0.5, 6.0 * kPi);
  CHECK(rel(vertical_pair(1.0, 1.0, e3, e3, cartan()).value.real(), oracle) <= 1e-10);

  const auto f = BandLimitedFunction::random(su2, su2_casimir(3) + 1e-9, 21);
  const auto fp = BandLimitedFunction::random(su2, su2_casimir(3) + 1e-9, 22);
  const auto v = vertical_pair(1.0, 1.0, f, fp, cartan());
  const cplx ref = a_s(su2, 1.0, 0.5) * BandLimitedFunction::inner(f, fp);
  CHECK(std::abs(v.value - ref) <= 1e-6 * std::abs(ref));
  const auto lim = vertical_limit(1.0, 1.0, f, fp, cartan());
  CHECK(std::abs(v.value - lim.value) <= 3.0 * lim.error);
  CHECK(lim.error < 1e-2 * std::abs(ref));
}

TEST_CASE("continuity at s = 0") {
  const auto t1 = GroupSpec::torus(1);
  const auto ft = BandLimitedFunction::random(t1, 9.0 * 4.0 * kPi * kPi + 1e-6, 8);
  const auto rt = continuity_check(t1, 1.0, ft, {4e-3, 2e-3, 1e-3}, cartan(), 1e-10);
  CHECK(rt.pass);
  const auto su2 = GroupSpec::su2();
  const auto f = BandLimitedFunction::random(su2, su2_casimir(2) + 1e-9, 8);
  const auto r = continuity_check(su2, 1.0, f, {4e-3, 2e-3, 1e-3}, cartan(), 1e-6);
  CHECK(r.pass);
  // |r - 1| ~ |rho|^2 s at s = 1e-3.
  CHECK(std::abs(r.lhs.real() - 1.0) == doctest::Approx(su2_rho2() * 1e-3).epsilon(1e-2));
}

TEST_CASE("delta identities") {
  DeltaQuadrature dq;
  dq.group.resolution = 32;
  const auto u1 = GroupSpec::torus(1);
  for (int k : {0, 1}) {
    const auto r = verify_delta_identity(u1, 1.0, 1.0, make_irrep(u1, {k}), dq, 1e-8);
    CHECK(r.pass);
    CHECK(r.flags.empty());
  }
  const auto su2 = GroupSpec::su2();
  dq.group.resolution = 6;
  const auto r = verify_delta_identity(su2, 1.0, 1.0, make_irrep(su2, {1}), dq, 1e-3);
  CHECK(r.pass);
  CHECK(r.residual() <= 1e-6);

  const CMat x2 = exp_algebra(su2, (Vec(3) << 0.3, -0.2, 0.5).finished());
  const auto t = verify_delta_two(su2, 1.0, 1.0, 0.5, 0.0, 0.7, make_irrep(su2, {1}), x2, dq, 1e-3, 1e-3);
  CHECK(t.pass);
  const CMat xu = exp_algebra(u1, (Vec(1) << 0.37).finished());
  const auto tu = verify_delta_two(u1, 1.0, 1.0, 0.5, 0.0, 0.7, make_irrep(u1, {2}), xu, dq, 1e-8, 1e-8);
  CHECK(tu.pass);
  CHECK_THROWS_AS(verify_delta_identity(GroupSpec::su3(), 1.0, 1.0, make_irrep(GroupSpec::su3(), {0, 0}), dq, 1.0),
                  DomainError);
}

TEST_CASE("prequantum map against parallel transport") {
  const auto su2 = GroupSpec::su2();
  PrequantumSection sec{su2, 4.0, Trivialization::UnitFrame,
                        [](const CMat&, const Vec& y) { return cplx(std::exp(-0.5 * y.squaredNorm())); }};
  AlgebraQuadrature yq = hermite(32);
  yq.sigma = 1.0;
  GroupQuadrature xq;
  xq.backend = GroupBackend::SU2Euler;
  xq.resolution = 2;
  const double n0 = prequantum_norm_sq(sec, yq, xq).value;
  CHECK(rel(n0, std::pow(kPi, 1.5)) <= 1e-12);
  const auto same = preq_map_apply(4.0, sec);
  CHECK(rel(prequantum_norm_sq(same, yq, xq).value, n0) <= 1e-14);
  const auto b = preq_map_apply(1.0, sec);
  CHECK(b.s == 1.0);
  const double ratio = std::sqrt(prequantum_norm_sq(b, yq, xq).value / n0);
  CHECK(std::abs(ratio - 1.0) > 1e-3);
  const auto p = preq_parallel_transport(1.0, sec);
  CHECK(std::abs(std::sqrt(prequantum_norm_sq(p, yq, xq).value / n0) - 1.0) <= 1e-12);
  const auto pp = preq_parallel_transport(4.0, p);
  const Vec y = (Vec(3) << 0.1, 0.2, -0.3).finished();
  CHECK(pp.amplitude(CMat::Identity(2, 2), y) == sec.amplitude(CMat::Identity(2, 2), y));

  const auto t1 = GroupSpec::torus(1);
  PrequantumSection ts{t1, 4.0, Trivialization::UnitFrame, [](const CMat&, const Vec&) { return cplx(1.0); }};
  const auto tm = preq_map_apply(1.0, ts);
  CHECK(rel(tm.amplitude(CMat::Identity(1, 1), (Vec(1) << 0.8).finished()).real(), std::sqrt(1.25)) <= 1e-14);

  const auto hf = retrivialize(sec, Trivialization::HalfForm);
  CHECK_THROWS_AS(preq_map_apply(1.0, hf), DomainError);
  CHECK_THROWS_AS(preq_parallel_transport(1.0, hf), DomainError);
  CHECK(rel(prequantum_norm_sq(hf, yq, xq).value, n0) <= 1e-10);
}
