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


#include "bks/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "bks/halfform.hpp"
#include "bks/heat.hpp"
#include "json.hpp"

namespace bks {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

long to_long(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("config key '" + key + "': expected an integer");
  return static_cast<long>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

// Highest casimir among irreps with at most `boxes` boxes: the band cutoff.
double band_cutoff(const GroupSpec& g, int boxes) {
  double c = 0.0;
  if (g.kind() == GroupKind::SU3) {
    for (int q = 0; 2 * q <= boxes; ++q) c = std::max(c, make_irrep(g, {boxes - 2 * q, q}).casimir);
  } else if (g.is_torus()) {
    std::vector<int> lab(g.rank(), 0);
    lab[0] = boxes;
    c = make_irrep(g, lab).casimir;
  } else {
    c = make_irrep(g, {boxes}).casimir;
  }
  return c * (1.0 + 1e-12) + 1e-12;
}

std::vector<Irrep> band_irreps(const GroupSpec& g, int boxes) {
  std::vector<Irrep> out;
  for (const Irrep& r : enumerate_irreps(g, band_cutoff(g, boxes)))
    if (r.boxes <= boxes) out.push_back(r);
  return out;
}

Vec random_algebra(std::mt19937_64& rng, int dim, double rmax) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, rmax);
  Vec y(dim);
  for (int i = 0; i < dim; ++i) y(i) = N(rng);
  return y * (U(rng) / y.norm());
}

// Fixed per-check streams: sampling of deterministic checks never depends on cfg.seed.
std::mt19937_64 stream(std::uint64_t tag) { return std::mt19937_64(0x5eed0000ULL + tag); }

PairingReport base_report(const std::string& id, const GroupSpec& g, const RunConfig& cfg) {
  PairingReport r;
  r.identity = id;
  r.group = g.name();
  r.add_parameter("hbar0", cfg.hbar0);
  return r;
}

double tol(const RunConfig& cfg, double t) { return t * cfg.tolerance_scale; }

// ---------------------------------------------------------------- checks

std::vector<PairingReport> check_wedge(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  auto rng = stream(1);
  std::uniform_real_distribution<double> S(0.1, 3.0);
  PairingReport rep = base_report("wedge", g, cfg);
  rep.add_parameter("samples", double(cfg.samples));
  double worst = -1.0;
  for (int k = 0; k < cfg.samples; ++k) {
    const Vec y = random_algebra(rng, g.dim(), 2.0);
    const double s = S(rng), sp = S(rng);
    const cplx det = wedge_density_det(g, s, sp, y);
    const double closed = wedge_density(g, s, sp, y);
    const double res = std::abs(det - closed) / closed;
    if (res > worst) {
      worst = res;
      rep.set_values(det, closed, tol(cfg, cfg.tol_wedge));
    }
  }
  return {rep};
}

std::vector<PairingReport> check_flatness(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  auto rng = stream(2);
  std::uniform_real_distribution<double> S(0.1, 3.0);
  PairingReport rep = base_report("phi-flatness", g, cfg);
  rep.add_parameter("samples", double(cfg.samples));
  rep.add_parameter("h", 1e-4);
  double worst = -1.0;
  for (int k = 0; k < cfg.samples; ++k) {
    const Vec y = random_algebra(rng, g.dim(), 2.0);
    const double s = S(rng);
    const double res = std::abs(phi_flatness_residual(g, s, y, 1e-4));
    if (res > worst) {
      worst = res;
      rep.set_values(res, 0.0, tol(cfg, cfg.tol_flatness), "absolute");
    }
  }
  return {rep};
}

std::vector<PairingReport> check_cst(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  std::vector<PairingReport> out;
  const double cut = band_cutoff(g, cfg.boxes);
  for (std::size_t k = 0; k < cfg.s_grid.size(); ++k) {
    const double s = cfg.s_grid[k];
    const double hbar = s * cfg.hbar0;
    // C_hbar scales coefficients by e^{-hbar c/2}; keep them inside the double range.
    const double kcut = std::min(cut, 1200.0 / hbar);
    const auto f = BandLimitedFunction::random(g, kcut, 1000 + k);
    const auto fp = BandLimitedFunction::random(g, kcut, 2000 + k);
    PairingReport rep = base_report("cst-unitarity", g, cfg);
    rep.add_parameter("path", "analytic");
    rep.add_parameter("s", s);
    rep.add_parameter("band_boxes", double(cfg.boxes));
    rep.add_parameter("casimir_cap", kcut);
    rep.set_values(hl2_inner(cfg.hbar0, s, cst_forward(hbar, f), cst_forward(hbar, fp)),
                   BandLimitedFunction::inner(f, fp), tol(cfg, cfg.tol_closed_form));
    out.push_back(rep);
  }
  if (g.kind() == GroupKind::SU3 || (g.is_torus() && g.rank() != 1)) return out;
  // Quadrature path at small hbar, where a fixed algebra grid resolves the integrand.
  const bool torus = g.is_torus();
  const double s = torus ? 0.01 : 0.02;
  AlgebraQuadrature yq = cfg.cartan_rule();
  GroupQuadrature xq;
  if (!torus) {
    yq = cfg.hermite_rule();
    yq.gh_nodes = 24;
    xq.backend = GroupBackend::SU2Euler;
    xq.resolution = 6;
  } else {
    xq.resolution = 12;
  }
  const double qcut = torus ? band_cutoff(g, 5) : band_cutoff(g, 2);
  for (int k = 0; k < 2; ++k) {
    const auto f = BandLimitedFunction::random(g, qcut, 3000 + k);
    const auto fp = BandLimitedFunction::random(g, qcut, 4000 + k);
    const auto e = hl2_inner_quadrature(cfg.hbar0, s, cst_forward(s * cfg.hbar0, f),
                                        cst_forward(s * cfg.hbar0, fp), yq, xq);
    PairingReport rep = base_report("cst-unitarity", g, cfg);
    rep.add_parameter("path", "quadrature");
    rep.add_parameter("s", s);
    rep.set_values(e.value, BandLimitedFunction::inner(f, fp), tol(cfg, cfg.tol_cst_quadrature));
    rep.error_estimate = e.error;
    out.push_back(rep);
  }
  return out;
}

std::vector<PairingReport> check_char_gaussian(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  std::vector<PairingReport> out;
  const std::vector<double> ts = {0.5, 1.0, 2.0};
  auto report = [&](const Irrep& r, double t, const ScaledEstimate& e, const AlgebraQuadrature& q,
                    double tolerance) {
    PairingReport rep = base_report("char-gaussian", g, cfg);
    rep.add_parameter("t", t);
    rep.add_parameter("irrep", r.to_string());
    rep.add_parameter("backend", to_string(q.backend));
    if (q.backend == AlgebraBackend::MonteCarlo) {
      rep.add_parameter("samples", double(q.samples));
      rep.add_parameter("seed", double(q.seed));
    }
    const double closed = std::exp(char_gaussian_log_closed(g, cfg.hbar0, t, r) - e.log_scale);
    rep.set_values(e.value, closed, tolerance);
    rep.error_estimate = e.error / std::abs(closed);
    rep.details.emplace_back("log_scale", e.log_scale);
    return rep;
  };
  if (g.kind() == GroupKind::SU3) {
    const AlgebraQuadrature mc = cfg.monte_carlo_rule(3);
    for (const auto& lab : {std::vector<int>{1, 0}, std::vector<int>{1, 1}}) {
      const Irrep r = make_irrep(g, lab);
      out.push_back(report(r, 1.0, char_gaussian_scaled(g, cfg.hbar0, 1.0, r, mc), mc,
                           tol(cfg, cfg.tol_monte_carlo)));
    }
    for (const Irrep& r : band_irreps(g, std::min(cfg.boxes, 3))) {
      const auto q = cfg.cartan_rule();
      out.push_back(report(r, 1.0, char_gaussian_scaled(g, cfg.hbar0, 1.0, r, q), q,
                           tol(cfg, cfg.tol_deterministic)));
    }
    return out;
  }
  const int boxes = g.is_torus() ? cfg.boxes : std::max(cfg.boxes, 5);
  for (const Irrep& r : band_irreps(g, boxes)) {
    for (double t : ts) {
      const auto q = cfg.cartan_rule();
      const auto c = char_gaussian_scaled(g, cfg.hbar0, t, r, q);
      out.push_back(report(r, t, c, q, tol(cfg, g.is_torus() ? cfg.tol_closed_form
                                                              : cfg.tol_deterministic)));
      if (g.is_torus()) continue;
      // Backend agreement: the same integral by Weyl-orbit Monte Carlo on the full algebra.
      AlgebraQuadrature mq = cfg.monte_carlo_rule(100 + r.boxes);
      mq.samples = std::max(1000L, cfg.mc_samples / 20);
      const auto m = char_gaussian_scaled(g, cfg.hbar0, t, r, mq);
      PairingReport agree = base_report("char-gaussian-backends", g, cfg);
      agree.add_parameter("t", t);
      agree.add_parameter("irrep", r.to_string());
      agree.add_parameter("backends", "cartan-reduced/monte-carlo");
      agree.add_parameter("samples", double(mq.samples));
      agree.add_parameter("seed", double(mq.seed));
      const double bound = 4.0 * (c.error + m.error);
      agree.set_values(m.value, c.value, bound, "absolute");
      agree.error_estimate = bound;
      out.push_back(agree);
    }
  }
  return out;
}

std::vector<std::pair<double, double>> grid_pairs(const RunConfig& cfg) {
  std::vector<std::pair<double, double>> out;
  for (double s : cfg.s_grid)
    for (double sp : cfg.sp_grid) out.emplace_back(s, sp);
  return out;
}

std::vector<PairingReport> check_pairing(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  const double cut = band_cutoff(g, cfg.boxes);
  const auto grid = grid_pairs(cfg);
  const AlgebraQuadrature q = cfg.cartan_rule();
  std::vector<PairingReport> out;
  for (int k = 0; k < cfg.pairs; ++k) {
    const auto [s, sp] = grid[k % grid.size()];
    const auto f = BandLimitedFunction::random(g, cut, 5000 + 2 * k);
    auto fp = BandLimitedFunction::random(g, cut, 5001 + 2 * k);
    const bool orthogonal = k % 10 == 9;
    if (orthogonal) {
      const cplx c = BandLimitedFunction::inner(f, fp) / BandLimitedFunction::inner(f, f);
      fp = fp + f * (-c);
    }
    const QuantumSection a{s, f}, b{sp, fp};
    const auto e = quantum_pair(cfg.hbar0, a, b, q);
    PairingReport rep = base_report("pairing", g, cfg);
    rep.add_parameter("s", s);
    rep.add_parameter("s'", sp);
    rep.add_parameter("band_boxes", double(cfg.boxes));
    rep.add_parameter("pair", double(k));
    rep.add_parameter("orthogonal", orthogonal ? "yes" : "no");
    const cplx ref = quantum_pair_closed(cfg.hbar0, a, b);
    if (orthogonal) {
      const double scale = a_s(g, cfg.hbar0, 0.5 * (s + sp)) *
                           std::sqrt(BandLimitedFunction::inner(f, f).real() *
                                     BandLimitedFunction::inner(fp, fp).real());
      rep.set_values(e.value, 0.0, 1e-8 * scale * cfg.tolerance_scale, "absolute");
      rep.details.emplace_back("scale", scale);
    } else {
      rep.set_values(e.value, ref, tol(cfg, cfg.tol_deterministic));
    }
    rep.error_estimate = e.error;
    out.push_back(rep);
  }
  return out;
}

std::vector<PairingReport> check_bks_factor(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  std::vector<PairingReport> out;
  for (const FactorRow& row : pairing_factor_table(cfg)) {
    PairingReport rep = base_report("bks-factor", g, cfg);
    rep.add_parameter("s", row.s);
    rep.add_parameter("s'", row.sp);
    rep.add_parameter("irrep", row.irrep);
    rep.set_values(row.numeric, row.closed_form, tol(cfg, cfg.tol_deterministic));
    rep.rel_residual = row.residual;
    rep.abs_residual = std::abs(row.numeric - row.closed_form);
    rep.pass = row.residual <= rep.tolerance;
    rep.details.emplace_back("log_numeric", row.log_numeric);
    rep.details.emplace_back("log_closed_form", row.log_closed_form);
    out.push_back(rep);
  }
  return out;
}

std::vector<PairingReport> check_unitarity(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  std::vector<PairingReport> out;
  if (g.kind() == GroupKind::SU3) {
    AlgebraQuadrature mc = cfg.monte_carlo_rule(7);
    mc.samples = std::max(1000L, cfg.mc_samples / 5);
    for (const auto& lab : {std::vector<int>{1, 0}, std::vector<int>{1, 1}})
      out.push_back(verify_unitarity(g, cfg.hbar0, 1.0, 2.0, make_irrep(g, lab), mc,
                                     tol(cfg, cfg.tol_monte_carlo)));
  }
  std::vector<double> sps = cfg.sp_grid;
  sps.push_back(0.0);
  const int boxes = g.kind() == GroupKind::SU2 ? std::max(cfg.boxes, 5) : std::min(cfg.boxes, 2);
  for (const Irrep& r : band_irreps(g, boxes))
    for (double s : cfg.s_grid)
      for (double sp : sps)
        out.push_back(verify_unitarity(g, cfg.hbar0, s, sp, r, cfg.cartan_rule(),
                                       tol(cfg, cfg.tol_deterministic)));
  return out;
}

std::vector<PairingReport> check_factorization(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  std::vector<PairingReport> out;
  for (const Irrep& r : band_irreps(g, cfg.boxes))
    for (const auto& [s, sp] : grid_pairs(cfg))
      out.push_back(verify_factorization(g, cfg.hbar0, s, sp, r, tol(cfg, cfg.tol_algebraic)));
  // Composition law of the map on a random band-limited datum.
  const auto f = BandLimitedFunction::random(g, band_cutoff(g, cfg.boxes), 6000);
  const auto& sg = cfg.s_grid;
  for (std::size_t k = 0; k + 2 < sg.size() + 2; ++k) {
    const double s = sg[k % sg.size()], sp = sg[(k + 1) % sg.size()], spp = sg[(k + 2) % sg.size()];
    const QuantumSection src{spp, f};
    const auto two = bks_map_apply(cfg.hbar0, s, bks_map_apply(cfg.hbar0, sp, src));
    const auto one = bks_map_apply(cfg.hbar0, s, src);
    double worst = 0.0;
    for (const auto& [key, b] : one.f.blocks()) {
      const double n = b.coeff.norm();
      worst = std::max(worst, (two.f.block(b.irrep) - b.coeff).norm() / n);
    }
    PairingReport rep = base_report("bks-composition", g, cfg);
    rep.add_parameter("s", s);
    rep.add_parameter("s'", sp);
    rep.add_parameter("s''", spp);
    rep.set_values(worst, 0.0, 4.0 * kEps, "absolute");
    out.push_back(rep);
  }
  return out;
}

std::vector<PairingReport> check_vertical(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  const double cut = band_cutoff(g, cfg.boxes);
  const AlgebraQuadrature q = cfg.cartan_rule();
  std::vector<PairingReport> out;
  for (std::size_t k = 0; k < cfg.s_grid.size(); ++k) {
    const double s = cfg.s_grid[k];
    const auto f = BandLimitedFunction::random(g, cut, 7000 + 2 * k);
    const auto fp = BandLimitedFunction::random(g, cut, 7001 + 2 * k);
    const auto v = vertical_pair(cfg.hbar0, s, f, fp, q);
    PairingReport rep = base_report("vertical-pair", g, cfg);
    rep.add_parameter("s", s);
    rep.add_parameter("band_boxes", double(cfg.boxes));
    rep.set_values(v.value, a_s(g, cfg.hbar0, 0.5 * s) * BandLimitedFunction::inner(f, fp),
                   tol(cfg, cfg.tol_deterministic));
    rep.error_estimate = v.error;
    out.push_back(rep);

    const auto lim = vertical_limit(cfg.hbar0, s, f, fp, q);
    PairingReport lr = base_report("vertical-limit", g, cfg);
    lr.add_parameter("s", s);
    lr.add_parameter("s'_nodes", join(lim.nodes));
    lr.set_values(v.value, lim.value, 3.0 * lim.error, "absolute");
    lr.error_estimate = lim.error;
    out.push_back(lr);
  }
  return out;
}

std::vector<PairingReport> check_continuity(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  const auto f = BandLimitedFunction::random(g, band_cutoff(g, std::min(cfg.boxes, 2)), 8000);
  return {continuity_check(g, cfg.hbar0, f, cfg.continuity_grid, cfg.cartan_rule(),
                           tol(cfg, g.is_torus() ? cfg.tol_closed_form : cfg.tol_deterministic))};
}

std::vector<PairingReport> check_delta(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  if (!(g.kind() == GroupKind::SU2 || (g.is_torus() && g.rank() == 1))) return {};
  const bool torus = g.is_torus();
  DeltaQuadrature dq;
  dq.algebra = cfg.cartan_rule();
  dq.group.resolution = torus ? 32 : cfg.group_resolution;
  const double t1 = tol(cfg, torus ? cfg.tol_delta_u1 : cfg.tol_delta_su2);
  std::vector<PairingReport> out;
  HaarSampler haar(g, 9);
  for (const Irrep& r : band_irreps(g, torus ? 2 : 2)) {
    if (torus && r.label[0] < 0) continue;
    out.push_back(verify_delta_identity(g, cfg.hbar0, 1.0, r, dq, t1));
    const CMat x2 = haar.next();
    out.push_back(verify_delta_two(g, cfg.hbar0, 1.0, 0.5, 0.0, 0.7, r, x2, dq, t1, t1));
  }
  return out;
}

std::vector<PairingReport> check_prequantum(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  if (g.kind() == GroupKind::SU3) return {};
  const double s = 1.0, sp = 4.0;
  PrequantumSection sec{g, sp, Trivialization::UnitFrame,
                        [](const CMat&, const Vec& y) { return cplx(std::exp(-0.5 * y.squaredNorm())); }};
  AlgebraQuadrature yq = cfg.cartan_rule();
  yq.sigma = std::sqrt(0.5);
  GroupQuadrature xq;
  xq.backend = g.is_torus() ? GroupBackend::TorusTrapezoid : GroupBackend::SU2Euler;
  xq.resolution = 2;
  const auto n0 = prequantum_norm_sq(sec, yq, xq);
  const auto nb = prequantum_norm_sq(preq_map_apply(s, sec), yq, xq);
  const auto np = prequantum_norm_sq(preq_parallel_transport(s, sec), yq, xq);
  std::vector<PairingReport> out;

  PairingReport rep = base_report("prequantum-map", g, cfg);
  rep.add_parameter("s", s);
  rep.add_parameter("s'", sp);
  rep.add_parameter("amplitude", "exp(-|Y|^2/2), unit frame");
  const double ratio = std::sqrt(nb.value / n0.value);
  if (g.is_torus()) {
    // phi is the constant ((s+s')/2)^n / (s s')^{n/2}.
    const double phi_t = std::pow(0.5 * (s + sp), g.dim()) / std::pow(s * sp, 0.5 * g.dim());
    rep.set_values(ratio, std::sqrt(phi_t), tol(cfg, cfg.tol_closed_form));
  } else {
    rep.set_values(ratio, 1.0, 0.0, "absolute");
    rep.tolerance = cfg.prequantum_margin;
    rep.pass = rep.abs_residual > cfg.prequantum_margin;
    rep.details.emplace_back("required_margin", cfg.prequantum_margin);
  }
  rep.error_estimate = (nb.error / nb.value + n0.error / n0.value);
  out.push_back(rep);

  PairingReport pt = base_report("prequantum-transport", g, cfg);
  pt.add_parameter("s", s);
  pt.add_parameter("s'", sp);
  pt.set_values(std::sqrt(np.value / n0.value), 1.0, 1e-12, "absolute");
  out.push_back(pt);

  // Quantum side of the contrast: the BKS map preserves norms.
  const auto f = BandLimitedFunction::random(g, band_cutoff(g, std::min(cfg.boxes, 3)), 8100);
  const QuantumSection q0{sp, f};
  const auto qb = bks_map_apply(cfg.hbar0, s, q0);
  const auto m0 = quantum_pair(cfg.hbar0, q0, q0, cfg.cartan_rule());
  const auto mb = quantum_pair(cfg.hbar0, qb, qb, cfg.cartan_rule());
  PairingReport qr = base_report("quantum-map-norm", g, cfg);
  qr.add_parameter("s", s);
  qr.add_parameter("s'", sp);
  qr.set_values(std::sqrt(mb.value.real() / m0.value.real()), 1.0, tol(cfg, cfg.tol_deterministic),
                "absolute");
  out.push_back(qr);
  return out;
}

using CheckFn = std::vector<PairingReport> (*)(const RunConfig&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r = {
      {"wedge", check_wedge},
      {"phi-flatness", check_flatness},
      {"cst-unitarity", check_cst},
      {"char-gaussian", check_char_gaussian},
      {"pairing", check_pairing},
      {"bks-factor", check_bks_factor},
      {"unitarity", check_unitarity},
      {"factorization", check_factorization},
      {"vertical-limit", check_vertical},
      {"continuity", check_continuity},
      {"delta", check_delta},
      {"prequantum", check_prequantum},
  };
  return r;
}

PairingReport failure_report(const std::string& id, const RunConfig& cfg, const std::string& what) {
  PairingReport r;
  r.identity = id;
  r.group = cfg.group().name();
  r.lhs = r.rhs = std::nan("");
  r.abs_residual = r.rel_residual = std::nan("");
  r.pass = false;
  r.flags.push_back("exception: " + what);
  return r;
}

ojson cplx_json(cplx v) { return ojson::array({v.real(), v.imag()}); }

double json_double(const ojson& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

ojson report_json(const PairingReport& r) {
  ojson j;
  j["identity"] = r.identity;
  j["group"] = r.group;
  ojson p = ojson::object();
  for (const auto& [k, v] : r.parameters) p[k] = v;
  j["parameters"] = p;
  j["lhs"] = cplx_json(r.lhs);
  j["rhs"] = cplx_json(r.rhs);
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["residual_kind"] = r.residual_kind;
  j["error_estimate"] = r.error_estimate;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["flags"] = r.flags;
  ojson d = ojson::object();
  for (const auto& [k, v] : r.details) d[k] = v;
  j["details"] = d;
  return j;
}

PairingReport report_from_json(const ojson& j) {
  PairingReport r;
  r.identity = j.at("identity").get<std::string>();
  r.group = j.at("group").get<std::string>();
  for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, v.get<std::string>());
  r.lhs = {json_double(j.at("lhs")[0]), json_double(j.at("lhs")[1])};
  r.rhs = {json_double(j.at("rhs")[0]), json_double(j.at("rhs")[1])};
  r.abs_residual = json_double(j.at("abs_residual"));
  r.rel_residual = json_double(j.at("rel_residual"));
  r.residual_kind = j.at("residual_kind").get<std::string>();
  r.error_estimate = json_double(j.at("error_estimate"));
  r.tolerance = json_double(j.at("tolerance"));
  r.pass = j.at("pass").get<bool>();
  r.flags = j.at("flags").get<std::vector<std::string>>();
  for (const auto& [k, v] : j.at("details").items()) r.details.emplace_back(k, json_double(v));
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- config

GroupSpec RunConfig::group() const { return GroupSpec::make(kind, normalization, torus_rank); }

AlgebraQuadrature RunConfig::cartan_rule() const {
  AlgebraQuadrature q;
  q.backend = AlgebraBackend::CartanReduced;
  q.gl_order = gl_order;
  q.panels_per_sigma = panels_per_sigma;
  q.extent_sigmas = extent_sigmas;
  return q;
}

AlgebraQuadrature RunConfig::hermite_rule() const {
  AlgebraQuadrature q;
  q.backend = AlgebraBackend::GaussHermiteFull;
  q.gh_nodes = gh_nodes;
  return q;
}

AlgebraQuadrature RunConfig::monte_carlo_rule(std::uint64_t seed_offset) const {
  AlgebraQuadrature q;
  q.backend = AlgebraBackend::MonteCarlo;
  q.proposal = McProposal::WeylOrbit;
  q.samples = mc_samples;
  q.seed = seed + seed_offset;
  return q;
}

bool RunConfig::wants(const std::string& check) const {
  for (const auto& c : checks)
    if (c == "all" || c == check) return true;
  return false;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::string chk;
  for (std::size_t i = 0; i < checks.size(); ++i) chk += (i ? ", " : "") + checks[i];
  return {
      {"group.kind", to_string(kind)},
      {"group.normalization", to_string(normalization)},
      {"group.rank", std::to_string(torus_rank)},
      {"run.hbar0", fmt(hbar0)},
      {"run.seed", std::to_string(seed)},
      {"run.checks", chk},
      {"run.threads", std::to_string(threads)},
      {"grid.s", join(s_grid)},
      {"grid.sp", join(sp_grid)},
      {"grid.continuity", join(continuity_grid)},
      {"band.boxes", std::to_string(boxes)},
      {"band.pairs", std::to_string(pairs)},
      {"band.samples", std::to_string(samples)},
      {"quadrature.gl_order", std::to_string(gl_order)},
      {"quadrature.panels_per_sigma", fmt(panels_per_sigma)},
      {"quadrature.extent_sigmas", fmt(extent_sigmas)},
      {"quadrature.gh_nodes", std::to_string(gh_nodes)},
      {"quadrature.mc_samples", std::to_string(mc_samples)},
      {"quadrature.group_resolution", std::to_string(group_resolution)},
      {"tolerance.deterministic", fmt(tol_deterministic)},
      {"tolerance.monte_carlo", fmt(tol_monte_carlo)},
      {"tolerance.algebraic", fmt(tol_algebraic)},
      {"tolerance.closed_form", fmt(tol_closed_form)},
      {"tolerance.wedge", fmt(tol_wedge)},
      {"tolerance.flatness", fmt(tol_flatness)},
      {"tolerance.cst_quadrature", fmt(tol_cst_quadrature)},
      {"tolerance.delta_u1", fmt(tol_delta_u1)},
      {"tolerance.delta_su2", fmt(tol_delta_su2)},
      {"tolerance.prequantum_margin", fmt(prequantum_margin)},
      {"tolerance.scale", fmt(tolerance_scale)},
      {"output.dir", out_dir},
      {"output.format", format},
  };
}

std::string RunConfig::to_text() const {
  std::string out, section;
  for (const auto& [key, value] : echo()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "[" : "\n[") + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "group.kind") {
    if (v == "su2") c.kind = GroupKind::SU2;
    else if (v == "su3") c.kind = GroupKind::SU3;
    else if (v == "torus") c.kind = GroupKind::Torus;
    else throw ConfigError("unknown group kind '" + v + "'");
  } else if (key == "group.normalization") {
    if (v == "unit-volume") c.normalization = Normalization::UnitVolume;
    else if (v == "reference") c.normalization = Normalization::Reference;
    else throw ConfigError("unknown normalization '" + v + "'");
  } else if (key == "group.rank") {
    c.torus_rank = static_cast<int>(to_long(key, v));
  } else if (key == "run.hbar0") {
    c.hbar0 = to_double(key, v);
    if (!(c.hbar0 > 0.0)) throw ConfigError("hbar0 must be positive");
  } else if (key == "run.seed") {
    c.seed = static_cast<std::uint64_t>(to_long(key, v));
  } else if (key == "run.checks") {
    c.checks.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      const auto& names = identity_names();
      if (item != "all" && std::find(names.begin(), names.end(), item) == names.end())
        throw ConfigError("unknown check '" + item + "'");
      c.checks.push_back(item);
    }
  } else if (key == "run.threads") {
    c.threads = static_cast<int>(to_long(key, v));
  } else if (key == "grid.s") {
    c.s_grid = to_list(key, v);
  } else if (key == "grid.sp") {
    c.sp_grid = to_list(key, v);
  } else if (key == "grid.continuity") {
    c.continuity_grid = to_list(key, v);
  } else if (key == "band.boxes") {
    c.boxes = static_cast<int>(to_long(key, v));
  } else if (key == "band.pairs") {
    c.pairs = static_cast<int>(to_long(key, v));
  } else if (key == "band.samples") {
    c.samples = static_cast<int>(to_long(key, v));
  } else if (key == "quadrature.gl_order") {
    c.gl_order = static_cast<int>(to_long(key, v));
  } else if (key == "quadrature.panels_per_sigma") {
    c.panels_per_sigma = to_double(key, v);
  } else if (key == "quadrature.extent_sigmas") {
    c.extent_sigmas = to_double(key, v);
  } else if (key == "quadrature.gh_nodes") {
    c.gh_nodes = static_cast<int>(to_long(key, v));
  } else if (key == "quadrature.mc_samples") {
    c.mc_samples = to_long(key, v);
  } else if (key == "quadrature.group_resolution") {
    c.group_resolution = static_cast<int>(to_long(key, v));
  } else if (key == "tolerance.deterministic") {
    c.tol_deterministic = to_double(key, v);
  } else if (key == "tolerance.monte_carlo") {
    c.tol_monte_carlo = to_double(key, v);
  } else if (key == "tolerance.algebraic") {
    c.tol_algebraic = to_double(key, v);
  } else if (key == "tolerance.closed_form") {
    c.tol_closed_form = to_double(key, v);
  } else if (key == "tolerance.wedge") {
    c.tol_wedge = to_double(key, v);
  } else if (key == "tolerance.flatness") {
    c.tol_flatness = to_double(key, v);
  } else if (key == "tolerance.cst_quadrature") {
    c.tol_cst_quadrature = to_double(key, v);
  } else if (key == "tolerance.delta_u1") {
    c.tol_delta_u1 = to_double(key, v);
  } else if (key == "tolerance.delta_su2") {
    c.tol_delta_su2 = to_double(key, v);
  } else if (key == "tolerance.prequantum_margin") {
    c.prequantum_margin = to_double(key, v);
  } else if (key == "tolerance.scale") {
    c.tolerance_scale = to_double(key, v);
  } else if (key == "output.dir") {
    c.out_dir = v;
  } else if (key == "output.format") {
    if (v != "json" && v != "csv") throw ConfigError("format must be json or csv");
    c.format = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside a section");
    apply_setting(cfg, section + "." + key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, f] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

// ---------------------------------------------------------------- suite

std::vector<std::string> SuiteReport::failures() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].pass) continue;
    std::string s = std::to_string(i) + ": " + reports[i].identity;
    for (const auto& [k, v] : reports[i].parameters) s += " " + k + "=" + v;
    out.push_back(s);
  }
  return out;
}

std::vector<PairingReport> run_identity(const RunConfig& cfg, const std::string& name) {
  for (const auto& [k, fn] : registry()) {
    if (k != name) continue;
    try {
      return fn(cfg);
    } catch (const std::exception& e) {
      return {failure_report(name, cfg, e.what())};
    }
  }
  throw ConfigError("unknown identity '" + name + "'");
}

int thread_count(const RunConfig& cfg) {
  if (const char* env = std::getenv("BKS_VERIFIER_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1, cfg.threads);
}

SuiteReport run_suite(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> jobs;
  for (const auto& [k, fn] : registry())
    if (cfg.wants(k)) jobs.push_back(k);
  std::vector<std::vector<PairingReport>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = run_identity(cfg, jobs[i]);
  };
  const int n = std::min<int>(thread_count(cfg), static_cast<int>(jobs.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  SuiteReport rep;
  // Output location and worker count do not change results; keep them out of the echo.
  for (auto& kv : cfg.echo())
    if (kv.first.rfind("output.", 0) != 0 && kv.first != "run.threads") rep.config.push_back(kv);
  rep.version = version_string();
  for (auto& r : results)
    for (auto& p : r) {
      (p.pass ? rep.passed : rep.failed)++;
      rep.reports.push_back(std::move(p));
    }
  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string to_json(const SuiteReport& report, bool include_wall_clock) {
  ojson j;
  j["version"] = report.version;
  ojson c = ojson::object();
  for (const auto& [k, v] : report.config) c[k] = v;
  j["config"] = c;
  j["summary"] = {{"total", report.passed + report.failed},
                  {"passed", report.passed},
                  {"failed", report.failed}};
  ojson rs = ojson::array();
  for (const auto& r : report.reports) rs.push_back(report_json(r));
  j["reports"] = rs;
  if (include_wall_clock) j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j.dump(2) + "\n";
}

SuiteReport suite_from_json(const std::string& text) {
  const ojson j = ojson::parse(text);
  SuiteReport r;
  r.version = j.at("version").get<std::string>();
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  r.passed = j.at("summary").at("passed").get<int>();
  r.failed = j.at("summary").at("failed").get<int>();
  for (const auto& x : j.at("reports")) r.reports.push_back(report_from_json(x));
  if (j.contains("wall_clock_seconds")) r.wall_clock_seconds = j["wall_clock_seconds"].get<double>();
  return r;
}

std::string to_csv(const std::vector<PairingReport>& reports) {
  std::string out =
      "identity,group,parameters,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,"
      "residual_kind,error_estimate,tolerance,pass,flags\n";
  for (const auto& r : reports) {
    std::string params, flags;
    for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : ";") + k + "=" + v;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out += csv_field(r.identity) + "," + csv_field(r.group) + "," + csv_field(params) + "," +
           csv_num(r.lhs.real()) + "," + csv_num(r.lhs.imag()) + "," + csv_num(r.rhs.real()) + "," +
           csv_num(r.rhs.imag()) + "," + csv_num(r.abs_residual) + "," + csv_num(r.rel_residual) +
           "," + r.residual_kind + "," + csv_num(r.error_estimate) + "," + csv_num(r.tolerance) +
           "," + (r.pass ? "true" : "false") + "," + csv_field(flags) + "\n";
  }
  return out;
}

std::vector<FactorRow> pairing_factor_table(const RunConfig& cfg) {
  const GroupSpec g = cfg.group();
  const AlgebraQuadrature q = cfg.cartan_rule();
  std::vector<double> sps = cfg.sp_grid;
  sps.push_back(0.0);
  std::vector<FactorRow> rows;
  for (const Irrep& r : band_irreps(g, g.kind() == GroupKind::SU3 ? std::min(cfg.boxes, 2) : cfg.boxes)) {
    if (g.is_torus() && r.label[0] < 0) continue;
    for (double s : cfg.s_grid)
      for (double sp : sps) {
        FactorRow row;
        row.irrep = r.to_string();
        row.s = s;
        row.sp = sp;
        row.log_numeric = bks_log_factor_numeric(g, cfg.hbar0, s, sp, r, q).value;
        row.log_closed_form = static_cast<double>(bks_log_factor(g, cfg.hbar0, s, sp, r));
        row.numeric = std::exp(row.log_numeric);
        row.closed_form = std::exp(row.log_closed_form);
        row.residual = std::abs(std::expm1(row.log_numeric - row.log_closed_form));
        rows.push_back(row);
      }
  }
  return rows;
}

std::string factor_table_csv(const std::vector<FactorRow>& rows) {
  std::string out = "irrep,s,sp,numeric,closed_form,log_numeric,log_closed_form,residual\n";
  for (const auto& r : rows)
    out += csv_field(r.irrep) + "," + csv_num(r.s) + "," + csv_num(r.sp) + "," + csv_num(r.numeric) +
           "," + csv_num(r.closed_form) + "," + csv_num(r.log_numeric) + "," +
           csv_num(r.log_closed_form) + "," + csv_num(r.residual) + "\n";
  return out;
}

std::string factor_table_json(const std::vector<FactorRow>& rows) {
  ojson a = ojson::array();
  for (const auto& r : rows)
    a.push_back({{"irrep", r.irrep},
                 {"s", r.s},
                 {"sp", r.sp},
                 {"numeric", r.numeric},
                 {"closed_form", r.closed_form},
                 {"log_numeric", r.log_numeric},
                 {"log_closed_form", r.log_closed_form},
                 {"residual", r.residual}});
  return a.dump(2) + "\n";
}

std::string emit_table(const SuiteReport& report, const std::string& dir, const std::string& stem,
                       const std::string& format, bool include_wall_clock) {
  const std::string path = dir + "/" + stem + "." + format;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  if (format == "json") out << to_json(report, include_wall_clock);
  else if (format == "csv") out << to_csv(report.reports);
  else throw std::runtime_error("unknown format '" + format + "'");
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
  return path;
}

std::string version_string() { return "bkspair 0.1.0"; }

}  // namespace bks
