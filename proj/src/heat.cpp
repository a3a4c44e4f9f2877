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

#include "bks/heat.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bks/halfform.hpp"
#include "json.hpp"

namespace bks {
namespace {

constexpr cplx kI{0.0, 1.0};

bool is_scalar_block(const CMat& c) {
  const cplx d = c(0, 0);
  const double tol = 1e-14 * std::max(1.0, c.norm());
  return (c - d * CMat::Identity(c.rows(), c.cols())).norm() <= tol;
}

// Bound for ||R(g)|| <= G^{boxes}.
double growth_of(const GroupSpec& group, const CMat& g) {
  if (group.is_torus()) {
    double G = 1.0;
    for (int k = 0; k < g.rows(); ++k) {
      const double a = std::abs(g(k, k));
      G = std::max({G, a, 1.0 / a});
    }
    return G;
  }
  Eigen::JacobiSVD<CMat> svd(g);
  return std::max(1.0, svd.singularValues()(0));
}

double log_tail_term(const Irrep& r, double hbar, double log_growth) {
  return 2.0 * std::log(double(r.dim)) - 0.5 * hbar * r.casimir + r.boxes * log_growth;
}

// sum_{c_R > cut} d_R^2 e^{-hbar c_R/2} G^{boxes}, summed shell by shell until
// the terms are decreasing and the last shell no longer changes the total.
double tail_sum(const GroupSpec& group, double hbar, double log_growth, double cut) {
  const double lim = cut * (1.0 + 1e-12) + 1e-300;
  double total = 0.0;
  double prev_max = -1e300;
  double lo = cut;
  for (int it = 0; it < 200; ++it) {
    const double hi = lo + std::max({lo, 80.0 / hbar, 1e-3 / group.scale()});
    double shell = 0.0, shell_max = -1e300;
    bool occupied = false;
    for (const Irrep& r : enumerate_irreps(group, hi)) {
      if (r.casimir <= lim || r.casimir <= lo * (1.0 + 1e-12)) continue;
      const double lt = log_tail_term(r, hbar, log_growth);
      shell_max = std::max(shell_max, lt);
      shell += std::exp(lt);
      occupied = true;
    }
    total += shell;
    lo = hi;
    if (!occupied) continue;
    const bool negligible = shell <= 1e-17 * total || shell_max < -800.0;
    if (negligible && shell_max < prev_max) break;
    prev_max = std::max(prev_max, shell_max);
  }
  return total;
}

}  // namespace

BandLimitedFunction::BandLimitedFunction(const GroupSpec& group) : group_(group) {}

BandLimitedFunction BandLimitedFunction::character(const GroupSpec& group, const Irrep& r) {
  BandLimitedFunction f(group);
  f.set_block(r, CMat::Identity(r.dim, r.dim));
  return f;
}

BandLimitedFunction BandLimitedFunction::matrix_element(const GroupSpec& group, const Irrep& r,
                                                        int i, int j) {
  if (i < 0 || j < 0 || i >= r.dim || j >= r.dim) throw DomainError("matrix index out of range");
  BandLimitedFunction f(group);
  CMat c = CMat::Zero(r.dim, r.dim);
  c(i, j) = 1.0;
  f.set_block(r, c);
  return f;
}

BandLimitedFunction BandLimitedFunction::random(const GroupSpec& group, double cutoff,
                                                std::uint64_t seed, bool class_only) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  BandLimitedFunction f(group);
  for (const Irrep& r : enumerate_irreps(group, cutoff)) {
    CMat c(r.dim, r.dim);
    if (class_only || group.kind() == GroupKind::SU3) {
      c = cplx(N(rng), N(rng)) * CMat::Identity(r.dim, r.dim);
    } else {
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) c(i, j) = cplx(N(rng), N(rng));
    }
    f.set_block(r, c);
  }
  return f;
}

void BandLimitedFunction::set_block(const Irrep& r, const CMat& coeff) {
  if (coeff.rows() != r.dim || coeff.cols() != r.dim)
    throw DomainError("coefficient block must be d_R x d_R");
  blocks_[r.label] = Block{r, coeff};
}

CMat BandLimitedFunction::block(const Irrep& r) const {
  const auto it = blocks_.find(r.label);
  return it == blocks_.end() ? CMat::Zero(r.dim, r.dim) : it->second.coeff;
}

double BandLimitedFunction::band_limit() const {
  double c = 0.0;
  for (const auto& [k, b] : blocks_) c = std::max(c, b.irrep.casimir);
  return c;
}

cplx BandLimitedFunction::evaluate(const CMat& g) const {
  cplx acc = 0.0;
  for (const auto& [k, b] : blocks_) {
    if (group_.kind() == GroupKind::SU3) {
      if (!is_scalar_block(b.coeff))
        throw DomainError("SU(3) functions can only be evaluated on class-function blocks");
      acc += b.coeff(0, 0) * character_of_element(group_, b.irrep, g);
    } else {
      acc += (b.coeff.cwiseProduct(representation_matrix(group_, b.irrep, g))).sum();
    }
  }
  return acc;
}

BandLimitedFunction BandLimitedFunction::conjugate() const {
  BandLimitedFunction out(group_);
  for (const auto& [k, b] : blocks_) {
    switch (group_.kind()) {
      case GroupKind::Torus: {
        std::vector<int> neg = b.irrep.label;
        for (int& v : neg) v = -v;
        out.set_block(make_irrep(group_, neg), b.coeff.conjugate());
        break;
      }
      case GroupKind::SU2: {
        // conj D(x) = J D(x) J^{-1} with J = D([[0,1],[-1,0]]).
        CMat eps(2, 2);
        eps << 0, 1, -1, 0;
        const CMat J = wigner_matrix(b.irrep.label[0], eps);
        const CMat Jinv = J.inverse();
        out.set_block(b.irrep, J.transpose() * b.coeff.conjugate() * Jinv.transpose());
        break;
      }
      case GroupKind::SU3: {
        if (!is_scalar_block(b.coeff))
          throw DomainError("SU(3) conjugation needs class-function blocks");
        const Irrep dual = make_irrep(group_, {b.irrep.label[1], b.irrep.label[0]});
        out.set_block(dual, b.coeff.conjugate());
        break;
      }
    }
  }
  return out;
}

BandLimitedFunction BandLimitedFunction::transformed(
    const std::function<CMat(const Irrep&, const CMat&)>& op) const {
  BandLimitedFunction out(group_);
  for (const auto& [k, b] : blocks_) out.set_block(b.irrep, op(b.irrep, b.coeff));
  return out;
}

BandLimitedFunction BandLimitedFunction::operator+(const BandLimitedFunction& o) const {
  if (!group_.same_as(o.group_)) throw DomainError("functions live on different groups");
  BandLimitedFunction out = *this;
  for (const auto& [k, b] : o.blocks_) out.set_block(b.irrep, out.block(b.irrep) + b.coeff);
  return out;
}

BandLimitedFunction BandLimitedFunction::operator*(cplx a) const {
  return transformed([a](const Irrep&, const CMat& c) { return CMat(a * c); });
}

cplx BandLimitedFunction::inner(const BandLimitedFunction& f, const BandLimitedFunction& fp) {
  if (!f.group_.same_as(fp.group_)) throw DomainError("functions live on different groups");
  cplx acc = 0.0;
  for (const auto& [k, b] : f.blocks_) {
    const auto it = fp.blocks_.find(k);
    if (it == fp.blocks_.end()) continue;
    acc += (b.coeff.conjugate().cwiseProduct(it->second.coeff)).sum() / double(b.irrep.dim);
  }
  return acc;
}

std::string BandLimitedFunction::to_json() const {
  nlohmann::ordered_json j;
  j["group"] = {{"kind", to_string(group_.kind())},
                {"rank", group_.rank()},
                {"normalization", to_string(group_.normalization())},
                {"scale", group_.scale()}};
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& [k, b] : blocks_) {
    nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
    for (int i = 0; i < b.coeff.rows(); ++i) {
      std::vector<double> rr, ii;
      for (int c = 0; c < b.coeff.cols(); ++c) {
        rr.push_back(b.coeff(i, c).real());
        ii.push_back(b.coeff(i, c).imag());
      }
      re.push_back(rr);
      im.push_back(ii);
    }
    j["blocks"].push_back({{"label", b.irrep.label}, {"dim", b.irrep.dim}, {"re", re}, {"im", im}});
  }
  return j.dump(2);
}

BandLimitedFunction BandLimitedFunction::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& gj = j.at("group");
  std::string kv = "kind = " + gj.at("kind").get<std::string>() + "\n";
  kv += "rank = " + std::to_string(gj.at("rank").get<int>()) + "\n";
  kv += "normalization = " + gj.at("normalization").get<std::string>() + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", gj.at("scale").get<double>());
  kv += std::string("scale = ") + buf + "\n";
  BandLimitedFunction f(GroupSpec::from_key_value(kv));
  for (const auto& bj : j.at("blocks")) {
    const Irrep r = make_irrep(f.group_, bj.at("label").get<std::vector<int>>());
    CMat c(r.dim, r.dim);
    for (int i = 0; i < r.dim; ++i)
      for (int k = 0; k < r.dim; ++k)
        c(i, k) = cplx(bj.at("re").at(i).at(k).get<double>(), bj.at("im").at(i).at(k).get<double>());
    f.set_block(r, c);
  }
  return f;
}

long double log_a_s(const GroupSpec& group, double hbar0, double s) {
  if (!(hbar0 > 0.0)) throw DomainError("hbar0 must be positive");
  if (s < 0.0) throw DomainError("s must be >= 0");
  return 0.5L * group.dim() * std::log(static_cast<long double>(kPi) * hbar0) +
         static_cast<long double>(group.rho_norm_sq()) * hbar0 * s;
}

double a_s(const GroupSpec& group, double hbar0, double s) {
  return static_cast<double>(std::exp(log_a_s(group, hbar0, s)));
}

SeriesValue heat_kernel(const GroupSpec& group, double hbar, const CMat& g, double cutoff,
                        double tolerance) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  SeriesValue out;
  CompensatedSum acc;
  for (const Irrep& r : enumerate_irreps(group, cutoff)) {
    if (group.is_torus()) {
      // Monomial characters: combine exponents so that large |g_kk| cannot overflow.
      cplx e = -0.5 * hbar * r.casimir;
      for (int k = 0; k < group.rank(); ++k) e += double(r.label[k]) * std::log(g(k, k));
      acc.add(std::exp(e));
    } else {
      acc.add(double(r.dim) * std::exp(-0.5 * hbar * r.casimir) * character_of_element(group, r, g));
    }
    ++out.terms;
  }
  out.value = acc.value();
  out.tail_bound = tail_sum(group, hbar, std::log(growth_of(group, g)), cutoff);
  if (out.tail_bound > tolerance)
    throw TruncationError("heat-kernel cutoff too small for the requested tolerance",
                          out.tail_bound, tolerance);
  return out;
}

double heat_kernel_cutoff(const GroupSpec& group, double hbar, double growth, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const double lg = std::log(std::max(1.0, growth));
  double cut = 0.0;
  double step = std::max(8.0 / hbar, 1e-2 / group.scale());
  while (tail_sum(group, hbar, lg, cut) > tolerance) cut += step;
  return cut;
}

double nu_density(const GroupSpec& group, double hbar0, double s, const Vec& y) {
  if (!(s > 0.0)) throw DomainError("s must be positive");
  const long double l = -log_a_s(group, hbar0, s) - 0.5L * group.dim() * std::log((long double)s) -
                        log_eta(group, y) - y.squaredNorm() / (s * hbar0);
  return static_cast<double>(std::exp(l));
}

Estimate<cplx> nu_mass(const GroupSpec& group, double hbar0, double s, AlgebraQuadrature q) {
  // Gaussian weight e^{-|Y|^2/hbar}; eta(H) e^{-|H|^2/hbar} peaks near H = hbar rho.
  const double hbar = s * hbar0;
  q.sigma = std::sqrt(0.5 * hbar);
  const double norm = std::exp(-static_cast<double>(log_a_s(group, hbar0, s)) -
                               0.5 * group.dim() * std::log(s));
  if (q.backend == AlgebraBackend::CartanReduced && !group.is_torus())
    q.center_radius = std::max(q.center_radius, hbar * group.rho().norm());
  if (q.backend == AlgebraBackend::MonteCarlo && q.proposal == McProposal::WeylOrbit &&
      q.orbit_center.size() != group.rank())
    q.orbit_center = hbar * group.rho();
  return integrate_algebra(
      group, [&](const AlgebraPoint& p) -> cplx { return norm * eta(group, p.y); }, q);
}

BandLimitedFunction cst_forward(double hbar, const BandLimitedFunction& f) {
  if (hbar < 0.0) throw DomainError("hbar must be >= 0");
  return f.transformed([hbar](const Irrep& r, const CMat& c) {
    return CMat(std::exp(-0.5 * hbar * r.casimir) * c);
  });
}

BandLimitedFunction cst_inverse(double hbar, const BandLimitedFunction& F, double max_condition) {
  if (hbar < 0.0) throw DomainError("hbar must be >= 0");
  for (const auto& [k, b] : F.blocks()) {
    const double amp = 0.5 * hbar * b.irrep.casimir;
    if (amp > std::log(max_condition))
      throw DomainError("inverse CST amplification e^{" + std::to_string(amp) + "} on irrep " +
                        b.irrep.to_string() + " exceeds the condition bound " +
                        std::to_string(max_condition));
  }
  return F.transformed([hbar](const Irrep& r, const CMat& c) {
    return CMat(std::exp(0.5 * hbar * r.casimir) * c);
  });
}

cplx hl2_inner(double hbar0, double s, const BandLimitedFunction& F, const BandLimitedFunction& Fp) {
  if (!F.group().same_as(Fp.group())) throw DomainError("functions live on different groups");
  const double hbar = s * hbar0;
  cplx acc = 0.0;
  for (const auto& [k, b] : F.blocks()) {
    const auto it = Fp.blocks().find(k);
    if (it == Fp.blocks().end()) continue;
    const double m = b.coeff.cwiseAbs().maxCoeff(), mp = it->second.coeff.cwiseAbs().maxCoeff();
    if (m == 0.0 || mp == 0.0) continue;
    // Coefficients sit near e^{-hbar c/2}; combine the scales in the exponent.
    acc += std::exp(hbar * b.irrep.casimir + std::log(m) + std::log(mp)) / double(b.irrep.dim) *
           ((b.coeff / m).conjugate().cwiseProduct(it->second.coeff / mp)).sum();
  }
  return acc;
}

Estimate<cplx> hl2_inner_quadrature(double hbar0, double s, const BandLimitedFunction& F,
                                    const BandLimitedFunction& Fp, AlgebraQuadrature yq,
                                    const GroupQuadrature& xq) {
  const GroupSpec& g = F.group();
  if (!g.same_as(Fp.group())) throw DomainError("functions live on different groups");
  if (g.kind() == GroupKind::SU3) throw DomainError("quadrature path needs matrix elements");
  if (!(s > 0.0)) throw DomainError("s must be positive");
  const double hbar = s * hbar0;
  yq.sigma = std::sqrt(0.5 * hbar);
  const double norm = std::exp(-static_cast<double>(log_a_s(g, hbar0, s)) - 0.5 * g.dim() * std::log(s));

  struct Pre {
    Irrep irrep;
    CMat a, b;
    std::vector<CMat> rx;
  };
  std::vector<Pre> pre;
  std::vector<std::vector<int>> labels;
  for (const auto& [k, b] : F.blocks()) labels.push_back(k);
  for (const auto& [k, b] : Fp.blocks())
    if (!F.blocks().count(k)) labels.push_back(k);

  auto run = [&](int resolution) {
    const GroupNodes nodes = group_nodes(g, xq.backend, resolution);
    pre.clear();
    for (const auto& lab : labels) {
      const Irrep r = make_irrep(g, lab);
      Pre p{r, F.block(r), Fp.block(r), {}};
      for (const CMat& x : nodes.x) p.rx.push_back(representation_matrix(g, r, x));
      pre.push_back(std::move(p));
    }
    auto integrand = [&](const AlgebraPoint& pt) -> cplx {
      const CMat e = exp_algebra(g, pt.y, kI);
      // F(x h) = sum(R(x) .* (c R(h)^T)).
      std::vector<CMat> bf, bfp;
      for (const Pre& p : pre) {
        const CMat rh = representation_matrix(g, p.irrep, e);
        bf.push_back(p.a * rh.transpose());
        bfp.push_back(p.b * rh.transpose());
      }
      CompensatedSum acc;
      for (std::size_t n = 0; n < nodes.x.size(); ++n) {
        cplx f = 0.0, fp = 0.0;
        for (std::size_t k = 0; k < pre.size(); ++k) {
          f += pre[k].rx[n].cwiseProduct(bf[k]).sum();
          fp += pre[k].rx[n].cwiseProduct(bfp[k]).sum();
        }
        acc.add(nodes.w[n] * std::conj(f) * fp);
      }
      return norm * eta(g, pt.y) * acc.value();
    };
    return integrate_algebra(g, integrand, yq);
  };
  Estimate<cplx> e = run(xq.resolution);
  if (xq.resolution > 1) {
    const Estimate<cplx> c = run(xq.resolution - 1);
    e.error += std::abs(e.value - c.value);
    e.evaluations += c.evaluations;
  }
  return e;
}

}  // namespace bks
