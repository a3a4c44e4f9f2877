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

#include "bks/liegroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace bks {
namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<CMat> pauli() {
  std::vector<CMat> s(3, CMat::Zero(2, 2));
  s[0](0, 1) = 1.0;
  s[0](1, 0) = 1.0;
  s[1](0, 1) = -kI;
  s[1](1, 0) = kI;
  s[2](0, 0) = 1.0;
  s[2](1, 1) = -1.0;
  return s;
}

std::vector<CMat> gell_mann() {
  std::vector<CMat> g(8, CMat::Zero(3, 3));
  g[0](0, 1) = g[0](1, 0) = 1.0;
  g[1](0, 1) = -kI;
  g[1](1, 0) = kI;
  g[2](0, 0) = 1.0;
  g[2](1, 1) = -1.0;
  g[3](0, 2) = g[3](2, 0) = 1.0;
  g[4](0, 2) = -kI;
  g[4](2, 0) = kI;
  g[5](1, 2) = g[5](2, 1) = 1.0;
  g[6](1, 2) = -kI;
  g[6](2, 1) = kI;
  const double r3 = 1.0 / std::sqrt(3.0);
  g[7](0, 0) = r3;
  g[7](1, 1) = r3;
  g[7](2, 2) = -2.0 * r3;
  return g;
}

bool near_integer(double x, long* out) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-8 * std::max(1.0, std::abs(x))) return false;
  *out = static_cast<long>(r);
  return true;
}

// Dynkin labels of a weight; throws on non-dominant or non-integral input.
std::vector<long> dynkin_labels(const GroupSpec& g, const Vec& w) {
  if (w.size() != g.rank()) throw DomainError("weight has wrong dimension");
  std::vector<long> a;
  for (const Vec& alpha : g.simple_roots()) {
    long ai = 0;
    if (!near_integer(2.0 * w.dot(alpha) / alpha.squaredNorm(), &ai))
      throw DomainError("weight is not integral");
    if (ai < 0) throw DomainError("weight is not dominant");
    a.push_back(ai);
  }
  return a;
}

void check_torus_weight(const GroupSpec& g, const Vec& w) {
  if (w.size() != g.rank()) throw DomainError("weight has wrong dimension");
  for (int i = 0; i < w.size(); ++i) {
    long k = 0;
    if (!near_integer(w(i) * std::sqrt(g.scale()), &k))
      throw DomainError("torus weight is not integral");
  }
}

// Neville extrapolation of samples f(x_k) to x = 0.
cplx extrapolate_to_zero(const std::vector<double>& x, std::vector<cplx> f) {
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      f[i] = (x[i + m] * f[i] - x[i] * f[i + 1]) / (x[i + m] - x[i]);
    }
  }
  return f[0];
}

// Weyl character formula, no singularity handling. Exponents are shifted by
// their maximal real part before summation to avoid overflow.
cplx weyl_ratio(const GroupSpec& g, const Vec& lambda_plus_rho, const Vec& h, cplx z,
                double log_scale) {
  const auto& W = g.weyl_group();
  const auto& sgn = g.weyl_signs();
  const int r = g.rank();
  std::vector<cplx> num(W.size()), den(W.size());
  double mn = -1e300, md = -1e300;
  for (std::size_t k = 0; k < W.size(); ++k) {
    // (w v)(h) = v(w^T h).
    double a = 0.0, b = 0.0;
    for (int i = 0; i < r; ++i) {
      double wh = 0.0;
      for (int j = 0; j < r; ++j) wh += W[k](j, i) * h(j);
      a += lambda_plus_rho(i) * wh;
      b += g.rho()(i) * wh;
    }
    num[k] = kI * z * a;
    den[k] = kI * z * b;
    mn = std::max(mn, num[k].real());
    md = std::max(md, den[k].real());
  }
  cplx sn = 0.0, sd = 0.0;
  for (std::size_t k = 0; k < W.size(); ++k) {
    sn += double(sgn[k]) * std::exp(num[k] - mn);
    sd += double(sgn[k]) * std::exp(den[k] - md);
  }
  return std::exp(mn - md - log_scale) * sn / sd;
}

}  // namespace

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Torus: return "torus";
    case GroupKind::SU2: return "su2";
    case GroupKind::SU3: return "su3";
  }
  return "?";
}

std::string to_string(Normalization norm) {
  switch (norm) {
    case Normalization::UnitVolume: return "unit-volume";
    case Normalization::Reference: return "reference";
    case Normalization::Custom: return "custom";
  }
  return "?";
}

GroupSpec::GroupSpec(GroupKind kind, int torus_rank, double scale, Normalization norm)
    : kind_(kind), normalization_(norm), scale_(scale) {
  if (!(scale > 0.0)) throw DomainError("inner-product scale must be positive");
  const double inv = 1.0 / std::sqrt(scale);
  switch (kind) {
    case GroupKind::Torus: {
      if (torus_rank < 1) throw DomainError("torus rank must be >= 1");
      rank_ = dim_ = matrix_size_ = torus_rank;
      for (int k = 0; k < torus_rank; ++k) {
        CMat X = CMat::Zero(torus_rank, torus_rank);
        X(k, k) = kI * inv;
        basis_.push_back(X);
        cartan_indices_.push_back(k);
      }
      break;
    }
    case GroupKind::SU2: {
      rank_ = 1;
      dim_ = 3;
      matrix_size_ = 2;
      for (const CMat& s : pauli()) basis_.push_back(kI * s * (inv / std::sqrt(2.0)));
      cartan_indices_ = {2};
      break;
    }
    case GroupKind::SU3: {
      rank_ = 2;
      dim_ = 8;
      matrix_size_ = 3;
      for (const CMat& l : gell_mann()) basis_.push_back(kI * l * (inv / std::sqrt(2.0)));
      cartan_indices_ = {2, 7};
      break;
    }
  }

  for (int k = 0; k < matrix_size_; ++k) {
    Vec e(rank_);
    for (int c = 0; c < rank_; ++c) e(c) = basis_[cartan_indices_[c]](k, k).imag();
    eps_.push_back(e);
  }

  rho_ = Vec::Zero(rank_);
  if (kind != GroupKind::Torus) {
    const int N = matrix_size_;
    for (int i = 0; i + 1 < N; ++i) simple_roots_.push_back(eps_[i] - eps_[i + 1]);
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) {
        positive_roots_.push_back(eps_[i] - eps_[j]);
        std::vector<int> c(N - 1, 0);
        for (int k = i; k < j; ++k) c[k] = 1;
        root_coefficients_.push_back(c);
        rho_ += 0.5 * (eps_[i] - eps_[j]);
      }
    }
  }

  // Weyl group: closure under simple reflections.
  weyl_.push_back(Mat::Identity(rank_, rank_));
  for (std::size_t head = 0; head < weyl_.size(); ++head) {
    for (const Vec& a : simple_roots_) {
      const Mat refl = Mat::Identity(rank_, rank_) - 2.0 * a * a.transpose() / a.squaredNorm();
      const Mat cand = refl * weyl_[head];
      const bool seen = std::any_of(weyl_.begin(), weyl_.end(),
                                    [&](const Mat& m) { return (m - cand).norm() < 1e-9; });
      if (!seen) weyl_.push_back(cand);
    }
  }
  for (const Mat& w : weyl_) weyl_sign_.push_back(w.determinant() > 0 ? 1 : -1);

  // Structure constants: (ad_{X_a})_{cb} = <[X_a, X_b], X_c>.
  ad_basis_.assign(dim_, Mat::Zero(dim_, dim_));
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      const CMat comm = basis_[a] * basis_[b] - basis_[b] * basis_[a];
      for (int c = 0; c < dim_; ++c) ad_basis_[a](c, b) = inner(comm, basis_[c]);
    }
}

GroupSpec GroupSpec::torus(int n, Normalization norm) { return make(GroupKind::Torus, norm, n); }
GroupSpec GroupSpec::su2(Normalization norm) { return make(GroupKind::SU2, norm); }
GroupSpec GroupSpec::su3(Normalization norm) { return make(GroupKind::SU3, norm); }

GroupSpec GroupSpec::make(GroupKind kind, Normalization norm, int torus_rank) {
  if (norm == Normalization::Custom)
    throw DomainError("custom normalization requires an explicit scale");
  const double scale =
      norm == Normalization::UnitVolume ? calibrate_scale(kind, torus_rank) : 1.0;
  return GroupSpec(kind, torus_rank, scale, norm);
}

GroupSpec GroupSpec::with_scale(GroupKind kind, double scale, int torus_rank) {
  return GroupSpec(kind, torus_rank, scale, Normalization::Custom);
}

std::string GroupSpec::name() const {
  switch (kind_) {
    case GroupKind::Torus: return rank_ == 1 ? "U(1)" : "U(1)^" + std::to_string(rank_);
    case GroupKind::SU2: return "SU(2)";
    case GroupKind::SU3: return "SU(3)";
  }
  return "?";
}

int GroupSpec::label_size() const {
  switch (kind_) {
    case GroupKind::Torus: return rank_;
    case GroupKind::SU2: return 1;
    case GroupKind::SU3: return 2;
  }
  return 0;
}

CMat GroupSpec::algebra_element(const Vec& y) const {
  if (y.size() != dim_) throw DomainError("algebra coordinates have wrong dimension");
  CMat Y = CMat::Zero(matrix_size_, matrix_size_);
  for (int a = 0; a < dim_; ++a) Y += y(a) * basis_[a];
  return Y;
}

Vec GroupSpec::cartan_to_algebra(const Vec& h) const {
  if (h.size() != rank_) throw DomainError("Cartan coordinates have wrong dimension");
  Vec y = Vec::Zero(dim_);
  for (int c = 0; c < rank_; ++c) y(cartan_indices_[c]) = h(c);
  return y;
}

Vec GroupSpec::algebra_coordinates(const CMat& Y) const {
  Vec y(dim_);
  for (int a = 0; a < dim_; ++a) y(a) = inner(Y, basis_[a]);
  return y;
}

double GroupSpec::inner(const CMat& X, const CMat& Y) const {
  return -scale_ * X.cwiseProduct(Y.transpose()).sum().real();
}

std::string GroupSpec::to_key_value() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind = " << to_string(kind_) << "\n";
  if (kind_ == GroupKind::Torus) os << "rank = " << rank_ << "\n";
  os << "normalization = " << to_string(normalization_) << "\n";
  os << "scale = " << scale_ << "\n";
  return os.str();
}

GroupSpec GroupSpec::from_key_value(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  if (!kv.count("kind")) throw DomainError("group spec lacks 'kind'");
  GroupKind kind;
  const std::string k = kv["kind"];
  if (k == "torus") kind = GroupKind::Torus;
  else if (k == "su2") kind = GroupKind::SU2;
  else if (k == "su3") kind = GroupKind::SU3;
  else throw DomainError("unknown group kind '" + k + "'");
  const int rank = kv.count("rank") ? std::stoi(kv["rank"]) : 1;
  const std::string norm = kv.count("normalization") ? kv["normalization"] : "unit-volume";
  if (norm == "unit-volume") return make(kind, Normalization::UnitVolume, rank);
  if (norm == "reference") return make(kind, Normalization::Reference, rank);
  if (norm == "custom") {
    if (!kv.count("scale")) throw DomainError("custom normalization needs 'scale'");
    return with_scale(kind, std::stod(kv["scale"]), rank);
  }
  throw DomainError("unknown normalization '" + norm + "'");
}

bool GroupSpec::same_as(const GroupSpec& o) const {
  return kind_ == o.kind_ && rank_ == o.rank_ &&
         std::abs(scale_ - o.scale_) <= 1e-14 * scale_;
}

// ---------------------------------------------------------------------------

std::string Irrep::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < label.size(); ++i) os << (i ? "," : "") << label[i];
  os << ")";
  return os.str();
}

Vec highest_weight(const GroupSpec& group, const std::vector<int>& label) {
  if (static_cast<int>(label.size()) != group.label_size())
    throw DomainError("irrep label has wrong length");
  const auto& eps = group.diagonal_weights();
  Vec w = Vec::Zero(group.rank());
  switch (group.kind()) {
    case GroupKind::Torus:
      for (int i = 0; i < group.rank(); ++i) w += label[i] * eps[i];
      break;
    case GroupKind::SU2:
      if (label[0] < 0) throw DomainError("negative spin label");
      w = label[0] * eps[0];
      break;
    case GroupKind::SU3:
      if (label[0] < 0 || label[1] < 0) throw DomainError("negative SU(3) label");
      w = (label[0] + label[1]) * eps[0] + label[1] * eps[1];
      break;
  }
  return w;
}

Irrep make_irrep(const GroupSpec& group, const std::vector<int>& label) {
  Irrep r;
  r.label = label;
  r.highest_weight = highest_weight(group, label);
  r.dim = dim_irrep(group, r.highest_weight);
  r.casimir = casimir(group, r.highest_weight);
  switch (group.kind()) {
    case GroupKind::Torus:
      for (int k : label) r.boxes += std::abs(k);
      break;
    case GroupKind::SU2: r.boxes = label[0]; break;
    case GroupKind::SU3: r.boxes = label[0] + 2 * label[1]; break;
  }
  return r;
}

long dim_irrep(const GroupSpec& group, const Vec& weight) {
  if (group.is_torus()) {
    check_torus_weight(group, weight);
    return 1;
  }
  const std::vector<long> a = dynkin_labels(group, weight);
  // Every supported non-abelian group is simply laced, so
  // <lambda+rho, alpha>/<rho, alpha> = sum c_i (a_i + 1) / sum c_i.
  long num = 1, den = 1;
  for (const auto& c : group.root_coefficients_) {
    long n = 0, d = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      n += c[i] * (a[i] + 1);
      d += c[i];
    }
    num *= n;
    den *= d;
    const long g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  if (den != 1) throw std::logic_error("Weyl dimension formula produced a non-integer");
  return num;
}

double casimir(const GroupSpec& group, const Vec& weight) {
  if (group.is_torus()) check_torus_weight(group, weight);
  else dynkin_labels(group, weight);
  return weight.dot(weight + 2.0 * group.rho());
}

std::vector<Irrep> enumerate_irreps(const GroupSpec& group, double cutoff) {
  if (!(cutoff >= 0.0)) throw DomainError("casimir cutoff must be >= 0");
  const double lim = cutoff * (1.0 + 1e-12) + 1e-300;
  std::vector<Irrep> out;
  switch (group.kind()) {
    case GroupKind::Torus: {
      const int n = group.rank();
      const int kmax = static_cast<int>(std::floor(std::sqrt(cutoff * group.scale()) + 1e-9));
      std::vector<int> k(n, -kmax);
      while (true) {
        const Irrep r = make_irrep(group, k);
        if (r.casimir <= lim) out.push_back(r);
        int i = 0;
        while (i < n && ++k[i] > kmax) k[i++] = -kmax;
        if (i == n) break;
      }
      break;
    }
    case GroupKind::SU2:
      for (int j2 = 0;; ++j2) {
        const Irrep r = make_irrep(group, {j2});
        if (r.casimir > lim) break;
        out.push_back(r);
      }
      break;
    case GroupKind::SU3:
      for (int p = 0; make_irrep(group, {p, 0}).casimir <= lim; ++p)
        for (int q = 0;; ++q) {
          const Irrep r = make_irrep(group, {p, q});
          if (r.casimir > lim) break;
          out.push_back(r);
        }
      break;
  }
  std::sort(out.begin(), out.end(), [](const Irrep& a, const Irrep& b) {
    const double tol = 1e-12 * std::max({1.0, a.casimir, b.casimir});
    if (std::abs(a.casimir - b.casimir) > tol) return a.casimir < b.casimir;
    return a.label < b.label;
  });
  return out;
}

cplx character(const GroupSpec& group, const Irrep& irrep, const CartanArgument& arg,
               double log_scale) {
  if (arg.h.size() != group.rank()) throw DomainError("Cartan argument has wrong dimension");
  if (group.is_torus()) return std::exp(kI * arg.z * irrep.highest_weight.dot(arg.h) - log_scale);
  if (arg.z == cplx(0.0) || arg.h.squaredNorm() == 0.0)
    return static_cast<double>(irrep.dim) * std::exp(-log_scale);

  const Vec lr = irrep.highest_weight + group.rho();
  // The denominator vanishes when z * alpha(h) hits 2 pi Z for some root.
  bool singular = false;
  for (const Vec& a : group.positive_roots()) {
    const cplx w = arg.z * a.dot(arg.h);
    const double m = std::round(w.real() / (2.0 * kPi));
    if (std::abs(w - 2.0 * kPi * m) < 1e-5) singular = true;
  }
  if (!singular) return weyl_ratio(group, lr, arg.h, arg.z, log_scale);

  const Vec dir = group.rho() / group.rho().norm();
  double min_pair = 1e300;
  for (const Vec& a : group.positive_roots()) min_pair = std::min(min_pair, a.dot(dir));
  const double delta0 = 2e-2 / (std::abs(arg.z) * min_pair);
  std::vector<double> xs;
  std::vector<cplx> fs;
  for (int k = 0; k < 6; ++k) {
    const double d = delta0 * std::ldexp(1.0, -k);
    xs.push_back(d);
    fs.push_back(weyl_ratio(group, lr, arg.h + d * dir, arg.z, log_scale));
  }
  return extrapolate_to_zero(xs, fs);
}

cplx character_of_element(const GroupSpec& group, const Irrep& irrep, const CMat& g) {
  if (g.rows() != group.matrix_size() || g.cols() != group.matrix_size())
    throw DomainError("group element has wrong size");
  if (group.is_torus()) {
    cplx v = 1.0;
    for (int k = 0; k < group.rank(); ++k) v *= std::pow(g(k, k), irrep.label[k]);
    return v;
  }
  Eigen::ComplexEigenSolver<CMat> es(g, false);
  const CVec x = es.eigenvalues();
  if (group.kind() == GroupKind::SU2) {
    cplx acc = 0.0;
    for (int k = 0; k <= irrep.label[0]; ++k)
      acc += std::pow(x(0), irrep.label[0] - k) * std::pow(x(1), k);
    return acc;
  }
  // Schur polynomial as a sum over Gelfand-Tsetlin patterns (l1, l2, 0).
  const int l1 = irrep.label[0] + irrep.label[1];
  const int l2 = irrep.label[1];
  std::vector<cplx> p0(l1 + 1), p1(l1 + 1), p2(l1 + l2 + 1);
  p0[0] = p1[0] = p2[0] = 1.0;
  for (int k = 1; k <= l1; ++k) {
    p0[k] = p0[k - 1] * x(0);
    p1[k] = p1[k - 1] * x(1);
  }
  for (int k = 1; k <= l1 + l2; ++k) p2[k] = p2[k - 1] * x(2);
  cplx acc = 0.0;
  for (int a = l2; a <= l1; ++a)
    for (int b = 0; b <= l2; ++b) {
      cplx row = 0.0;
      for (int c = b; c <= a; ++c) row += p0[c] * p1[a + b - c];
      acc += row * p2[l1 + l2 - a - b];
    }
  return acc;
}

CMat exp_algebra(const GroupSpec& group, const Vec& y, cplx z) {
  if (group.is_torus()) {
    CMat g = CMat::Zero(group.rank(), group.rank());
    const double inv = 1.0 / std::sqrt(group.scale());
    for (int k = 0; k < group.rank(); ++k) g(k, k) = std::exp(kI * z * y(k) * inv);
    return g;
  }
  const CMat Y = group.algebra_element(y);
  const CMat herm = -kI * Y;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (herm + herm.adjoint()));
  const CVec d = (kI * z * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

CMat wigner_matrix(int j2, const CMat& g) {
  if (j2 < 0) throw DomainError("negative spin label");
  if (g.rows() != 2 || g.cols() != 2) throw DomainError("wigner_matrix expects a 2x2 matrix");
  const double tol = 1e-12 * std::max(1.0, 0.5 * g.squaredNorm());
  if (std::abs(g.determinant() - 1.0) > tol) throw DomainError("matrix is not unimodular");

  std::vector<double> fact(j2 + 1, 1.0);
  for (int k = 1; k <= j2; ++k) fact[k] = fact[k - 1] * k;
  auto binom = [&](int n, int k) { return fact[n] / (fact[k] * fact[n - k]); };
  auto ipow = [](cplx x, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  };

  const int d = j2 + 1;
  CMat D = CMat::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const int a = j2 - col, b = col;
    for (int row = 0; row < d; ++row) {
      const int ap = j2 - row, bp = row;
      cplx acc = 0.0;
      for (int k = std::max(0, ap - b); k <= std::min(a, ap); ++k) {
        acc += binom(a, k) * binom(b, ap - k) * ipow(g(0, 0), k) * ipow(g(1, 0), a - k) *
               ipow(g(0, 1), ap - k) * ipow(g(1, 1), b - ap + k);
      }
      D(row, col) = acc * std::sqrt(fact[ap] * fact[bp] / (fact[a] * fact[b]));
    }
  }
  return D;
}

CMat representation_matrix(const GroupSpec& group, const Irrep& irrep, const CMat& g) {
  switch (group.kind()) {
    case GroupKind::Torus: return CMat::Constant(1, 1, character_of_element(group, irrep, g));
    case GroupKind::SU2: return wigner_matrix(irrep.label[0], g);
    case GroupKind::SU3: break;
  }
  throw DomainError("matrix elements are only available for tori and SU(2)");
}

Mat ad_matrix(const GroupSpec& group, const Vec& y) {
  if (y.size() != group.dim()) throw DomainError("algebra coordinates have wrong dimension");
  Mat m = Mat::Zero(group.dim(), group.dim());
  for (int a = 0; a < group.dim(); ++a) m += y(a) * group.ad_basis()[a];
  return m;
}

double reference_volume(GroupKind kind, int torus_rank) {
  switch (kind) {
    case GroupKind::Torus: return std::pow(2.0 * kPi, torus_rank);
    // vol SU(N) for -tr XY: sqrt(N) (2 pi)^{(N^2+N-2)/2} / prod_{k<N} k!
    case GroupKind::SU2: return std::sqrt(2.0) * std::pow(2.0 * kPi, 2);
    case GroupKind::SU3: return std::sqrt(3.0) * std::pow(2.0 * kPi, 5) / 2.0;
  }
  return 0.0;
}

double calibrate_scale(GroupKind kind, int torus_rank) {
  // Volume scales as lambda^{n/2}.
  switch (kind) {
    case GroupKind::Torus: return 1.0 / (4.0 * kPi * kPi);
    case GroupKind::SU2: return std::pow(reference_volume(kind), -2.0 / 3.0);
    case GroupKind::SU3: return std::pow(reference_volume(kind), -2.0 / 8.0);
  }
  (void)torus_rank;
  return 1.0;
}

}  // namespace bks
