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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bks/liegroup.hpp"
#include "bks/pairing.hpp"

namespace bks {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Verification run settings. Text form (all keys optional):
///
///   [group]      kind = su2 | su3 | torus, normalization = unit-volume | reference, rank = 1
///   [run]        hbar0 = 1, seed = 1, checks = all, threads = 1
///   [grid]       s = 0.25, 1, 2, 3   sp = 0.25, 1, 2, 3   continuity = 0.004, 0.002, 0.001
///   [band]       boxes = 4, pairs = 50, samples = 100
///   [quadrature] gl_order = 10, panels_per_sigma = 1, extent_sigmas = 10, gh_nodes = 48,
///                mc_samples = 1000000, group_resolution = 6
///   [tolerance]  deterministic = 1e-6, monte_carlo = 1e-4, algebraic = 1e-14, closed_form = 1e-10,
///                wedge = 1e-8, flatness = 1e-6, cst_quadrature = 1e-4, delta_u1 = 1e-8,
///                delta_su2 = 1e-3, prequantum_margin = 1e-3, scale = 1
///   [output]     dir = ., format = json
struct RunConfig {
  GroupKind kind = GroupKind::SU2;
  Normalization normalization = Normalization::UnitVolume;
  int torus_rank = 1;

  double hbar0 = 1.0;
  std::uint64_t seed = 1;
  /// Identity names, or {"all"}.
  std::vector<std::string> checks = {"all"};
  int threads = 1;

  std::vector<double> s_grid = {0.25, 1.0, 2.0, 3.0};
  std::vector<double> sp_grid = {0.25, 1.0, 2.0, 3.0};
  std::vector<double> continuity_grid = {4e-3, 2e-3, 1e-3};

  /// Band limit as a maximal number of boxes (2j for SU(2), |k|_1 for tori, p + 2q for SU(3)).
  int boxes = 4;
  int pairs = 50;
  int samples = 100;

  int gl_order = 10;
  double panels_per_sigma = 1.0;
  double extent_sigmas = 10.0;
  int gh_nodes = 48;
  long mc_samples = 1000000;
  int group_resolution = 6;

  double tol_deterministic = 1e-6;
  double tol_monte_carlo = 1e-4;
  double tol_algebraic = 1e-14;
  double tol_closed_form = 1e-10;
  double tol_wedge = 1e-8;
  double tol_flatness = 1e-6;
  double tol_cst_quadrature = 1e-4;
  double tol_delta_u1 = 1e-8;
  double tol_delta_su2 = 1e-3;
  double prequantum_margin = 1e-3;
  double tolerance_scale = 1.0;

  std::string out_dir = ".";
  std::string format = "json";

  GroupSpec group() const;
  AlgebraQuadrature cartan_rule() const;
  AlgebraQuadrature hermite_rule() const;
  AlgebraQuadrature monte_carlo_rule(std::uint64_t seed_offset = 0) const;
  bool wants(const std::string& check) const;

  /// Canonical key/value listing ("section.key" -> text), stable order.
  std::vector<std::pair<std::string, std::string>> echo() const;
  std::string to_text() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Applies one "section.key = value" setting; throws ConfigError on unknown keys.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Names accepted by "checks".
const std::vector<std::string>& identity_names();

struct SuiteReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<PairingReport> reports;
  int passed = 0;
  int failed = 0;
  double wall_clock_seconds = 0.0;
  std::string version;

  std::vector<std::string> failures() const;
};

/// Runs the selected identity checks. Per-job exceptions become failed
/// reports; the suite itself does not abort.
SuiteReport run_suite(const RunConfig& cfg);
/// The same checks restricted to one identity name.
std::vector<PairingReport> run_identity(const RunConfig& cfg, const std::string& name);

/// JSON text of the report; wall-clock time only when requested.
std::string to_json(const SuiteReport& report, bool include_wall_clock = false);
SuiteReport suite_from_json(const std::string& text);
std::string to_csv(const std::vector<PairingReport>& reports);

struct FactorRow {
  std::string irrep;
  double s = 0.0;
  double sp = 0.0;
  double numeric = 0.0;
  double closed_form = 0.0;
  /// Logs carry rows whose factor leaves the double range.
  double log_numeric = 0.0;
  double log_closed_form = 0.0;
  double residual = 0.0;
};
std::vector<FactorRow> pairing_factor_table(const RunConfig& cfg);
std::string factor_table_csv(const std::vector<FactorRow>& rows);
std::string factor_table_json(const std::vector<FactorRow>& rows);

/// Writes <dir>/<stem>.<format>; throws std::runtime_error on IO failure.
std::string emit_table(const SuiteReport& report, const std::string& dir, const std::string& stem,
                       const std::string& format, bool include_wall_clock = false);

/// Worker count: BKS_VERIFIER_THREADS when set, otherwise cfg.threads.
int thread_count(const RunConfig& cfg);

std::string version_string();

}  // namespace bks
