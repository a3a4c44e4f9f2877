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


// bks_verifier: batch runner for the identity suites.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bks/pairing.hpp"
#include "bks/verifier.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string group;
  std::optional<double> hbar0;
  std::optional<long> seed;
  std::optional<double> tolerance_scale;
  std::string out;
  std::string format;
  std::string golden;
  bool regenerate = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "plain-text config file (key = value, [sections])");
  app->add_option("--group", o.group, "su2 | su3 | torus | u1");
  app->add_option("--hbar0", o.hbar0, "base Planck constant");
  app->add_option("--seed", o.seed, "seed for Monte Carlo jobs");
  app->add_option("--tolerance-scale", o.tolerance_scale, "multiplier on every tolerance");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

bks::RunConfig build_config(const Overrides& o) {
  bks::RunConfig cfg = o.config.empty() ? bks::RunConfig{} : bks::load_config(o.config);
  if (o.group == "u1") {
    bks::apply_setting(cfg, "group.kind", "torus");
    cfg.torus_rank = 1;
  } else if (!o.group.empty()) {
    bks::apply_setting(cfg, "group.kind", o.group);
  }
  if (o.hbar0) bks::apply_setting(cfg, "run.hbar0", std::to_string(*o.hbar0));
  if (o.seed) cfg.seed = static_cast<std::uint64_t>(*o.seed);
  if (o.tolerance_scale) cfg.tolerance_scale = *o.tolerance_scale;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.format.empty()) cfg.format = o.format;
  return cfg;
}

void write(const bks::RunConfig& cfg, const std::string& stem, const std::string& body) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/" + stem + "." + cfg.format;
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  std::fputs(body.c_str(), f);
  std::fclose(f);
  std::cout << "wrote " << path << "\n";
}

int verify(const Overrides& o, const std::string& identity) {
  bks::RunConfig cfg = build_config(o);
  if (identity != "all") bks::apply_setting(cfg, "run.checks", identity);
  const bks::SuiteReport rep = bks::run_suite(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = bks::emit_table(rep, cfg.out_dir, "report-" + identity, cfg.format, true);
  std::printf("%s: %d passed, %d failed (%.1f s)\nwrote %s\n", cfg.group().name().c_str(), rep.passed,
              rep.failed, rep.wall_clock_seconds, path.c_str());
  for (const auto& f : rep.failures()) std::printf("FAIL %s\n", f.c_str());
  if (!o.golden.empty()) {
    const std::string got = bks::to_json(rep);
    if (o.regenerate) {
      std::ofstream(o.golden, std::ios::binary) << got;
      std::printf("regenerated %s\n", o.golden.c_str());
    } else {
      std::ifstream in(o.golden, std::ios::binary);
      std::stringstream want;
      want << in.rdbuf();
      if (want.str() != got) {
        std::printf("golden mismatch: %s\n", o.golden.c_str());
        return std::min(rep.failed + 1, 125);
      }
      std::printf("golden match: %s\n", o.golden.c_str());
    }
  }
  return std::min(rep.failed, 125);
}

int table(const Overrides& o) {
  const bks::RunConfig cfg = build_config(o);
  const auto rows = bks::pairing_factor_table(cfg);
  write(cfg, "pairing-factors",
        cfg.format == "csv" ? bks::factor_table_csv(rows) : bks::factor_table_json(rows));
  return 0;
}

int calibrate(const Overrides& o) {
  const bks::RunConfig cfg = build_config(o);
  const bks::GroupSpec g = cfg.group();
  std::printf("group            %s\n", g.name().c_str());
  std::printf("normalization    %s\n", bks::to_string(cfg.normalization).c_str());
  std::printf("dim              %d\n", g.dim());
  std::printf("lambda           %.17g\n", g.scale());
  std::printf("unit-volume      %.17g\n", bks::calibrate_scale(g.kind(), g.rank()));
  std::printf("ref volume       %.17g\n", bks::reference_volume(g.kind(), g.rank()));
  std::printf("|rho|^2          %.17g\n", g.rho_norm_sq());
  std::printf("a_1 (hbar0)      %.17g\n", bks::a_s(g, cfg.hbar0, 1.0));
  return 0;
}

// Error of the character-Gaussian integral against its closed form as each backend is refined.
int convergence(const Overrides& o) {
  const bks::RunConfig cfg = build_config(o);
  const bks::GroupSpec g = cfg.group();
  std::vector<int> lab(g.kind() == bks::GroupKind::SU3 ? 2 : g.rank(), 0);
  lab[0] = 1;
  const bks::Irrep r = bks::make_irrep(g, lab);
  const double t = 1.0;
  const double closed = bks::char_gaussian_log_closed(g, cfg.hbar0, t, r);
  std::string csv = "backend,parameter,value,error_estimate,actual_error\n";
  auto row = [&](const std::string& b, double p, const bks::ScaledEstimate& e) {
    const double ref = std::exp(closed - e.log_scale);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n", b.c_str(), p, e.value,
                  e.error / ref, std::abs(e.value - ref) / ref);
    csv += buf;
  };
  for (int n : {2, 4, 6, 8, 12, 16}) {
    auto q = cfg.cartan_rule();
    q.gl_order = n;
    row("cartan-reduced", n, bks::char_gaussian_scaled(g, cfg.hbar0, t, r, q));
  }
  for (long n = 1000; n <= cfg.mc_samples && n <= 256000; n *= 4) {
    auto q = cfg.monte_carlo_rule(0);
    q.samples = n;
    row("monte-carlo", double(n), bks::char_gaussian_scaled(g, cfg.hbar0, t, r, q));
  }
  std::cout << "irrep " << r.to_string() << ", t = 1\n";
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/convergence.csv";
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  std::fputs(csv.c_str(), f);
  std::fclose(f);
  std::cout << csv << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heat-kernel pairing identity verifier"};
  app.require_subcommand(1);
  Overrides o;

  std::string identity = "all";
  auto* v = app.add_subcommand("verify", "run identity checks and write a report");
  v->add_option("identity", identity, "identity name or 'all'");
  add_common(v, o);
  v->add_option("--golden", o.golden, "compare the JSON report byte-for-byte with this file");
  v->add_flag("--regenerate", o.regenerate, "rewrite the --golden file instead of comparing");

  std::string which;
  auto* t = app.add_subcommand("table", "write a coefficient table");
  t->add_option("name", which, "table name")->required()->check(CLI::IsMember({"pairing-factors"}));
  add_common(t, o);

  auto* c = app.add_subcommand("calibrate", "print the scale and constants of the selected group");
  add_common(c, o);

  auto* k = app.add_subcommand("convergence", "error versus refinement for each quadrature backend");
  add_common(k, o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*v) return verify(o, identity);
    if (*t) return table(o);
    if (*c) return calibrate(o);
    if (*k) return convergence(o);
  } catch (const bks::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 126;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 127;
  }
  return 0;
}
