// SPDX-License-Identifier: Apache-2.0

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netmimo/analysis.hpp"
#include "netmimo/channel.hpp"
#include "netmimo/codebook.hpp"
#include "netmimo/config.hpp"
#include "netmimo/errors.hpp"
#include "netmimo/experiment.hpp"
#include "netmimo/feedback.hpp"
#include "netmimo/metrics.hpp"
#include "netmimo/verify.hpp"

using namespace netmimo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

// Config file seed < NETMIMO_SEED < --seed.
std::uint64_t resolve_seed(std::uint64_t from_config, const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NETMIMO_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0') {
      throw ConfigError(std::string("NETMIMO_SEED is not an unsigned integer: '") + env + "'");
    }
    return v;
  }
  return from_config;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

int run_simulate(const std::string& config, const std::optional<std::uint64_t>& seed,
                 std::string out, unsigned workers) {
  ExperimentSpec spec = load_spec(config);
  spec.base.seed = resolve_seed(spec.base.seed, seed);
  if (out.empty()) out = spec.output_path;
  const ExperimentResult result = run_experiment(spec, {workers});
  if (out.empty() || out == "-") {
    std::cout << to_csv(result);
  } else {
    emit_csv(result, out);
  }
  if (result.infeasible > 0) {
    std::cerr << "note: " << result.infeasible << " trial(s) skipped with infeasible BD\n";
  }
  return kExitOk;
}

int run_verify(const std::string& suite, const std::optional<std::uint64_t>& seed,
               const std::string& out) {
  const auto results = run_verify_suite(suite, resolve_seed(1, seed));
  bool ok = true;
  for (const auto& r : results) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " (" << r.detail
              << ")\n";
    ok = ok && r.pass;
  }
  write_text(out, verify_csv(results));
  return ok ? kExitOk : kExitFail;
}

int run_distortion(const std::vector<int>& budgets, int n_t, int n_bs, int n_r,
                   std::size_t sources, const std::optional<std::uint64_t>& seed,
                   const std::string& out) {
  const RngStream root(resolve_seed(1, seed), 0xd15);
  std::string text = "bits,mc_mean,mc_ci,closed_form,appendix_form\n";
  for (int b : budgets) {
    SystemConfig cfg;
    cfg.n_t = n_t;
    cfg.n_bs = n_bs;
    cfg.n_r = n_r;
    cfg.bits_per_cell = split_bits(b, n_bs);
    cfg.delta.assign(static_cast<std::size_t>(n_bs), 0.9);
    cfg.validate();
    std::vector<double> d;
    for (std::size_t s = 0; s < sources; ++s) {
      const RngStream src = root.split(static_cast<std::uint64_t>(b)).split(s);
      RngStream book_rng = src.split(0);
      RngStream v_rng = src.split(1);
      const auto books = build_percell_codebooks(cfg, book_rng);
      const ComplexMatrix v = haar_orthonormal(cfg.aggregate_antennas(), n_r, v_rng);
      d.push_back(search_exhaustive(v, books).distortion);
    }
    const MeanCi m = mean_ci(d);
    const Lemma2Value l = lemma2_distortion(b, n_t, n_bs, n_r);
    char line[256];
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g,%.9g,%.9g\n", b, m.mean, m.ci, l.simplified,
                  l.appendix);
    text += line;
  }
  write_text(out, text);
  return kExitOk;
}

int run_sweep_delta(const std::string& config, std::vector<double> deltas,
                    const std::optional<std::uint64_t>& seed, const std::string& out,
                    unsigned workers) {
  ExperimentSpec spec = load_spec(config);
  spec.base.seed = resolve_seed(spec.base.seed, seed);
  if (!deltas.empty()) spec.delta_grid = std::move(deltas);
  if (spec.delta_grid.empty()) spec.delta_grid = {0.0, 0.8, 0.9, 1.0};
  spec.schemes = {"percell-exhaustive", "percell-isa"};
  spec.validate();
  const ExperimentResult result = run_experiment(spec, {workers});
  if (out.empty() && !spec.output_path.empty()) {
    emit_csv(result, spec.output_path);
  } else if (out.empty() || out == "-") {
    std::cout << to_csv(result);
  } else {
    emit_csv(result, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-cell product codebook limited feedback for network MIMO"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;

  auto* sim = app.add_subcommand("simulate", "Run an experiment described by a JSON config");
  sim->add_option("--config", config, "Experiment spec (JSON)")->required();
  sim->add_option("--seed", seed, "Master seed; overrides NETMIMO_SEED and the config");
  sim->add_option("--out", out, "CSV output path (default: config output_path, else stdout)");
  sim->add_option("--workers", workers, "Concurrent trial workers")
      ->check(CLI::PositiveNumber);

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "Run verification suites, emit a pass/fail CSV");
  ver->add_option("--suite", suite, "distortion | concentration | isa-equivalence | scaling | bd | all")
      ->check(CLI::IsMember({"distortion", "concentration", "isa-equivalence", "scaling", "bd",
                             "all"}));
  ver->add_option("--seed", seed, "Master seed; overrides NETMIMO_SEED");
  ver->add_option("--out", out, "CSV output path (default: stdout)");

  std::vector<int> budgets{8, 12, 16, 20};
  int n_t = 4;
  int n_bs = 3;
  int n_r = 2;
  std::size_t sources = 2000;
  auto* dist = app.add_subcommand(
      "distortion", "Monte Carlo quantization distortion against the closed forms");
  dist->add_option("--bits", budgets, "Total bit budgets per user");
  dist->add_option("--n-t", n_t, "Antennas per BS");
  dist->add_option("--n-bs", n_bs, "Cooperating BSs");
  dist->add_option("--n-r", n_r, "Antennas per MS");
  dist->add_option("--sources", sources, "Sources per budget, each with fresh codebooks");
  dist->add_option("--seed", seed, "Master seed; overrides NETMIMO_SEED");
  dist->add_option("--out", out, "CSV output path (default: stdout)");

  std::vector<double> deltas;
  auto* sweep = app.add_subcommand("sweep-delta",
                                   "Rate and relative complexity of ISA over sub-codebook radii");
  sweep->add_option("--config", config, "Experiment spec (JSON)")->required();
  sweep->add_option("--deltas", deltas, "Radii (default: config delta_grid, else 0 0.8 0.9 1.0)");
  sweep->add_option("--seed", seed, "Master seed; overrides NETMIMO_SEED and the config");
  sweep->add_option("--out", out, "CSV output path");
  sweep->add_option("--workers", workers, "Concurrent trial workers")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return run_simulate(config, seed, out, workers);
    if (*ver) return run_verify(suite, seed, out);
    if (*dist) return run_distortion(budgets, n_t, n_bs, n_r, sources, seed, out);
    if (*sweep) return run_sweep_delta(config, deltas, seed, out, workers);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitFail;
}
