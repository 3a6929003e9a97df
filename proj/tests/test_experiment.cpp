// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <gtest/gtest.h>

#include "netmimo/config.hpp"
#include "netmimo/errors.hpp"
#include "netmimo/experiment.hpp"

using namespace netmimo;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.name = "small";
  s.base.trials = 12;
  s.base.seed = 17;
  s.snr_grid_db = {0, 20};
  s.schemes = {"gcsi", "percell-exhaustive", "percell-isa", "jointcell"};
  return s;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

const std::string kRepoConfigs = NETMIMO_CONFIG_DIR;

ExperimentSpec repo_config(const std::string& file, int trials) {
  ExperimentSpec s = load_spec(kRepoConfigs + "/" + file);
  s.base.trials = trials;
  return s;
}

}  // namespace

TEST(Csv, EmptyResultIsHeaderOnly) {
  ExperimentResult r;
  EXPECT_EQ(to_csv(r), std::string(kCsvHeader) + "\n");
}

TEST(Csv, NineSignificantDigitsRoundTrip) {
  ExperimentResult r;
  ResultRow row;
  row.snr_db = 17.5;
  row.scheme = "percell-exhaustive";
  row.rate_mean = 1.0 / 3.0;
  row.rate_ci = 2.0 / 7.0e-5;
  row.distortion_mean = std::sqrt(2.0);
  row.rel_complexity = 1e-7 / 3.0;
  row.excluded = 3;
  row.bits = 12;
  r.rows.push_back(row);
  const auto cells = parse_csv(to_csv(r));
  ASSERT_EQ(cells.size(), 2U);
  ASSERT_EQ(cells[1].size(), 8U);
  EXPECT_EQ(cells[1][1], "percell-exhaustive");
  const double vals[] = {row.snr_db, 0, row.rate_mean, row.rate_ci, row.distortion_mean,
                         row.rel_complexity};
  for (int i : {0, 2, 3, 4, 5}) {
    const double back = std::stod(cells[1][i]);
    EXPECT_NEAR(back, vals[i], 5e-9 * std::abs(vals[i]));
  }
  EXPECT_EQ(cells[1][6], "3");
  EXPECT_EQ(cells[1][7], "12");
}

TEST(Csv, EmitFailsOnBadPath) {
  ExperimentResult r;
  EXPECT_THROW(emit_csv(r, "/nonexistent-dir/x/out.csv"), IoError);
}

TEST(Experiment, RowLayoutAndOrdering) {
  const ExperimentSpec s = small_spec();
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 8U);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    EXPECT_TRUE(std::tie(a.snr_db, a.scheme, a.bits) < std::tie(b.snr_db, b.scheme, b.bits));
  }
  EXPECT_EQ(r.realization_hashes.size(), 12U);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(std::isfinite(row.rate_mean));
    EXPECT_GE(row.rate_ci, 0.0);
    if (row.scheme == "gcsi") {
      EXPECT_EQ(row.loss_mean, 0.0);
      EXPECT_EQ(row.distortion_mean, 0.0);
      EXPECT_EQ(row.bits, 0);
    } else {
      EXPECT_EQ(row.bits, 12);
      EXPECT_GT(row.distortion_mean, 0.0);
    }
    if (row.scheme == "percell-exhaustive" || row.scheme == "jointcell") {
      EXPECT_DOUBLE_EQ(row.rel_complexity, 1.0);
    }
    if (row.scheme == "percell-isa") EXPECT_LT(row.rel_complexity, 1.0);
  }
}

TEST(Experiment, GcsiDominatesOnAverage) {
  ExperimentSpec s = small_spec();
  s.base.trials = 60;
  s.snr_grid_db = {20};
  const ExperimentResult r = run_experiment(s);
  double gcsi = 0.0;
  for (const auto& row : r.rows) {
    if (row.scheme == "gcsi") gcsi = row.rate_mean;
  }
  for (const auto& row : r.rows) {
    if (row.scheme == "gcsi") continue;
    EXPECT_LT(row.rate_mean, gcsi) << row.scheme;
    EXPECT_NEAR(row.loss_mean, gcsi - row.rate_mean, 1e-9) << row.scheme;
  }
}

TEST(Experiment, WorkerCountDoesNotChangeOutput) {
  const ExperimentSpec s = small_spec();
  RunOptions one;
  one.workers = 1;
  RunOptions three;
  three.workers = 3;
  const ExperimentResult a = run_experiment(s, one);
  const ExperimentResult b = run_experiment(s, three);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(a.realization_hashes, b.realization_hashes);
}

TEST(Experiment, SeedChangesRealizations) {
  ExperimentSpec s = small_spec();
  const ExperimentResult a = run_experiment(s);
  s.base.seed += 1;
  const ExperimentResult b = run_experiment(s);
  EXPECT_NE(a.realization_hashes, b.realization_hashes);
  EXPECT_NE(to_csv(a), to_csv(b));
}

TEST(Experiment, RealizationsIndependentOfSchemes) {
  ExperimentSpec s = small_spec();
  const ExperimentResult a = run_experiment(s);
  s.schemes = {"gcsi"};
  const ExperimentResult b = run_experiment(s);
  EXPECT_EQ(a.realization_hashes, b.realization_hashes);
}

TEST(Experiment, DistortionFallsWithBits) {
  ExperimentSpec s = small_spec();
  s.base.trials = 20;
  s.snr_grid_db = {10};
  s.schemes = {"percell-exhaustive"};
  s.bits_per_bs_grid = {1, 3, 5, 7};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 4U);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].bits, 3 * s.bits_per_bs_grid[i]);
    EXPECT_LT(r.rows[i].distortion_mean, r.rows[i - 1].distortion_mean);
  }
}

TEST(Experiment, IsaRadiusGridTags) {
  ExperimentSpec s = small_spec();
  s.snr_grid_db = {10};
  s.schemes = {"percell-exhaustive", "percell-isa"};
  s.delta_grid = {0.0, 0.9, std::sqrt(2.0)};
  const ExperimentResult r = run_experiment(s);
  std::map<std::string, ResultRow> by;
  for (const auto& row : r.rows) by[row.scheme] = row;
  ASSERT_EQ(by.size(), 4U);
  ASSERT_TRUE(by.count("percell-isa-0"));
  ASSERT_TRUE(by.count("percell-isa-0.9"));
  const auto& full = r.rows.back().scheme;
  EXPECT_EQ(full.rfind("percell-isa-1.414", 0), 0U);
  EXPECT_EQ(by[full].rate_mean, by["percell-exhaustive"].rate_mean);
  EXPECT_EQ(by[full].distortion_mean, by["percell-exhaustive"].distortion_mean);
  EXPECT_LT(by["percell-isa-0"].rel_complexity, by["percell-isa-0.9"].rel_complexity);
  EXPECT_DOUBLE_EQ(by["percell-isa-0"].rel_complexity, 1.0 / 4096.0);
}

TEST(Experiment, ScaledScheduleIsCappedAndMonotone) {
  ExperimentSpec s;
  s.base.n_t = 8;
  s.base.n_users = 12;
  s.bit_mode = BitMode::Corollary1Scaled;
  s.epsilon = 1.0;
  s.bits_cap = 24;
  const std::vector<int> capped = scaled_bit_schedule(s);
  ASSERT_EQ(capped.size(), s.snr_grid_db.size());
  for (int b : capped) EXPECT_EQ(b, 24);
  s.bits_cap = 72;
  const std::vector<int> wide = scaled_bit_schedule(s);
  for (std::size_t i = 0; i < wide.size(); ++i) {
    EXPECT_LE(wide[i], 72);
    EXPECT_EQ(wide[i] % 3, 0);
    if (i) EXPECT_GE(wide[i], wide[i - 1]);
  }
}

TEST(Experiment, ScaledModeAddsFixedCompanion) {
  ExperimentSpec s = small_spec();
  s.base.trials = 4;
  s.schemes = {"gcsi", "percell-exhaustive"};
  s.bit_mode = BitMode::Corollary1Scaled;
  s.bits_cap = 18;
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 6U);
  std::set<std::string> names;
  for (const auto& row : r.rows) {
    names.insert(row.scheme);
    if (row.scheme == "percell-exhaustive") EXPECT_EQ(row.bits, 18);
    if (row.scheme == "percell-exhaustive-fixed") EXPECT_EQ(row.bits, 12);
  }
  EXPECT_EQ(names.size(), 3U);
}

TEST(Experiment, GivensRowsUseTotalBits) {
  ExperimentSpec s = small_spec();
  s.base.trials = 4;
  s.snr_grid_db = {10};
  s.schemes = {"givens-4", "givens-8"};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 2U);
  EXPECT_EQ(r.rows[0].scheme, "givens-4");
  EXPECT_EQ(r.rows[0].bits, 12);
  EXPECT_EQ(r.rows[1].bits, 24);
}

TEST(Spec, ValidationErrors) {
  ExperimentSpec s = small_spec();
  s.schemes = {"percell-magic"};
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.snr_grid_db.clear();
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.delta_grid = {2.0};
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.bits_per_bs_grid = {6};  // 18 bits is too many for a joint codebook
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.bit_mode = BitMode::Corollary1Scaled;
  s.epsilon = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Config, ParsesFullSpec) {
  const ExperimentSpec s = parse_spec(R"({
    "name": "t",
    "base": {"n_t": 8, "n_bs": 3, "n_r": 2, "n_users": 12, "trials": 7, "seed": 9,
             "bits_per_cell": [2, 3, 3]},
    "snr_grid_db": [5, 10],
    "schemes": ["gcsi", "percell-exhaustive"],
    "bit_mode": {"mode": "corollary1-scaled", "epsilon": 0.5},
    "bits_cap": 21,
    "output_path": "x.csv"
  })");
  EXPECT_EQ(s.name, "t");
  EXPECT_EQ(s.base.n_t, 8);
  EXPECT_EQ(s.base.trials, 7);
  EXPECT_EQ(s.base.seed, 9U);
  EXPECT_EQ(s.base.bits_per_cell, (std::vector<int>{2, 3, 3}));
  EXPECT_EQ(s.base.delta, (std::vector<double>(3, 0.9)));
  EXPECT_EQ(s.bit_mode, BitMode::Corollary1Scaled);
  EXPECT_DOUBLE_EQ(s.epsilon, 0.5);
  EXPECT_EQ(s.bits_cap, 21);
  EXPECT_EQ(s.output_path, "x.csv");
}

TEST(Config, DefaultsFollowCellCount) {
  const ExperimentSpec s = parse_spec(R"({"base": {"n_bs": 2, "n_users": 4}, "bit_mode": "fixed"})");
  EXPECT_EQ(s.base.bits_per_cell, (std::vector<int>{4, 4}));
  EXPECT_EQ(s.base.delta.size(), 2U);
  EXPECT_EQ(s.bit_mode, BitMode::Fixed);
}

TEST(Config, RejectsUnknownAndMalformed) {
  EXPECT_THROW(parse_spec(R"({"nmae": "x"})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"base": {"n_tx": 4}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"bit_mode": {"mode": "fixed", "eps": 1}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"bit_mode": "scaled"})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"base": {"n_t": "four"}})"), ConfigError);
  EXPECT_THROW(parse_spec("{"), ConfigError);
  EXPECT_THROW(parse_spec("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"base": {"bits_per_cell": [4, 4]}})"), ConfigError);
  EXPECT_THROW(load_spec("/nonexistent/spec.json"), IoError);
}

TEST(Config, JsonRoundTrip) {
  ExperimentSpec s = small_spec();
  s.delta_grid = {0.5, 1.0};
  s.bits_cap = 21;
  s.output_path = "out.csv";
  const ExperimentSpec back = parse_spec(spec_to_json(s));
  EXPECT_EQ(spec_to_json(back), spec_to_json(s));
  EXPECT_EQ(back.schemes, s.schemes);
  EXPECT_EQ(back.base.seed, s.base.seed);
}

TEST(Config, RepositoryConfigsLoad) {
  for (const char* f : {"fig2.json", "fig3.json", "fig4.json", "fig5_4326.json", "fig5_83212.json"}) {
    EXPECT_NO_THROW(load_spec(kRepoConfigs + "/" + f)) << f;
  }
}

// The plotting scripts read these CSVs by column name and group series by
// the scheme column.
TEST(PlotInterface, SeriesPerPlot) {
  const std::map<std::string, std::size_t> expect{
      {"fig2.json", 5}, {"fig3.json", 5}, {"fig4.json", 3}, {"fig5_4326.json", 2}};
  for (const auto& [file, series] : expect) {
    ExperimentSpec s = repo_config(file, 2);
    s.snr_grid_db.resize(std::min<std::size_t>(s.snr_grid_db.size(), 2));
    const auto cells = parse_csv(to_csv(run_experiment(s)));
    ASSERT_GE(cells.size(), 2U) << file;
    std::ostringstream header;
    for (std::size_t i = 0; i < cells[0].size(); ++i) header << (i ? "," : "") << cells[0][i];
    EXPECT_EQ(header.str(), kCsvHeader);
    std::set<std::string> schemes;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      ASSERT_EQ(cells[i].size(), 8U);
      schemes.insert(cells[i][1]);
    }
    EXPECT_EQ(schemes.size(), series) << file;
  }
}

TEST(PlotInterface, BitsSweepRows) {
  ExperimentSpec s = repo_config("fig5_4326.json", 2);
  const auto cells = parse_csv(to_csv(run_experiment(s)));
  ASSERT_EQ(cells.size(), 6U);
  EXPECT_EQ(cells[1][1], "gcsi");
  for (std::size_t i = 2; i < cells.size(); ++i) {
    EXPECT_EQ(cells[i][1], "percell-exhaustive");
    EXPECT_EQ(std::stoi(cells[i][7]), 3 * s.bits_per_bs_grid[i - 2]);
  }
}
