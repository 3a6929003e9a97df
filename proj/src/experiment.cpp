// SPDX-License-Identifier: Apache-2.0

#include "netmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "netmimo/analysis.hpp"
#include "netmimo/codebook.hpp"
#include "netmimo/errors.hpp"
#include "netmimo/feedback.hpp"
#include "netmimo/givens.hpp"
#include "netmimo/metrics.hpp"
#include "netmimo/precoding.hpp"

namespace netmimo {

namespace {

constexpr int kMaxJointBits = 16;
constexpr std::uint64_t kTrialStream = 0;
constexpr std::uint64_t kCodebookStream = 1;

enum class Kind { Gcsi, Exhaustive, Isa, Joint, Givens };

struct Job {
  Kind kind = Kind::Gcsi;
  std::size_t bits_idx = 0;
  std::vector<double> delta;
  int givens_bits = 0;

  bool operator==(const Job&) const = default;
};

struct RowPlan {
  std::size_t snr_idx = 0;
  std::string tag;
  std::size_t job = 0;
  int bits = 0;
};

struct Plan {
  std::vector<std::vector<int>> bit_configs;
  std::vector<Job> jobs;
  std::vector<RowPlan> rows;
};

struct RowSample {
  double rate = 0.0;
  double loss = 0.0;
  double distortion = 0.0;
  double complexity = 0.0;
  std::uint32_t excluded = 0;
  bool valid = false;
};

struct TrialOut {
  std::vector<RowSample> rows;
  std::uint64_t hash = 0;
  bool infeasible = false;
};

struct CodebookSet {
  std::vector<Codebook> percell;
  std::unique_ptr<Codebook> joint;
};

std::string format_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

bool has_scheme(const ExperimentSpec& spec, const std::string& s) {
  return std::find(spec.schemes.begin(), spec.schemes.end(), s) != spec.schemes.end();
}

std::size_t add_job(Plan& plan, const Job& job) {
  for (std::size_t i = 0; i < plan.jobs.size(); ++i) {
    if (plan.jobs[i] == job) return i;
  }
  plan.jobs.push_back(job);
  return plan.jobs.size() - 1;
}

std::size_t add_bits(Plan& plan, const std::vector<int>& bits) {
  for (std::size_t i = 0; i < plan.bit_configs.size(); ++i) {
    if (plan.bit_configs[i] == bits) return i;
  }
  plan.bit_configs.push_back(bits);
  return plan.bit_configs.size() - 1;
}

int sum_bits(const std::vector<int>& bits) {
  int total = 0;
  for (int b : bits) total += b;
  return total;
}

Plan make_plan(const ExperimentSpec& spec) {
  const SystemConfig& cfg = spec.base;
  Plan plan;
  plan.jobs.push_back(Job{});  // GCSI precoders, needed for every loss

  std::vector<std::vector<std::vector<int>>> per_snr(spec.snr_grid_db.size());
  std::vector<int> schedule;
  if (spec.bit_mode == BitMode::Corollary1Scaled) schedule = scaled_bit_schedule(spec);
  for (std::size_t s = 0; s < spec.snr_grid_db.size(); ++s) {
    if (spec.bit_mode == BitMode::Corollary1Scaled) {
      per_snr[s].push_back(split_bits(schedule[s], cfg.n_bs));
    } else if (!spec.bits_per_bs_grid.empty()) {
      for (int b : spec.bits_per_bs_grid) per_snr[s].emplace_back(cfg.n_bs, b);
    } else {
      per_snr[s].push_back(cfg.bits_per_cell);
    }
  }

  std::vector<std::pair<std::vector<double>, std::string>> isa_radii;
  if (spec.delta_grid.empty()) {
    isa_radii.emplace_back(cfg.delta, "percell-isa");
  } else {
    for (double d : spec.delta_grid) {
      isa_radii.emplace_back(std::vector<double>(cfg.n_bs, d), "percell-isa-" + format_g(d));
    }
  }

  for (std::size_t s = 0; s < spec.snr_grid_db.size(); ++s) {
    if (has_scheme(spec, "gcsi")) plan.rows.push_back({s, "gcsi", 0, 0});
    for (const auto& bits : per_snr[s]) {
      const std::size_t c = add_bits(plan, bits);
      const int total = sum_bits(bits);
      if (has_scheme(spec, "percell-exhaustive")) {
        plan.rows.push_back(
            {s, "percell-exhaustive", add_job(plan, {Kind::Exhaustive, c, {}, 0}), total});
      }
      if (has_scheme(spec, "percell-isa")) {
        for (const auto& [delta, tag] : isa_radii) {
          plan.rows.push_back({s, tag, add_job(plan, {Kind::Isa, c, delta, 0}), total});
        }
      }
      if (has_scheme(spec, "jointcell")) {
        plan.rows.push_back({s, "jointcell", add_job(plan, {Kind::Joint, c, {}, 0}), total});
      }
    }
    for (int per_bs : {4, 8}) {
      const std::string tag = "givens-" + std::to_string(per_bs);
      if (!has_scheme(spec, tag)) continue;
      const int total = per_bs * cfg.n_bs;
      plan.rows.push_back({s, tag, add_job(plan, {Kind::Givens, 0, {}, total}), total});
    }
    if (spec.bit_mode == BitMode::Corollary1Scaled && has_scheme(spec, "percell-exhaustive")) {
      const std::size_t c = add_bits(plan, cfg.bits_per_cell);
      plan.rows.push_back({s, "percell-exhaustive-fixed",
                           add_job(plan, {Kind::Exhaustive, c, {}, 0}),
                           sum_bits(cfg.bits_per_cell)});
    }
  }
  return plan;
}

SystemConfig with_bits(const SystemConfig& cfg, const std::vector<int>& bits) {
  SystemConfig out = cfg;
  out.bits_per_cell = bits;
  return out;
}

std::vector<CodebookSet> draw_codebooks(const ExperimentSpec& spec, const Plan& plan,
                                        const RngStream& root) {
  std::vector<bool> need_percell(plan.bit_configs.size(), false);
  std::vector<bool> need_joint(plan.bit_configs.size(), false);
  for (const Job& job : plan.jobs) {
    if (job.kind == Kind::Exhaustive || job.kind == Kind::Isa) need_percell[job.bits_idx] = true;
    if (job.kind == Kind::Joint) need_joint[job.bits_idx] = true;
  }
  std::vector<CodebookSet> out(plan.bit_configs.size());
  for (std::size_t c = 0; c < plan.bit_configs.size(); ++c) {
    const SystemConfig cfg = with_bits(spec.base, plan.bit_configs[c]);
    RngStream rng = root.split(c);
    if (need_percell[c]) out[c].percell = build_percell_codebooks(cfg, rng);
    if (need_joint[c]) out[c].joint = std::make_unique<Codebook>(build_jointcell_codebook(cfg, rng));
  }
  return out;
}

struct JobOutput {
  PrecoderSet precoders;
  double distortion = 0.0;
  double complexity = 0.0;
  bool feasible = true;
};

TrialOut run_trial(const ExperimentSpec& spec, const Plan& plan,
                   const std::vector<double>& p_max_grid,
                   const std::vector<CodebookSet>* shared_books, std::size_t trial) {
  const SystemConfig& cfg = spec.base;
  const std::size_t k_users = static_cast<std::size_t>(cfg.n_users);
  const RngStream trial_rng = RngStream(cfg.seed, kTrialStream).split(trial);
  RngStream drop_rng = trial_rng.split(0);
  RngStream chan_rng = trial_rng.split(1);
  const auto positions = drop_users(cfg, drop_rng);
  const ChannelRealization real = realize_channel(cfg, positions, chan_rng);

  std::vector<CodebookSet> local_books;
  const std::vector<CodebookSet>* books = shared_books;
  if (books == nullptr) {
    local_books = draw_codebooks(spec, plan,
                                 RngStream(cfg.seed, kCodebookStream).split(trial + 1));
    books = &local_books;
  }

  TrialOut out;
  out.hash = realization_hash(real);

  std::vector<Decomposition> dec;
  dec.reserve(k_users);
  for (std::size_t k = 0; k < k_users; ++k) dec.push_back(normalize_and_decompose(real, k, cfg));

  std::vector<JobOutput> jobs(plan.jobs.size());
  for (std::size_t j = 0; j < plan.jobs.size(); ++j) {
    const Job& job = plan.jobs[j];
    JobOutput& jo = jobs[j];
    std::vector<ComplexMatrix> csi;
    csi.reserve(k_users);
    if (job.kind == Kind::Gcsi) {
      csi = real.h;
    } else {
      const int total = job.kind == Kind::Givens ? job.givens_bits
                                                 : sum_bits(plan.bit_configs[job.bits_idx]);
      for (std::size_t k = 0; k < k_users; ++k) {
        QuantizedCsi q;
        double d = 0.0;
        double cx = 0.0;
        switch (job.kind) {
          case Kind::Exhaustive:
          case Kind::Isa: {
            const auto& pc = (*books)[job.bits_idx].percell;
            const FeedbackReport rep =
                job.kind == Kind::Exhaustive
                    ? search_exhaustive(dec[k].v_w, pc)
                    : search_isa(dec[k].v_w, dec[k].centroids, pc, job.delta);
            q = reconstruct(rep, pc, real, k);
            d = rep.distortion;
            cx = relative_complexity(rep, total);
            break;
          }
          case Kind::Joint: {
            const Codebook& jb = *(*books)[job.bits_idx].joint;
            const FeedbackReport rep = search_jointcell(dec[k].v_w, jb);
            q = denormalize(jb[rep.indices[0]], real.g_diag[k]);
            d = rep.distortion;
            cx = relative_complexity(rep, total);
            break;
          }
          case Kind::Givens: {
            ComplexMatrix v_hat = givens_decode(givens_encode(dec[k].v_w, total));
            d = chordal_distance_sq_fast(v_hat, dec[k].v_w);
            q = denormalize(std::move(v_hat), real.g_diag[k]);
            break;
          }
          case Kind::Gcsi:
            break;
        }
        jo.distortion += std::clamp(d, 0.0, static_cast<double>(cfg.n_r));
        jo.complexity += cx;
        csi.push_back(std::move(q.h_hat));
      }
      jo.distortion /= static_cast<double>(k_users);
      jo.complexity /= static_cast<double>(k_users);
    }
    try {
      jo.precoders = bd_precoders(csi, cfg);
    } catch (const InfeasibleError&) {
      jo.feasible = false;
      out.infeasible = true;
    }
  }

  std::vector<std::vector<double>> r_csit(p_max_grid.size());
  out.rows.resize(plan.rows.size());
  for (std::size_t r = 0; r < plan.rows.size(); ++r) {
    const RowPlan& row = plan.rows[r];
    JobOutput& jo = jobs[row.job];
    JobOutput& gcsi = jobs[0];
    RowSample& rs = out.rows[r];
    if (!jo.feasible || !gcsi.feasible) continue;

    SystemConfig at_snr = cfg;
    at_snr.p_max = p_max_grid[row.snr_idx];
    const double p = power_allocation(at_snr);
    gcsi.precoders.power_scalar = p;
    jo.precoders.power_scalar = p;
    auto& csit = r_csit[row.snr_idx];
    if (csit.empty()) {
      for (std::size_t k = 0; k < k_users; ++k) {
        csit.push_back(rate_csit(real.h[k], gcsi.precoders, k, cfg.noise_power));
      }
    }

    double rate = 0.0;
    double loss = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < k_users; ++k) {
      if (row.job == 0) {
        rate += csit[k];
        ++used;
        continue;
      }
      const LfRate lf = rate_lf(real.h[k], jo.precoders, k, cfg.noise_power);
      if (lf.excluded) {
        ++rs.excluded;
        continue;
      }
      rate += lf.rate;
      loss += csit[k] - lf.rate;
      ++used;
    }
    if (used == 0) continue;
    rs.valid = true;
    rs.rate = rate / static_cast<double>(used);
    rs.loss = loss / static_cast<double>(used);
    rs.distortion = jo.distortion;
    rs.complexity = jo.complexity;
  }

  if (realization_hash(real) != out.hash) {
    throw NumericalError("run_experiment: channel realization changed during trial " +
                         std::to_string(trial));
  }
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  base.validate();
  if (snr_grid_db.empty()) throw ConfigError("snr_grid_db must be non-empty");
  if (schemes.empty()) throw ConfigError("schemes must be non-empty");
  static const std::vector<std::string> known{"gcsi",      "percell-exhaustive", "percell-isa",
                                              "jointcell", "givens-4",           "givens-8"};
  for (const auto& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw ConfigError("unknown scheme '" + s + "'");
    }
  }
  for (double x : snr_grid_db) {
    if (!std::isfinite(x)) throw ConfigError("snr_grid_db entries must be finite");
  }
  const double max_delta = std::sqrt(static_cast<double>(base.n_r));
  for (double d : delta_grid) {
    if (!(d >= 0.0 && d <= max_delta)) {
      throw ConfigError("delta_grid entry " + format_g(d) + " outside [0, sqrt(n_r)]");
    }
  }
  if (bit_mode == BitMode::Corollary1Scaled) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive in scaled bit mode");
    if (!bits_per_bs_grid.empty()) {
      throw ConfigError("bits_per_bs_grid cannot be combined with scaled bit mode");
    }
    if (bits_cap < base.n_bs || bits_cap > 24 * base.n_bs) {
      throw ConfigError("bits_cap must lie in [n_bs, 24 n_bs]");
    }
  }
  for (int b : bits_per_bs_grid) {
    if (b < 0 || b > 24) throw ConfigError("bits_per_bs_grid entries must lie in [0, 24]");
  }
  if (has_scheme(*this, "jointcell")) {
    int worst = sum_bits(base.bits_per_cell);
    for (int b : bits_per_bs_grid) worst = std::max(worst, b * base.n_bs);
    if (bit_mode == BitMode::Corollary1Scaled) {
      for (int b : scaled_bit_schedule(*this)) worst = std::max(worst, b);
    }
    if (worst > kMaxJointBits) {
      throw ConfigError("jointcell supports at most " + std::to_string(kMaxJointBits) +
                        " bits per user, spec needs " + std::to_string(worst));
    }
  }
}

std::vector<int> scaled_bit_schedule(const ExperimentSpec& spec) {
  std::vector<int> out;
  for (double snr : spec.snr_grid_db) {
    ScalingInputs si;
    si.rho = std::pow(10.0, snr / 10.0);
    si.g_sum = spec.base.n_bs;
    si.epsilon = spec.epsilon;
    si.n_t = spec.base.n_t;
    si.n_bs = spec.base.n_bs;
    si.n_r = spec.base.n_r;
    si.n_users = spec.base.n_users;
    out.push_back(std::min(corollary1_bits(si), spec.bits_cap));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  spec.validate();
  const SystemConfig& cfg = spec.base;
  const Plan plan = make_plan(spec);

  std::vector<double> p_max_grid;
  for (double snr : spec.snr_grid_db) p_max_grid.push_back(snr_calibration(cfg, snr));

  std::vector<CodebookSet> shared;
  if (!cfg.redraw_codebooks_per_trial) {
    shared = draw_codebooks(spec, plan, RngStream(cfg.seed, kCodebookStream).split(0));
  }
  const std::vector<CodebookSet>* shared_ptr =
      cfg.redraw_codebooks_per_trial ? nullptr : &shared;

  const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOut> trials(n_trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_trials) return;
      try {
        trials[t] = run_trial(spec, plan, p_max_grid, shared_ptr, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_trials);
        return;
      }
    }
  };
  const unsigned n_workers =
      static_cast<unsigned>(std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(n_trials, 1)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.name = spec.name;
  for (const TrialOut& t : trials) {
    result.realization_hashes.push_back(t.hash);
    if (t.infeasible) ++result.infeasible;
  }
  if (static_cast<double>(result.infeasible) > 0.01 * static_cast<double>(n_trials)) {
    throw InfeasibleError("run_experiment: " + std::to_string(result.infeasible) + " of " +
                          std::to_string(n_trials) +
                          " trials had an infeasible block diagonalization");
  }

  for (std::size_t r = 0; r < plan.rows.size(); ++r) {
    std::vector<double> rates;
    std::vector<double> losses;
    double dist = 0.0;
    double cx = 0.0;
    ResultRow row;
    for (const TrialOut& t : trials) {
      const RowSample& s = t.rows[r];
      row.excluded += s.excluded;
      if (!s.valid) continue;
      rates.push_back(s.rate);
      losses.push_back(s.loss);
      dist += s.distortion;
      cx += s.complexity;
    }
    const RowPlan& rp = plan.rows[r];
    row.snr_db = spec.snr_grid_db[rp.snr_idx];
    row.scheme = rp.tag;
    row.bits = rp.bits;
    const MeanCi rate = mean_ci(rates);
    const MeanCi loss = mean_ci(losses);
    row.rate_mean = rate.mean;
    row.rate_ci = rate.ci;
    row.loss_mean = loss.mean;
    row.loss_ci = loss.ci;
    row.trials_used = rates.size();
    if (!rates.empty()) {
      row.distortion_mean = dist / static_cast<double>(rates.size());
      row.rel_complexity = cx / static_cast<double>(rates.size());
    }
    result.rows.push_back(std::move(row));
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
                     if (a.scheme != b.scheme) return a.scheme < b.scheme;
                     return a.bits < b.bits;
                   });
  return result;
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const ResultRow& r : result.rows) {
    os << format_g(r.snr_db) << ',' << r.scheme << ',' << format_g(r.rate_mean) << ','
       << format_g(r.rate_ci) << ',' << format_g(r.distortion_mean) << ','
       << format_g(r.rel_complexity) << ',' << r.excluded << ',' << r.bits << '\n';
  }
  return os.str();
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  }
  out << to_csv(result);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace netmimo
