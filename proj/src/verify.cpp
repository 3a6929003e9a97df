// SPDX-License-Identifier: Apache-2.0

#include "netmimo/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "netmimo/analysis.hpp"
#include "netmimo/channel.hpp"
#include "netmimo/codebook.hpp"
#include "netmimo/errors.hpp"
#include "netmimo/feedback.hpp"
#include "netmimo/metrics.hpp"
#include "netmimo/precoding.hpp"

namespace netmimo {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

SystemConfig dims(int n_t, int n_bs, int n_r, int k) {
  SystemConfig c;
  c.n_t = n_t;
  c.n_bs = n_bs;
  c.n_r = n_r;
  c.n_users = k;
  c.bits_per_cell.assign(static_cast<std::size_t>(n_bs), 4);
  c.delta.assign(static_cast<std::size_t>(n_bs), 0.9);
  return c;
}

// Row space of an i.i.d. Gaussian aggregate channel plus its block centroids.
Decomposition random_source(const SystemConfig& cfg, RngStream& rng) {
  Decomposition d;
  d.h_w = complex_gaussian(cfg.n_r, cfg.aggregate_antennas(), rng);
  d.v_w = row_space_basis(d.h_w, cfg.n_r);
  for (int n = 0; n < cfg.n_bs; ++n) {
    d.centroids.push_back(row_space_basis(d.h_w.middleCols(n * cfg.n_t, cfg.n_t), cfg.n_r));
  }
  return d;
}

}  // namespace

CheckResult check_isa_equivalence(std::uint64_t seed, std::size_t instances) {
  const auto t0 = Clock::now();
  const SystemConfig cfg = dims(4, 3, 2, 6);
  const std::vector<double> full(3, std::sqrt(2.0));
  const RngStream root(seed, 0x15a);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    RngStream book_rng = root.split(i).split(0);
    RngStream src_rng = root.split(i).split(1);
    const auto books = build_percell_codebooks(cfg, book_rng);
    const Decomposition src = random_source(cfg, src_rng);
    const FeedbackReport ex = search_exhaustive(src.v_w, books);
    const FeedbackReport isa = search_isa(src.v_w, src.centroids, books, full);
    if (ex.indices == isa.indices) ++matches;
  }
  CheckResult r;
  r.suite = "isa-equivalence";
  r.name = "full-radius tuples match exhaustive";
  r.value = instances ? static_cast<double>(matches) / static_cast<double>(instances) : 0.0;
  r.pass = instances > 0 && matches == instances;
  r.detail = std::to_string(matches) + "/" + std::to_string(instances) + " identical tuples";
  r.seconds = since(t0);
  return r;
}

CheckResult check_bd_zero_forcing(std::uint64_t seed, std::size_t instances) {
  const auto t0 = Clock::now();
  const SystemConfig cfg = dims(4, 3, 2, 6);
  const RngStream root(seed, 0xbd);
  double worst = 0.0;
  double worst_rel = 0.0;
  std::size_t infeasible = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    RngStream drop_rng = root.split(i).split(0);
    RngStream chan_rng = root.split(i).split(1);
    RngStream book_rng = root.split(i).split(2);
    const auto pos = drop_users(cfg, drop_rng);
    const ChannelRealization real = realize_channel(cfg, pos, chan_rng);
    const auto books = build_percell_codebooks(cfg, book_rng);
    std::vector<ComplexMatrix> csi;
    for (std::size_t k = 0; k < real.h.size(); ++k) {
      const Decomposition d = normalize_and_decompose(real, k, cfg);
      csi.push_back(reconstruct(search_exhaustive(d.v_w, books), books, real, k).h_hat);
    }
    PrecoderSet set;
    try {
      set = bd_precoders(csi, cfg);
    } catch (const InfeasibleError&) {
      ++infeasible;
      continue;
    }
    for (std::size_t k = 0; k < csi.size(); ++k) {
      for (std::size_t j = 0; j < csi.size(); ++j) {
        if (j == k) continue;
        const double res = (csi[j] * set.w[k]).norm();
        const double nrm = csi[j].norm();
        worst = std::max(worst, res / std::max(1.0, nrm));
        if (nrm > 0.0) worst_rel = std::max(worst_rel, res / nrm);
      }
    }
  }
  CheckResult r;
  r.suite = "bd";
  r.name = "quantized-CSI zero forcing";
  r.value = worst;
  r.pass = infeasible == 0 && worst <= 1e-8;
  r.detail = "max residual " + fmt("%.3e", worst) + ", max relative residual " +
             fmt("%.3e", worst_rel) + ", infeasible " + std::to_string(infeasible);
  r.seconds = since(t0);
  return r;
}

CheckResult check_distortion_slope(std::uint64_t seed, std::size_t sources) {
  const auto t0 = Clock::now();
  const std::vector<int> budgets{8, 12, 16, 20};
  const RngStream root(seed, 0xd15);
  std::vector<double> means;
  for (int b : budgets) {
    SystemConfig cfg = dims(4, 3, 2, 6);
    cfg.bits_per_cell = split_bits(b, cfg.n_bs);
    double acc = 0.0;
    for (std::size_t s = 0; s < sources; ++s) {
      const RngStream src = root.split(static_cast<std::uint64_t>(b)).split(s);
      RngStream book_rng = src.split(0);
      RngStream v_rng = src.split(1);
      const auto books = build_percell_codebooks(cfg, book_rng);
      const ComplexMatrix v = haar_orthonormal(cfg.aggregate_antennas(), cfg.n_r, v_rng);
      acc += search_exhaustive(v, books).distortion;
    }
    means.push_back(acc / static_cast<double>(sources));
  }
  // Least-squares slope of log2(mean) on B.
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    mx += budgets[i];
    my += std::log2(means[i]);
  }
  mx /= static_cast<double>(budgets.size());
  my /= static_cast<double>(budgets.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    sxy += (budgets[i] - mx) * (std::log2(means[i]) - my);
    sxx += (budgets[i] - mx) * (budgets[i] - mx);
  }
  const double slope = sxy / sxx;
  const double target = -1.0 / 20.0;
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) monotone = monotone && means[i] < means[i - 1];
  const bool slope_ok = std::abs(slope - target) <= 0.3 * std::abs(target);
  const bool anchor_ok = means[1] >= 0.9 && means[1] <= 1.7;

  CheckResult r;
  r.suite = "distortion";
  r.name = "random product codebook distortion slope";
  r.value = slope;
  r.pass = slope_ok && monotone && anchor_ok;
  std::ostringstream os;
  os << "slope " << fmt("%.5f", slope) << " (target -0.05 +/- 30%), means";
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    os << " B=" << budgets[i] << ":" << fmt("%.4f", means[i]);
  }
  os << ", closed form at B=12 " << fmt("%.4f", lemma2_distortion(12, 4, 3, 2).simplified);
  r.detail = os.str();
  r.seconds = since(t0);
  return r;
}

CheckResult check_concentration(std::uint64_t seed, std::size_t samples) {
  const auto t0 = Clock::now();
  const RngStream root(seed, 0xc0c);
  bool bounded = true;
  bool decreasing = true;
  double prev = 2.0;
  std::ostringstream os;
  for (int n_t : {16, 64, 256}) {
    RngStream rng = root.split(static_cast<std::uint64_t>(n_t));
    const ConcentrationResult c = concentration_check(n_t, 3, samples, 0.05, rng);
    bounded = bounded && c.exceedance <= c.chebyshev_bound + 3.0 * c.std_error;
    decreasing = decreasing && c.exceedance < prev;
    prev = c.exceedance;
    os << "n_T=" << n_t << ": " << fmt("%.4f", c.exceedance) << " <= "
       << fmt("%.4f", c.chebyshev_bound) << "; ";
  }
  CheckResult r;
  r.suite = "concentration";
  r.name = "block norm concentration";
  r.value = prev;
  r.pass = bounded && decreasing;
  r.detail = os.str() + (decreasing ? "decreasing" : "not decreasing");
  r.seconds = since(t0);
  return r;
}

std::vector<CheckResult> check_scaling_laws() {
  std::vector<CheckResult> out;
  const auto t0 = Clock::now();

  {
    CheckResult r;
    r.suite = "scaling";
    r.name = "bit inversion keeps predicted loss within epsilon";
    double worst = 0.0;
    for (const SystemConfig& cfg : {dims(4, 3, 2, 6), dims(8, 3, 2, 12)}) {
      for (int i = 0; i <= 50; ++i) {
        ScalingInputs si;
        si.n_t = cfg.n_t;
        si.n_bs = cfg.n_bs;
        si.n_r = cfg.n_r;
        si.n_users = cfg.n_users;
        si.epsilon = 1.0;
        si.g_sum = cfg.n_bs;
        si.rho = std::pow(10.0, 1.0 + 5.0 * i / 50.0) / si.g_sum;
        si.b_k = corollary1_bits(si);
        worst = std::max(worst, theorem1_loss(si));
      }
    }
    r.value = worst;
    r.pass = worst <= 1.0 + 0.01;
    r.detail = "max predicted loss " + fmt("%.6f", worst) + " at epsilon 1";
    r.seconds = since(t0);
    out.push_back(r);
  }
  {
    CheckResult r;
    r.suite = "scaling";
    r.name = "rate predictors linear in bits";
    ScalingInputs a;
    a.b_k = 12;
    ScalingInputs b = a;
    b.b_k = 24;
    const Corollary2Value ca = corollary2_rate(a);
    const Corollary2Value cb = corollary2_rate(b);
    const double e1 = std::abs(cb.main_text / ca.main_text - 2.0);
    const double e2 = std::abs(cb.appendix / ca.appendix - 2.0);
    r.value = std::max(e1, e2);
    r.pass = r.value <= 1e-12 && ca.main_text > 0.0 && ca.appendix > 0.0;
    r.detail = "ratio error " + fmt("%.3e", r.value);
    out.push_back(r);
  }
  {
    CheckResult r;
    r.suite = "scaling";
    r.name = "closed-form distortion log slope";
    const double alpha = 2.0 * (12 - 2);
    double worst = 0.0;
    for (int b = 0; b < 40; ++b) {
      const double d0 = lemma2_distortion(b, 4, 3, 2).simplified;
      const double d1 = lemma2_distortion(b + 1, 4, 3, 2).simplified;
      worst = std::max(worst, std::abs(std::log2(d1) - std::log2(d0) + 1.0 / alpha));
    }
    r.value = worst;
    r.pass = worst <= 1e-12;
    r.detail = "slope error " + fmt("%.3e", worst);
    out.push_back(r);
  }
  {
    // Reference schedule at (8,3,2,12), epsilon 1: [24 30 36 42 48 57 63 72]
    // over eight SNR points, i.e. about 48/7 bits per step.
    CheckResult r;
    r.suite = "scaling";
    r.name = "bit schedule step vs reference schedule";
    const SystemConfig cfg = dims(8, 3, 2, 12);
    std::vector<int> sched;
    for (int s = 0; s < 8; ++s) {
      ScalingInputs si;
      si.n_t = cfg.n_t;
      si.n_bs = cfg.n_bs;
      si.n_r = cfg.n_r;
      si.n_users = cfg.n_users;
      si.epsilon = 1.0;
      si.rho = std::pow(10.0, 5.0 * s / 10.0);
      si.g_sum = cfg.n_bs;
      sched.push_back(corollary1_bits(si));
    }
    const double step = (sched.back() - sched.front()) / 7.0;
    const double reference = 48.0 / 7.0;
    r.value = step;
    r.pass = std::abs(step - reference) <= 0.5 * reference;
    std::ostringstream os;
    os << "schedule";
    for (int b : sched) os << ' ' << b;
    os << "; mean step " << fmt("%.2f", step) << " vs reference " << fmt("%.2f", reference);
    r.detail = os.str();
    out.push_back(r);
  }
  return out;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "isa-equivalence") {
    known = true;
    out.push_back(check_isa_equivalence(seed));
  }
  if (all || suite == "bd") {
    known = true;
    out.push_back(check_bd_zero_forcing(seed));
  }
  if (all || suite == "distortion") {
    known = true;
    out.push_back(check_distortion_slope(seed));
  }
  if (all || suite == "concentration") {
    known = true;
    out.push_back(check_concentration(seed));
  }
  if (all || suite == "scaling") {
    known = true;
    for (auto& r : check_scaling_laws()) out.push_back(std::move(r));
  }
  if (!known) throw ConfigError("unknown verification suite '" + suite + "'");
  return out;
}

std::string verify_csv(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  os << "suite,check,pass,value,seconds,detail\n";
  for (const auto& r : results) {
    std::string detail = r.detail;
    for (char& c : detail) {
      if (c == '"') c = '\'';
    }
    os << r.suite << ',' << r.name << ',' << (r.pass ? "pass" : "fail") << ','
       << fmt("%.9g", r.value) << ',' << fmt("%.3f", r.seconds) << ",\"" << detail << "\"\n";
  }
  return os.str();
}

}  // namespace netmimo
