// Command-line front end for the otrim shared library. Every computation goes
// through the C API in otrim/otrim.h; this file only parses flags and formats
// output. Exit codes: 0 success, 1 usage error, 2 infeasibility, 3 I/O error.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "otrim/otrim.h"

namespace {

int exit_code(otrim_status st) {
  switch (st) {
    case OTRIM_OK: return 0;
    case OTRIM_ERR_USAGE: return 1;
    case OTRIM_ERR_INFEASIBLE: return 2;
    case OTRIM_ERR_IO: return 3;
    case OTRIM_ERR_INTERNAL: return 1;
  }
  return 1;
}

int fail(otrim_status st) {
  std::fprintf(stderr, "error: %s\n", otrim_last_error());
  return exit_code(st);
}

struct SampleHandle {
  otrim_sample* s = nullptr;
  ~SampleHandle() { otrim_sample_free(s); }
};

// File input overrides seeded sampling so published runs stay reproducible.
int load_or_sample(const std::string& file, size_t n, uint32_t d, uint64_t seed,
                   SampleHandle& out) {
  const otrim_status st = file.empty()
                              ? otrim_sample_uniform(n, d, seed, &out.s)
                              : otrim_sample_read_csv(file.c_str(), &out.s);
  return st == OTRIM_OK ? 0 : fail(st);
}

struct CommonFlags {
  size_t n = 100;
  uint32_t d = 1;
  double p = 2.0;
  double alpha = 0.1;
  uint64_t seed = 0;
  std::string input_x, input_y, out_dir, method;
  size_t mc_draws = 100000;
  size_t reps = 100;
  size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<size_t> n_grid;
};

int run_trim1d(const CommonFlags& f) {
  SampleHandle s;
  if (int rc = load_or_sample(f.input_x, f.n, 1, f.seed, s)) return rc;
  otrim_trim1d_result* res = nullptr;
  if (otrim_status st = otrim_trim1d_solve(s.s, f.alpha, f.p, 0.0, &res); st != OTRIM_OK)
    return fail(st);
  const size_t n = otrim_trim1d_size(res);
  std::printf("trim1d  n=%zu  alpha=%g  p=%g\n", n, f.alpha, f.p);
  std::printf("cost         %.12g\n", otrim_trim1d_cost(res));
  std::printf("lower_bound  %.12g\n", otrim_trim1d_lower_bound(res));
  std::printf("upper_bound  %.12g\n", otrim_trim1d_upper_bound(res));
  std::printf("refinements  %d\n", otrim_trim1d_refinements(res));
  if (n > 1) {
    std::vector<double> up(n - 1), lo(n - 1);
    otrim_trim1d_copy_envelopes(res, up.data(), lo.data(), n - 1);
    double wmax = 0.0, wsum = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
      wmax = std::max(wmax, up[i] - lo[i]);
      wsum += up[i] - lo[i];
    }
    std::printf("envelope band: max width %.6g, mean width %.6g\n", wmax,
                wsum / static_cast<double>(n - 1));
  }
  otrim_trim1d_free(res);
  return 0;
}

int run_match(const CommonFlags& f) {
  SampleHandle x, y;
  if (int rc = load_or_sample(f.input_x, f.n, f.d, f.seed, x)) return rc;
  if (int rc = load_or_sample(f.input_y, f.n, f.d, f.seed + 1, y)) return rc;
  otrim_matching_result* res = nullptr;
  if (otrim_status st = otrim_match_solve(x.s, y.s, f.p, f.alpha, &res); st != OTRIM_OK)
    return fail(st);
  const size_t m = otrim_match_pairs(res);
  std::printf("match  n=%zu  m=%zu  alpha=%g  p=%g\n", otrim_sample_size(x.s), m,
              f.alpha, f.p);
  std::printf("cost  %.12g\n", otrim_match_cost(res));
  if (!f.out_dir.empty()) {
    std::vector<uint32_t> xs(m), ys(m);
    otrim_match_copy_pairs(res, xs.data(), ys.data(), m);
    const std::string path = f.out_dir + "/pairing.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
      otrim_match_free(res);
      return 3;
    }
    out << "x_index,y_index\n";
    for (size_t k = 0; k < m; ++k) out << xs[k] << ',' << ys[k] << '\n';
    std::printf("pairing written to %s\n", path.c_str());
  }
  otrim_match_free(res);
  return 0;
}

int run_stripe(const CommonFlags& f) {
  SampleHandle s;
  if (int rc = load_or_sample(f.input_x, f.n, std::max(f.d, 2u), f.seed, s)) return rc;
  otrim_stripe_method method = OTRIM_STRIPE_MC;
  if (f.method == "exact" || (f.method.empty() && f.p == 2.0 && otrim_sample_dim(s.s) == 2))
    method = OTRIM_STRIPE_EXACT;
  otrim_stripe_report* rep = nullptr;
  const otrim_status st =
      otrim_stripe_solve(s.s, f.alpha, f.p, method, f.mc_draws, f.seed, &rep);
  if (st == OTRIM_ERR_INFEASIBLE) {
    std::printf("feasible  no\n");
    return fail(st);
  }
  if (st != OTRIM_OK) return fail(st);
  std::printf("stripe  n=%zu  d=%u  N=%u  alpha=%g  p=%g  method=%s\n",
              otrim_sample_size(s.s), otrim_sample_dim(s.s), otrim_stripe_count(rep),
              f.alpha, f.p, method == OTRIM_STRIPE_EXACT ? "exact" : "mc");
  std::printf("feasible     yes\n");
  std::printf("cost         %.12g\n", otrim_stripe_cost(rep));
  if (method == OTRIM_STRIPE_MC)
    std::printf("mc_std_err   %.6g\n", otrim_stripe_mc_std_error(rep));
  std::printf("upper_bound  %.12g\n", otrim_stripe_upper_bound(rep));
  otrim_stripe_free(rep);
  return 0;
}

int run_quantize(const CommonFlags& f) {
  SampleHandle s;
  if (int rc = load_or_sample(f.input_x, f.n, f.d, f.seed, s)) return rc;
  otrim_quantize_report rep;
  const int use_mc = f.method == "mc" ? 1 : 0;
  if (otrim_status st = otrim_quantize(s.s, f.p, use_mc, f.mc_draws, f.seed + 7, &rep);
      st != OTRIM_OK)
    return fail(st);
  const uint32_t d = otrim_sample_dim(s.s);
  std::printf("quantize  n=%zu  d=%u  p=%g  method=%s\n", otrim_sample_size(s.s), d,
              f.p, rep.exact ? "exact" : "mc");
  std::printf("cost        %.12g\n", rep.cost);
  if (!rep.exact) std::printf("mc_std_err  %.6g\n", rep.mc_std_error);
  std::printf("scaled n^{p/d} cost  %.12g\n", rep.scaled);
  std::printf("limit constant       %.12g\n", otrim_quantization_constant(d, f.p));
  return 0;
}

int run_rates(const CommonFlags& f, const std::string& statistic) {
  otrim_rates_config cfg{};
  cfg.statistic = statistic.c_str();
  cfg.d = f.d;
  cfg.p = f.p;
  cfg.alpha = f.alpha;
  cfg.n_grid = f.n_grid.data();
  cfg.n_grid_len = f.n_grid.size();
  cfg.reps = f.reps;
  cfg.master_seed = f.seed;
  cfg.workers = f.workers;
  cfg.mc_draws = f.mc_draws;
  otrim_rate_table* table = nullptr;
  if (otrim_status st = otrim_rates_run(&cfg, &table); st != OTRIM_OK) return fail(st);
  std::printf("rates  statistic=%s  d=%u  p=%g  alpha=%g  reps=%zu\n",
              statistic.c_str(), f.d, f.p, f.alpha, f.reps);
  for (size_t i = 0; i < otrim_rates_grid_len(table); ++i) {
    size_t n = 0, inc = 0;
    double mean = 0.0, se = 0.0;
    otrim_rates_summary(table, i, &n, &mean, &se, &inc);
    std::printf("n=%-8zu mean=%.10g  stderr=%.4g  included=%zu\n", n, mean, se, inc);
  }
  std::printf("slope  %.6f  (se %.6f)\n", otrim_rates_slope(table),
              otrim_rates_slope_se(table));
  int rc = 0;
  if (!f.out_dir.empty()) {
    if (otrim_status st = otrim_rates_emit(table, f.out_dir.c_str()); st != OTRIM_OK)
      rc = fail(st);
    else
      std::printf("report written to %s\n", f.out_dir.c_str());
  }
  otrim_rates_free(table);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"otrim — optimal incomplete (trimmed) transportation toolkit"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string statistic = "trim1d_cost";

  auto add_common = [&](CLI::App* cmd, bool with_grid) {
    cmd->add_option("--n", f.n, "sample size")->capture_default_str();
    cmd->add_option("--d", f.d, "dimension")->capture_default_str();
    cmd->add_option("--p", f.p, "cost exponent (>= 1)")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "trim level in [0,1)")->capture_default_str();
    cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
    cmd->add_option("--input-x", f.input_x, "CSV sample (overrides --seed sampling)");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--mc-draws", f.mc_draws, "Monte Carlo draws")->capture_default_str();
    if (with_grid) {
      cmd->add_option("--n-grid", f.n_grid, "comma-separated sample sizes")
          ->delimiter(',');
      cmd->add_option("--reps", f.reps, "replications per n")->capture_default_str();
      cmd->add_option("--workers", f.workers, "worker threads")->capture_default_str();
    }
  };

  CLI::App* trim = app.add_subcommand("trim1d", "1-d trimmed transport to U(0,1)");
  add_common(trim, false);
  CLI::App* match = app.add_subcommand("match", "incomplete matching of two samples");
  add_common(match, false);
  match->add_option("--input-y", f.input_y, "second CSV sample");
  CLI::App* stripe = app.add_subcommand("stripe", "stripe-construction transport bound");
  add_common(stripe, false);
  stripe->add_option("--method", f.method, "exact|mc")->capture_default_str();
  CLI::App* quant = app.add_subcommand("quantize", "random quantization cost");
  add_common(quant, false);
  quant->add_option("--method", f.method, "exact|mc")->capture_default_str();
  CLI::App* rates = app.add_subcommand("rates", "convergence-rate experiment");
  add_common(rates, true);
  rates->add_option("--statistic", statistic,
                    "trim1d_cost|untrimmed_1d_cost|partial_match|untrimmed_match|"
                    "stripe_bound|quantization")
      ->capture_default_str();
  CLI::App* self = app.add_subcommand("selftest", "oracle-equivalence suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (trim->parsed()) return run_trim1d(f);
  if (match->parsed()) return run_match(f);
  if (stripe->parsed()) return run_stripe(f);
  if (quant->parsed()) return run_quantize(f);
  if (rates->parsed()) {
    if (f.n_grid.empty()) {
      std::fprintf(stderr, "error: --n-grid is required\n");
      return 1;
    }
    return run_rates(f, statistic);
  }
  if (self->parsed()) {
    int passed = 0;
    if (otrim_status st = otrim_selftest(&passed); st != OTRIM_OK) return fail(st);
    std::printf(passed ? "selftest: all suites passed\n"
                       : "selftest: FAILURES detected\n");
    return passed ? 0 : 1;
  }
  return 1;
}
