#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/sample.hpp"

namespace otrim {

enum class Statistic {
  trim1d_cost,       // W_p^p(R_alpha(P_n), U(0,1)) by the exact 1-d solver
  untrimmed_1d_cost, // W_p^p(P_n, U(0,1)) closed form
  partial_match,     // T_{p,alpha}(n) between two independent samples
  untrimmed_match,   // T_p(n)
  stripe_bound,      // stripe-construction cost upper bound (d >= 2)
  quantization       // full-trimming cost (exact 1-d, Monte Carlo otherwise)
};

const char* statistic_name(Statistic s);
Statistic statistic_from_name(const std::string& name);

struct ExperimentConfig {
  Statistic statistic = Statistic::trim1d_cost;
  std::uint32_t d = 1;
  double p = 2.0;
  double alpha = 0.1;
  std::vector<std::size_t> n_grid;  // strictly increasing
  std::size_t reps = 100;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::size_t mc_draws = 100000;
};

struct RateRow {
  std::size_t n = 0;
  std::size_t rep = 0;
  double value = 0.0;
  bool excluded = false;
};

struct RateSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_included = 0;
};

struct RateTable {
  ExperimentConfig config;
  std::vector<RateRow> rows;          // (n, rep) in grid-major, rep-minor order
  std::vector<RateSummary> summary;   // one per n, exclusion-conditional means
  double slope = 0.0;                 // OLS slope of log(mean) vs log(n)
  double slope_se = 0.0;
};

// Deterministic uniform sample on [0,1]^d: pure function of (n, d, seed).
Sample sample_uniform(std::size_t n, std::uint32_t d, std::uint64_t seed);

// Replication seed for (master_seed, n, rep); exposed so single runs can be
// reproduced outside the experiment loop.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t rep);

// Runs reps x |n_grid| independent replications in a worker pool and fits the
// log-log slope on the per-n means. Output is byte-identical for any worker
// count: results land in slots keyed by (n, rep) and are aggregated in that
// order.
RateTable run_experiment(const ExperimentConfig& config);

// OLS on (log n, log mean); standard error from the residuals. Needs at least
// three points and positive means.
std::pair<double, double> fit_loglog_slope(
    const std::vector<std::pair<double, double>>& n_and_mean);

// Writes rows.csv, summary.csv, slope.csv and plot.svg into `dir`.
// Fails before creating any file when the table is empty.
void emit_report(const RateTable& table, const std::string& dir);

}  // namespace otrim
