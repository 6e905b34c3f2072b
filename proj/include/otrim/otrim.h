/* otrim — optimal incomplete (trimmed) transportation toolkit.
 *
 * C interface of the shared library: opaque handles, status codes, and a
 * thread-local error message. All functions returning otrim_status set the
 * message retrievable via otrim_last_error() on failure.
 */
#ifndef OTRIM_H
#define OTRIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum otrim_status {
  OTRIM_OK = 0,
  OTRIM_ERR_USAGE = 1,      /* bad arguments or violated preconditions */
  OTRIM_ERR_INFEASIBLE = 2, /* infeasible trimming / stripe plan */
  OTRIM_ERR_IO = 3,         /* file read/write failure */
  OTRIM_ERR_INTERNAL = 4
} otrim_status;

/* Message describing the most recent failure on this thread. */
const char* otrim_last_error(void);

/* ---- samples ---------------------------------------------------------- */

typedef struct otrim_sample otrim_sample;

/* n i.i.d. uniform points on [0,1]^d from the deterministic counter
 * generator; identical (n, d, seed) gives identical samples everywhere. */
otrim_status otrim_sample_uniform(size_t n, uint32_t d, uint64_t seed,
                                  otrim_sample** out);
otrim_status otrim_sample_read_csv(const char* path, otrim_sample** out);
otrim_status otrim_sample_write_csv(const otrim_sample* s, const char* path);
size_t otrim_sample_size(const otrim_sample* s);
uint32_t otrim_sample_dim(const otrim_sample* s);
void otrim_sample_free(otrim_sample* s);

/* ---- 1-d incomplete transportation ------------------------------------ */

typedef struct otrim_trim1d_result otrim_trim1d_result;

/* Exact cost W_p^p(R_alpha(P_n), U(0,1)) for a 1-d sample. tol <= 0 selects
 * the default solver tolerance (1e-9). */
otrim_status otrim_trim1d_solve(const otrim_sample* s, double alpha, double p,
                                double tol, otrim_trim1d_result** out);
double otrim_trim1d_cost(const otrim_trim1d_result* r);
double otrim_trim1d_lower_bound(const otrim_trim1d_result* r);
double otrim_trim1d_upper_bound(const otrim_trim1d_result* r);
int otrim_trim1d_refinements(const otrim_trim1d_result* r);
size_t otrim_trim1d_size(const otrim_trim1d_result* r);
/* Optimal trim vector h_1..h_{n-1}; len must be >= n-1. */
otrim_status otrim_trim1d_copy_h(const otrim_trim1d_result* r, double* buf, size_t len);
/* Envelope interiors (upper then lower), n-1 values each. */
otrim_status otrim_trim1d_copy_envelopes(const otrim_trim1d_result* r, double* upper,
                                         double* lower, size_t len);
void otrim_trim1d_free(otrim_trim1d_result* r);

/* ---- incomplete matching between two samples -------------------------- */

typedef struct otrim_matching_result otrim_matching_result;

/* T_{p,alpha}(n): keep m = n - floor(alpha n) points per side, optimal
 * pairing by min-cost flow. alpha = 0 is the classical matching. */
otrim_status otrim_match_solve(const otrim_sample* x, const otrim_sample* y,
                               double p, double alpha, otrim_matching_result** out);
double otrim_match_cost(const otrim_matching_result* r);
size_t otrim_match_pairs(const otrim_matching_result* r);
otrim_status otrim_match_copy_pairs(const otrim_matching_result* r, uint32_t* xs,
                                    uint32_t* ys, size_t len);
void otrim_match_free(otrim_matching_result* r);

/* ---- stripe construction (d >= 2 upper bound transport) ---------------- */

typedef enum otrim_stripe_method {
  OTRIM_STRIPE_EXACT = 0,      /* p = 2, d = 2 closed-form cells */
  OTRIM_STRIPE_QUADRATURE = 1, /* d = 2 tensor Gauss-Legendre */
  OTRIM_STRIPE_MC = 2          /* any d */
} otrim_stripe_method;

typedef struct otrim_stripe_report otrim_stripe_report;

otrim_status otrim_stripe_solve(const otrim_sample* s, double alpha, double p,
                                otrim_stripe_method method, size_t mc_draws,
                                uint64_t seed, otrim_stripe_report** out);
double otrim_stripe_cost(const otrim_stripe_report* r);
double otrim_stripe_upper_bound(const otrim_stripe_report* r);
double otrim_stripe_mc_std_error(const otrim_stripe_report* r);
uint32_t otrim_stripe_count(const otrim_stripe_report* r); /* top-level N */
void otrim_stripe_free(otrim_stripe_report* r);

/* ---- random quantization (alpha = 1 endpoint) -------------------------- */

typedef struct otrim_quantize_report {
  double cost;         /* integral of min_i ||x - X_i||^p */
  double scaled;       /* n^{p/d} * cost */
  double mc_std_error; /* 0 when exact */
  int exact;           /* 1 for the closed-form 1-d path */
} otrim_quantize_report;

/* use_mc != 0 forces Monte Carlo; d >= 2 always uses Monte Carlo. */
otrim_status otrim_quantize(const otrim_sample* s, double p, int use_mc,
                            size_t mc_draws, uint64_t seed,
                            otrim_quantize_report* out);
/* Limit of n^{p/d} E(cost): Gamma(1+p/d) * omega_d^{-p/d}. */
double otrim_quantization_constant(uint32_t d, double p);

/* ---- rate experiments -------------------------------------------------- */

typedef struct otrim_rates_config {
  const char* statistic; /* trim1d_cost | untrimmed_1d_cost | partial_match |
                            untrimmed_match | stripe_bound | quantization */
  uint32_t d;
  double p;
  double alpha;
  const size_t* n_grid;
  size_t n_grid_len;
  size_t reps;
  uint64_t master_seed;
  size_t workers;   /* 0 means one worker */
  size_t mc_draws;  /* Monte Carlo draws per replication where applicable */
} otrim_rates_config;

typedef struct otrim_rate_table otrim_rate_table;

otrim_status otrim_rates_run(const otrim_rates_config* cfg, otrim_rate_table** out);
double otrim_rates_slope(const otrim_rate_table* t);
double otrim_rates_slope_se(const otrim_rate_table* t);
size_t otrim_rates_grid_len(const otrim_rate_table* t);
otrim_status otrim_rates_summary(const otrim_rate_table* t, size_t idx, size_t* n,
                                 double* mean, double* std_error, size_t* n_included);
/* Writes rows.csv, summary.csv, slope.csv, plot.svg into dir. */
otrim_status otrim_rates_emit(const otrim_rate_table* t, const char* dir);
void otrim_rates_free(otrim_rate_table* t);

/* ---- self checks ------------------------------------------------------- */

/* Runs the oracle-equivalence suites, printing one line per suite to stdout.
 * Sets *passed to 1 when every suite passes. */
otrim_status otrim_selftest(int* passed);

#ifdef __cplusplus
}
#endif

#endif /* OTRIM_H */
