#include "otrim/otrim.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "core/harness.hpp"
#include "core/matching.hpp"
#include "core/quantize.hpp"
#include "core/selftest.hpp"
#include "core/stripe.hpp"
#include "core/trim1d.hpp"

namespace {

thread_local std::string g_last_error;

otrim_status to_status(const otrim::error& e) {
  switch (e.kind()) {
    case otrim::errc::usage:
    case otrim::errc::dimension:
    case otrim::errc::precondition:
    case otrim::errc::measure:
      return OTRIM_ERR_USAGE;
    case otrim::errc::feasibility:
      return OTRIM_ERR_INFEASIBLE;
    case otrim::errc::io:
      return OTRIM_ERR_IO;
    case otrim::errc::internal:
      return OTRIM_ERR_INTERNAL;
  }
  return OTRIM_ERR_INTERNAL;
}

template <typename Fn>
otrim_status guard(Fn&& fn) {
  try {
    fn();
    return OTRIM_OK;
  } catch (const otrim::error& e) {
    g_last_error = e.what();
    return to_status(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OTRIM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OTRIM_ERR_INTERNAL;
  }
}

}  // namespace

struct otrim_sample {
  otrim::Sample s;
};

struct otrim_trim1d_result {
  otrim::TrimSolve1DResult r;
  otrim::Envelopes env;
  size_t n;
};

struct otrim_matching_result {
  otrim::MatchingResult r;
};

struct otrim_stripe_report {
  otrim::StripeCostReport r;
  uint32_t stripes;
};

struct otrim_rate_table {
  otrim::RateTable t;
};

extern "C" {

const char* otrim_last_error(void) { return g_last_error.c_str(); }

otrim_status otrim_sample_uniform(size_t n, uint32_t d, uint64_t seed,
                                  otrim_sample** out) {
  return guard([&] { *out = new otrim_sample{otrim::sample_uniform(n, d, seed)}; });
}

otrim_status otrim_sample_read_csv(const char* path, otrim_sample** out) {
  return guard([&] { *out = new otrim_sample{otrim::read_sample_csv(path)}; });
}

otrim_status otrim_sample_write_csv(const otrim_sample* s, const char* path) {
  return guard([&] { otrim::write_sample_csv(s->s, path); });
}

size_t otrim_sample_size(const otrim_sample* s) { return s->s.size(); }
uint32_t otrim_sample_dim(const otrim_sample* s) { return s->s.dim; }
void otrim_sample_free(otrim_sample* s) { delete s; }

otrim_status otrim_trim1d_solve(const otrim_sample* s, double alpha, double p,
                                double tol, otrim_trim1d_result** out) {
  return guard([&] {
    const otrim::TrimParams params(alpha, p);
    const otrim::SortedView v = otrim::sorted_view_1d(s->s);
    auto* res = new otrim_trim1d_result;
    res->n = v.x.size();
    res->r = otrim::solve_trim1d(v.x, params, tol > 0 ? tol : 1e-9);
    res->env = otrim::compute_envelopes(v.x, params);
    *out = res;
  });
}

double otrim_trim1d_cost(const otrim_trim1d_result* r) { return r->r.cost; }
double otrim_trim1d_lower_bound(const otrim_trim1d_result* r) { return r->r.lower_bound; }
double otrim_trim1d_upper_bound(const otrim_trim1d_result* r) { return r->r.upper_bound; }
int otrim_trim1d_refinements(const otrim_trim1d_result* r) { return r->r.refinements; }
size_t otrim_trim1d_size(const otrim_trim1d_result* r) { return r->n; }

otrim_status otrim_trim1d_copy_h(const otrim_trim1d_result* r, double* buf, size_t len) {
  return guard([&] {
    if (len < r->n - 1)
      throw otrim::error(otrim::errc::dimension, "buffer too small for n-1 values");
    std::memcpy(buf, r->r.h_opt.h.data(), (r->n - 1) * sizeof(double));
  });
}

otrim_status otrim_trim1d_copy_envelopes(const otrim_trim1d_result* r, double* upper,
                                         double* lower, size_t len) {
  return guard([&] {
    if (len < r->n - 1)
      throw otrim::error(otrim::errc::dimension, "buffer too small for n-1 values");
    for (size_t i = 1; i < r->n; ++i) {
      upper[i - 1] = r->env.h_bar[i];
      lower[i - 1] = r->env.h_lower[i];
    }
  });
}

void otrim_trim1d_free(otrim_trim1d_result* r) { delete r; }

otrim_status otrim_match_solve(const otrim_sample* x, const otrim_sample* y, double p,
                               double alpha, otrim_matching_result** out) {
  return guard([&] {
    otrim::MatchingProblem pr;
    pr.x = x->s;
    pr.y = y->s;
    pr.p = p;
    pr.alpha = alpha;
    *out = new otrim_matching_result{otrim::solve_partial_matching(pr)};
  });
}

double otrim_match_cost(const otrim_matching_result* r) { return r->r.cost; }
size_t otrim_match_pairs(const otrim_matching_result* r) { return r->r.pairing.size(); }

otrim_status otrim_match_copy_pairs(const otrim_matching_result* r, uint32_t* xs,
                                    uint32_t* ys, size_t len) {
  return guard([&] {
    if (len < r->r.pairing.size())
      throw otrim::error(otrim::errc::dimension, "buffer too small for pairing");
    for (size_t k = 0; k < r->r.pairing.size(); ++k) {
      xs[k] = r->r.pairing[k].first;
      ys[k] = r->r.pairing[k].second;
    }
  });
}

void otrim_match_free(otrim_matching_result* r) { delete r; }

otrim_status otrim_stripe_solve(const otrim_sample* s, double alpha, double p,
                                otrim_stripe_method method, size_t mc_draws,
                                uint64_t seed, otrim_stripe_report** out) {
  return guard([&] {
    const otrim::TrimParams params(alpha, p);
    const otrim::StripePlan plan =
        s->s.dim == 2 ? otrim::build_stripe_plan(s->s, params)
                      : otrim::build_stripe_plan_recursive(s->s, params);
    auto m = otrim::StripeCostMethod::monte_carlo;
    if (method == OTRIM_STRIPE_EXACT) m = otrim::StripeCostMethod::exact;
    if (method == OTRIM_STRIPE_QUADRATURE) m = otrim::StripeCostMethod::quadrature;
    const otrim::StripeCostReport rep =
        otrim::stripe_cost(plan, p, m, mc_draws ? mc_draws : 100000, seed);
    *out = new otrim_stripe_report{rep, plan.stripes()};
  });
}

double otrim_stripe_cost(const otrim_stripe_report* r) { return r->r.cost; }
double otrim_stripe_upper_bound(const otrim_stripe_report* r) { return r->r.upper_bound; }
double otrim_stripe_mc_std_error(const otrim_stripe_report* r) { return r->r.mc_std_error; }
uint32_t otrim_stripe_count(const otrim_stripe_report* r) { return r->stripes; }
void otrim_stripe_free(otrim_stripe_report* r) { delete r; }

otrim_status otrim_quantize(const otrim_sample* s, double p, int use_mc,
                            size_t mc_draws, uint64_t seed,
                            otrim_quantize_report* out) {
  return guard([&] {
    otrim::QuantizationReport rep;
    if (s->s.dim == 1 && !use_mc) {
      const otrim::SortedView v = otrim::sorted_view_1d(s->s);
      rep = otrim::quantization_cost_1d(v.x, p);
    } else {
      rep = otrim::quantization_cost_mc(s->s, p, mc_draws ? mc_draws : 100000, seed);
    }
    out->cost = rep.cost;
    out->scaled = rep.scaled;
    out->mc_std_error = rep.mc_std_error.value_or(0.0);
    out->exact = rep.exact ? 1 : 0;
  });
}

double otrim_quantization_constant(uint32_t d, double p) {
  try {
    return otrim::quantization_constant(d, p);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return -1.0;
  }
}

otrim_status otrim_rates_run(const otrim_rates_config* cfg, otrim_rate_table** out) {
  return guard([&] {
    otrim::ExperimentConfig c;
    c.statistic = otrim::statistic_from_name(cfg->statistic ? cfg->statistic : "");
    c.d = cfg->d;
    c.p = cfg->p;
    c.alpha = cfg->alpha;
    c.n_grid.assign(cfg->n_grid, cfg->n_grid + cfg->n_grid_len);
    c.reps = cfg->reps;
    c.master_seed = cfg->master_seed;
    c.workers = cfg->workers ? cfg->workers : 1;
    c.mc_draws = cfg->mc_draws ? cfg->mc_draws : 100000;
    *out = new otrim_rate_table{otrim::run_experiment(c)};
  });
}

double otrim_rates_slope(const otrim_rate_table* t) { return t->t.slope; }
double otrim_rates_slope_se(const otrim_rate_table* t) { return t->t.slope_se; }
size_t otrim_rates_grid_len(const otrim_rate_table* t) { return t->t.summary.size(); }

otrim_status otrim_rates_summary(const otrim_rate_table* t, size_t idx, size_t* n,
                                 double* mean, double* std_error, size_t* n_included) {
  return guard([&] {
    if (idx >= t->t.summary.size())
      throw otrim::error(otrim::errc::usage, "summary index out of range");
    const otrim::RateSummary& s = t->t.summary[idx];
    if (n) *n = s.n;
    if (mean) *mean = s.mean;
    if (std_error) *std_error = s.std_error;
    if (n_included) *n_included = s.n_included;
  });
}

otrim_status otrim_rates_emit(const otrim_rate_table* t, const char* dir) {
  return guard([&] { otrim::emit_report(t->t, dir); });
}

void otrim_rates_free(otrim_rate_table* t) { delete t; }

otrim_status otrim_selftest(int* passed) {
  return guard([&] {
    const bool ok = otrim::selftest(std::cout);
    if (passed) *passed = ok ? 1 : 0;
  });
}

}  // extern "C"
