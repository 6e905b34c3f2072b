#include "core/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/harness.hpp"
#include "core/matching.hpp"
#include "core/quantize.hpp"
#include "core/rng.hpp"
#include "core/trim1d.hpp"
#include "core/wasserstein1d.hpp"

namespace otrim {

namespace {

bool matching_oracle_suite() {
  rng::Stream gen(0x5e1f7e57u);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + gen.next_u64() % 6;
    const std::uint32_t d = gen.next_u64() % 2 ? 2 : 1;
    const double p = gen.next_u64() % 2 ? 2.0 : 1.0;
    const double alpha = (trial % 3) * 0.25;
    MatchingProblem pr;
    pr.x = sample_uniform(n, d, gen.next_u64());
    pr.y = sample_uniform(n, d, gen.next_u64());
    pr.p = p;
    pr.alpha = alpha;
    const double flow = solve_partial_matching(pr).cost;
    const double brute = brute_force_partial_matching(pr);
    if (std::abs(flow - brute) > 1e-12) return false;
  }
  return true;
}

bool trim1d_oracle_suite() {
  rng::Stream gen(0x7a15c0deu);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + gen.next_u64() % 4;
    const double alpha = 0.1 + 0.8 * gen.next_unit();
    const double p = 1.0 + 2.0 * gen.next_unit();
    const SortedView v = sorted_view_1d(sample_uniform(n, 1, gen.next_u64()));
    const TrimParams params(alpha, p);
    const double solved = solve_trim1d(v.x, params).cost;
    const double brute = brute_force_trim1d(v.x, params, 201);
    if (std::abs(solved - brute) > 1e-4) return false;
  }
  return true;
}

bool envelope_suite() {
  rng::Stream gen(0xe57e10feu);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 2 + gen.next_u64() % 60;
    const double alpha = 0.05 + 0.9 * gen.next_unit();
    const SortedView v = sorted_view_1d(sample_uniform(n, 1, gen.next_u64()));
    const TrimParams params(alpha, 2.0);
    const Envelopes env = compute_envelopes(v.x, params);
    const double drift = 1.0 / (static_cast<double>(n) * (1.0 - alpha));
    const double floor_val = -alpha / (1.0 - alpha);
    // Literal max/min definitions, quadratic time.
    for (std::size_t i = 1; i <= n - 1; ++i) {
      double umax = floor_val;
      for (std::size_t j = i; j <= n - 1; ++j)
        umax = std::max(umax, 0.5 * (v.x[j - 1] + v.x[j]) - static_cast<double>(j) * drift);
      if (env.u[i] != umax) return false;
      double lmin = 0.0;
      for (std::size_t j = 1; j <= i; ++j)
        lmin = std::min(lmin, 0.5 * (v.x[j - 1] + v.x[j]) - static_cast<double>(j) * drift);
      const double expect = clamp(lmin, floor_val, 0.0) + static_cast<double>(i) * drift;
      if (std::abs(env.h_lower[i] - expect) > 1e-15) return false;
    }
    if (!validate_trim_vector(env.upper_trim(), params, n)) return false;
    if (!validate_trim_vector(env.lower_trim(), params, n)) return false;
  }
  return true;
}

bool quantization_suite() {
  rng::Stream gen(0x9u);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 4 + gen.next_u64() % 40;
    const Sample s = sample_uniform(n, 1, gen.next_u64());
    const SortedView v = sorted_view_1d(s);
    const QuantizationReport exact = quantization_cost_1d(v.x, 2.0);
    const QuantizationReport mc = quantization_cost_mc(s, 2.0, 40000, gen.next_u64());
    const double tol = 4.0 * *mc.mc_std_error + 1e-12;
    if (std::abs(exact.cost - mc.cost) > tol) return false;
  }
  return true;
}

}  // namespace

bool selftest(std::ostream& out) {
  struct Suite {
    const char* name;
    bool (*run)();
  };
  const Suite suites[] = {
      {"matching flow vs enumeration", &matching_oracle_suite},
      {"trim1d solver vs grid search", &trim1d_oracle_suite},
      {"envelope scans vs literal definitions", &envelope_suite},
      {"quantization MC vs closed form", &quantization_suite},
  };
  bool all = true;
  for (const Suite& s : suites) {
    const bool ok = s.run();
    out << (ok ? "[PASS] " : "[FAIL] ") << s.name << '\n';
    all = all && ok;
  }
  return all;
}

}  // namespace otrim
