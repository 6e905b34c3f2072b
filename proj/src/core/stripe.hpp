#pragma once

#include <cstdint>
#include <vector>

#include "core/sample.hpp"
#include "core/trim1d.hpp"

namespace otrim {

// One node of the slab decomposition. Internal nodes split their cell into N
// slabs of width 1/N along one coordinate; leaves carry a trimmed 1-d
// transport on the last coordinate whose level sets select the target point.
struct StripeNode {
  std::uint32_t N = 0;               // 0 marks a leaf
  std::vector<StripeNode> children;  // size N when internal
  std::vector<std::uint32_t> counts; // points per slab (internal)
  // Leaf payload: member points sorted by the solve coordinate and the
  // cumulative trim weights h_0..h_k bounding each level set.
  std::vector<std::uint32_t> members;
  std::vector<double> breaks;
  double cost1d = 0.0;

  bool feasible = true;    // min-count condition here and below
  double upper = 0.0;      // telescoped cost bound for this subtree
  double max_mass = 0.0;   // largest atom mass of the induced map
};

struct StripePlan {
  Sample sample;
  TrimParams params;
  StripeNode root;
  std::vector<std::uint32_t> stripe_of;  // top-level stripe index per point, 1-based
  double min_count_threshold = 0.0;      // (n/N) * (1-alpha)/(1-alpha/2)

  std::uint32_t stripes() const { return root.N; }
  bool feasible() const { return root.feasible; }
};

enum class StripeCostMethod { exact, quadrature, monte_carlo };

struct StripeCostReport {
  double cost = 0.0;         // integral of ||x - phi(x)||^p, by the chosen method
  double upper_bound = 0.0;  // 2^{p-1}/N^p + (2^{p-1}/N) sum_i (1-d costs)
  StripeCostMethod method = StripeCostMethod::exact;
  double mc_std_error = 0.0;  // zero unless monte_carlo
  bool feasible = true;
};

// d = 2 construction: N = floor(sqrt(n)) stripes on the first coordinate, an
// alpha/2-trimmed 1-d solve on the second coordinate inside each stripe.
// Requires n >= 4 and alpha in (0,1). Infeasible plans are returned with the
// flag down, never silently repaired.
StripePlan build_stripe_plan(const Sample& sample, const TrimParams& params);

// Cost of the plan's transport map. `exact` integrates the p = 2 case in
// closed form per cell; `quadrature` runs tensor Gauss-Legendre per cell
// (d = 2 only); `monte_carlo` works in any dimension.
StripeCostReport stripe_cost(const StripePlan& plan, double p,
                             StripeCostMethod method, std::size_t n_mc = 100000,
                             std::uint64_t seed = 0);

// d >= 3: recursive slab split, N = floor(n_cell^{1/k}) with k dimensions
// remaining, trim budget halved per level, innermost level solved by trim1d.
// `level` is the recursion depth this call starts at (the trim budget seen
// here is alpha / 2^level).
StripeCostReport stripe_cost_recursive(const Sample& sample, const TrimParams& params,
                                       std::uint32_t level = 0,
                                       std::size_t n_mc = 100000,
                                       std::uint64_t seed = 0);

// Plan construction for d >= 3 (exposed for tests and diagnostics).
StripePlan build_stripe_plan_recursive(const Sample& sample, const TrimParams& params,
                                       std::uint32_t level = 0);

}  // namespace otrim
