#include "core/stripe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/rng.hpp"

namespace otrim {

namespace {

std::uint32_t slab_index(double coord, std::uint32_t N) {
  // Half-open stripes ((i-1)/N, i/N]; coord 0 belongs to stripe 1.
  const double scaled = coord * static_cast<double>(N);
  auto idx = static_cast<std::int64_t>(std::ceil(scaled - 1e-12));
  if (idx < 1) idx = 1;
  if (idx > static_cast<std::int64_t>(N)) idx = N;
  return static_cast<std::uint32_t>(idx);
}

// Sorts the solve coordinate inside a cell, separating ties like the 1-d view.
void sorted_cell(const Sample& sample, const std::vector<std::uint32_t>& members,
                 std::uint32_t axis, std::vector<std::uint32_t>& order,
                 std::vector<double>& coords) {
  order = members;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return sample.at(a, axis) < sample.at(b, axis);
  });
  coords.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) coords[k] = sample.at(order[k], axis);
  for (std::size_t k = 1; k < coords.size(); ++k)
    if (coords[k] <= coords[k - 1]) coords[k] = coords[k - 1] + kTieStep;
  if (!coords.empty() && coords.back() > 1.0) {
    coords.back() = 1.0;
    for (std::size_t k = coords.size() - 1; k-- > 0;)
      if (coords[k] >= coords[k + 1]) coords[k] = coords[k + 1] - kTieStep;
  }
}

// Builds the subtree for `members` with `k` coordinates left, splitting on
// `axis` and trimming at `beta`. Infeasibility is recorded, not repaired.
StripeNode build_node(const Sample& sample, const std::vector<std::uint32_t>& members,
                      std::uint32_t axis, std::uint32_t k, double beta, double p) {
  StripeNode node;
  const std::size_t n_cell = members.size();
  if (k == 1) {
    std::vector<double> coords;
    sorted_cell(sample, members, axis, node.members, coords);
    node.breaks.assign(n_cell + 1, 0.0);
    if (n_cell == 0) {
      node.feasible = false;
      return node;
    }
    const TrimParams leaf_params(beta, p);
    const TrimSolve1DResult sol = solve_trim1d(coords, leaf_params);
    node.cost1d = sol.cost;
    node.upper = sol.cost;
    node.max_mass = 0.0;
    for (std::size_t l = 1; l <= n_cell; ++l) {
      node.breaks[l] = sol.h_opt.at(l);
      node.max_mass = std::max(node.max_mass, node.breaks[l] - node.breaks[l - 1]);
    }
    return node;
  }

  const auto N = static_cast<std::uint32_t>(
      std::floor(std::pow(static_cast<double>(n_cell), 1.0 / static_cast<double>(k)) +
                 1e-9));
  node.N = std::max<std::uint32_t>(N, 1);
  std::vector<std::vector<std::uint32_t>> slabs(node.N);
  for (std::uint32_t idx : members)
    slabs[slab_index(sample.at(idx, axis), node.N) - 1].push_back(idx);

  node.counts.resize(node.N);
  const double A = (1.0 - beta) / (1.0 - 0.5 * beta);
  const double threshold = static_cast<double>(n_cell) / node.N * A;
  node.feasible = true;
  node.max_mass = 0.0;
  double child_upper_sum = 0.0;
  for (std::uint32_t i = 0; i < node.N; ++i) {
    node.counts[i] = static_cast<std::uint32_t>(slabs[i].size());
    if (static_cast<double>(node.counts[i]) < threshold - 1e-12) node.feasible = false;
    StripeNode child = build_node(sample, slabs[i], axis + 1, k - 1, 0.5 * beta, p);
    if (!child.feasible) node.feasible = false;
    child_upper_sum += child.upper;
    node.max_mass = std::max(node.max_mass, child.max_mass / node.N);
    node.children.push_back(std::move(child));
  }
  const double np = static_cast<double>(node.N);
  node.upper = std::pow(2.0, p - 1.0) * (1.0 / std::pow(np, p) + child_upper_sum / np);
  return node;
}

// Follows the slab decomposition down to the target point of x.
std::uint32_t map_point(const StripeNode& node, const Sample& sample, const double* x,
                        std::uint32_t axis) {
  if (node.N == 0) {
    const double t = x[axis];
    const auto it = std::lower_bound(node.breaks.begin() + 1, node.breaks.end(), t);
    auto l = static_cast<std::size_t>(it - (node.breaks.begin() + 1));
    if (l >= node.members.size()) l = node.members.size() - 1;
    return node.members[l];
  }
  const std::uint32_t i = slab_index(x[axis], node.N);
  return map_point(node.children[i - 1], sample, x, axis + 1);
}

double pow_int_quadratic(double lo, double hi, double a) {
  // int_lo^hi (s-a)^2 ds
  const double u = hi - a, l = lo - a;
  return (u * u * u - l * l * l) / 3.0;
}

// Nodes and weights of the k-point Gauss-Legendre rule on [-1,1], by Newton
// iteration on the Legendre recurrence.
void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(k);
  weights.resize(k);
  auto legendre = [k](double t, double& pk, double& dpk) {
    double pm1 = 1.0;
    pk = t;
    for (int j = 2; j <= k; ++j) {
      const double pj = ((2.0 * j - 1.0) * t * pk - (j - 1.0) * pm1) / j;
      pm1 = pk;
      pk = pj;
    }
    dpk = k * (t * pk - pm1) / (t * t - 1.0);
  };
  for (int i = 0; i < k; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double pk = 0.0, dpk = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(t, pk, dpk);
      const double step = pk / dpk;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    legendre(t, pk, dpk);
    nodes[i] = t;
    weights[i] = 2.0 / ((1.0 - t * t) * dpk * dpk);
  }
}

// Depth of the shallowest node whose local min-count condition fails, or -1.
int find_fail_level(const StripeNode& node, std::uint32_t level, double beta) {
  if (node.N == 0)
    return node.feasible ? -1 : static_cast<int>(level);
  std::size_t n_cell = 0;
  for (auto c : node.counts) n_cell += c;
  const double A = (1.0 - beta) / (1.0 - 0.5 * beta);
  const double threshold = static_cast<double>(n_cell) / node.N * A;
  for (auto c : node.counts)
    if (static_cast<double>(c) < threshold - 1e-12) return static_cast<int>(level);
  for (const auto& ch : node.children) {
    const int r = find_fail_level(ch, level + 1, 0.5 * beta);
    if (r >= 0) return r;
  }
  return -1;
}

}  // namespace

StripePlan build_stripe_plan_recursive(const Sample& sample, const TrimParams& params,
                                       std::uint32_t level) {
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw error(errc::usage, "stripe construction needs alpha in (0,1)");
  const double beta = params.alpha / std::pow(2.0, static_cast<double>(level));
  std::vector<std::uint32_t> all(sample.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);

  StripePlan plan;
  plan.sample = sample;
  plan.params = params;
  plan.root = build_node(sample, all, 0, sample.dim, beta, params.p);
  plan.stripe_of.resize(sample.size());
  if (plan.root.N > 0) {
    for (std::size_t i = 0; i < sample.size(); ++i)
      plan.stripe_of[i] = slab_index(sample.at(i, 0), plan.root.N);
    const double A = (1.0 - beta) / (1.0 - 0.5 * beta);
    plan.min_count_threshold =
        static_cast<double>(sample.size()) / plan.root.N * A;
  }
  return plan;
}

StripePlan build_stripe_plan(const Sample& sample, const TrimParams& params) {
  if (sample.dim != 2) throw error(errc::dimension, "stripe plan requires d = 2");
  if (sample.size() < 4) throw error(errc::precondition, "stripe plan requires n >= 4");
  return build_stripe_plan_recursive(sample, params, 0);
}

StripeCostReport stripe_cost(const StripePlan& plan, double p, StripeCostMethod method,
                             std::size_t n_mc, std::uint64_t seed) {
  if (p != plan.params.p)
    throw error(errc::usage, "cost exponent must match the plan's trim solves");
  StripeCostReport rep;
  rep.method = method;
  rep.feasible = plan.feasible();
  rep.upper_bound = plan.root.upper;
  if (!plan.feasible())
    throw error(errc::feasibility,
                "stripe plan infeasible; exclude the instance or retrim with larger n");

  const Sample& s = plan.sample;
  if (method == StripeCostMethod::monte_carlo) {
    double sum = 0.0, sum2 = 0.0;
    rng::Stream stream(seed);
    std::vector<double> x(s.dim);
    for (std::size_t t = 0; t < n_mc; ++t) {
      for (std::uint32_t k = 0; k < s.dim; ++k) x[k] = stream.next_unit();
      const std::uint32_t j = map_point(plan.root, s, x.data(), 0);
      double d2 = 0.0;
      for (std::uint32_t k = 0; k < s.dim; ++k) {
        const double d = x[k] - s.at(j, k);
        d2 += d * d;
      }
      const double v = p == 2.0 ? d2 : std::pow(d2, 0.5 * p);
      sum += v;
      sum2 += v * v;
    }
    rep.cost = sum / static_cast<double>(n_mc);
    const double var =
        std::max(0.0, sum2 / static_cast<double>(n_mc) - rep.cost * rep.cost);
    rep.mc_std_error = std::sqrt(var / static_cast<double>(n_mc));
    return rep;
  }

  if (s.dim != 2)
    throw error(errc::usage, "exact/quadrature stripe cost implemented for d = 2");
  const std::uint32_t N = plan.root.N;

  std::vector<double> gl_nodes, gl_weights;
  if (method == StripeCostMethod::quadrature) gauss_legendre(12, gl_nodes, gl_weights);

  double total = 0.0;
  for (std::uint32_t i = 0; i < N; ++i) {
    const StripeNode& leaf = plan.root.children[i];
    const double u_lo = static_cast<double>(i) / N;
    const double u_hi = static_cast<double>(i + 1) / N;
    for (std::size_t l = 0; l < leaf.members.size(); ++l) {
      const double t_lo = leaf.breaks[l], t_hi = leaf.breaks[l + 1];
      if (t_hi - t_lo <= 0.0) continue;
      const std::uint32_t j = leaf.members[l];
      const double a = s.at(j, 0), b = s.at(j, 1);
      if (method == StripeCostMethod::exact) {
        if (p != 2.0) throw error(errc::usage, "exact stripe cost requires p = 2");
        total += (t_hi - t_lo) * pow_int_quadratic(u_lo, u_hi, a) +
                 (u_hi - u_lo) * pow_int_quadratic(t_lo, t_hi, b);
      } else {
        const double su = 0.5 * (u_hi - u_lo), cu = 0.5 * (u_hi + u_lo);
        const double st = 0.5 * (t_hi - t_lo), ct = 0.5 * (t_hi + t_lo);
        double cell = 0.0;
        for (std::size_t qa = 0; qa < gl_nodes.size(); ++qa)
          for (std::size_t qb = 0; qb < gl_nodes.size(); ++qb) {
            const double uu = cu + su * gl_nodes[qa];
            const double tt = ct + st * gl_nodes[qb];
            const double d2 = (uu - a) * (uu - a) + (tt - b) * (tt - b);
            cell += gl_weights[qa] * gl_weights[qb] *
                    (p == 2.0 ? d2 : std::pow(d2, 0.5 * p));
          }
        total += cell * su * st;
      }
    }
  }
  rep.cost = total;
  return rep;
}

StripeCostReport stripe_cost_recursive(const Sample& sample, const TrimParams& params,
                                       std::uint32_t level, std::size_t n_mc,
                                       std::uint64_t seed) {
  if (sample.dim < 3)
    throw error(errc::dimension, "recursive stripe cost is for d >= 3");
  const StripePlan plan = build_stripe_plan_recursive(sample, params, level);
  if (!plan.feasible()) {
    const double beta = params.alpha / std::pow(2.0, static_cast<double>(level));
    const int lvl = find_fail_level(plan.root, level, beta);
    throw error(errc::feasibility,
                "stripe recursion infeasible at level " + std::to_string(lvl));
  }
  return stripe_cost(plan, params.p, StripeCostMethod::monte_carlo, n_mc, seed);
}

}  // namespace otrim
