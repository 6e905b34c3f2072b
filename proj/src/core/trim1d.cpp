#include "core/trim1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPoints = 64;
constexpr int kMaxRefinements = 40;

void check_sorted_strict(const std::vector<double>& x) {
  if (x.empty()) throw error(errc::precondition, "empty sample");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0))
      throw error(errc::precondition, "points must lie in [0,1]");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw error(errc::precondition, "points must be strictly increasing");
  }
}

}  // namespace

TrimVector Envelopes::upper_trim() const {
  return TrimVector{{h_bar.begin() + 1, h_bar.end() - 1}};
}

TrimVector Envelopes::lower_trim() const {
  return TrimVector{{h_lower.begin() + 1, h_lower.end() - 1}};
}

TrimVector Envelopes::midpoint_trim() const {
  TrimVector t;
  t.h.resize(h_bar.size() - 2);
  for (std::size_t i = 1; i + 1 < h_bar.size(); ++i)
    t.h[i - 1] = 0.5 * (h_bar[i] + h_lower[i]);
  return t;
}

Envelopes compute_envelopes(const std::vector<double>& x, const TrimParams& params) {
  check_sorted_strict(x);
  const std::size_t n = x.size();
  const double dn = static_cast<double>(n);
  Envelopes e;
  e.u.assign(n + 1, 0.0);
  e.f_bar.assign(n + 1, 0.0);
  e.h_bar.assign(n + 1, 0.0);
  e.h_lower.assign(n + 1, 0.0);

  if (params.alpha == 0.0) {
    for (std::size_t i = 0; i <= n; ++i) {
      e.h_bar[i] = e.h_lower[i] = static_cast<double>(i) / dn;
      e.f_bar[i] = 0.0;
      e.u[i] = 0.0;
    }
    e.u[n] = e.f_bar[n] = 0.0;
    return e;
  }

  const double drift = 1.0 / (dn * (1.0 - params.alpha));  // per-index quantile budget
  const double floor_val = -params.alpha / (1.0 - params.alpha);
  auto midrank_excess = [&](std::size_t j) {  // s_j = (x_j + x_{j+1})/2 - j * drift
    return 0.5 * (x[j - 1] + x[j]) - static_cast<double>(j) * drift;
  };

  // u_i = max_{i<=j<=n-1} s_j, floored; backward scan.
  e.u[n] = floor_val;
  e.f_bar[n] = floor_val;
  double running_max = floor_val;
  for (std::size_t i = n; i-- >= 1;) {
    if (i == 0) break;
    if (i <= n - 1) running_max = std::max(running_max, midrank_excess(i));
    e.u[i] = running_max;
    e.f_bar[i] = std::min(e.u[i], 0.0);
  }
  e.f_bar[0] = 0.0;

  // Mirror: lowest values seen so far, clamped into [floor_val, 0].
  double running_min = 0.0;
  std::vector<double> f_low(n + 1, 0.0);
  f_low[0] = 0.0;
  f_low[n] = floor_val;
  for (std::size_t i = 1; i <= n - 1; ++i) {
    running_min = std::min(running_min, midrank_excess(i));
    f_low[i] = clamp(running_min, floor_val, 0.0);
  }

  for (std::size_t i = 0; i <= n; ++i) {
    const double base = static_cast<double>(i) * drift;
    e.h_bar[i] = e.f_bar[i] + base;
    e.h_lower[i] = f_low[i] + base;
  }
  e.h_bar[0] = e.h_lower[0] = 0.0;
  e.h_bar[n] = e.h_lower[n] = 1.0;

  for (std::size_t i = 0; i <= n; ++i)
    if (e.h_lower[i] > e.h_bar[i] + kFeasTol)
      throw error(errc::internal, "envelope band is empty");
  return e;
}

TrimVector project_to_band_chain(const std::vector<double>& target,
                                 const Envelopes& env, double cap) {
  const std::size_t n = env.h_bar.size() - 1;
  TrimVector t;
  t.h.resize(n - 1);
  double prev = 0.0;
  for (std::size_t i = 1; i <= n - 1; ++i) {
    const double lo = std::max(prev, env.h_lower[i]);
    const double hi = std::min(prev + cap, env.h_bar[i]);
    if (lo > hi + kFeasTol)
      throw error(errc::internal, "band-chain projection has an empty window");
    prev = clamp(target[i - 1], lo, std::max(lo, hi));
    t.h[i - 1] = prev;
  }
  return t;
}

namespace {

struct Stage {
  std::vector<double> grid;   // sorted candidate states
  std::vector<double> value;  // DP cost-to-come
  std::vector<int> parent;
};

// One DP sweep over per-stage candidate grids with exact chain windows
// [prev, prev + cap]. Returns the best feasible path and its gap-cost sum,
// or infinity when no grid path is feasible (cannot happen once the
// incumbent path is injected into the grids).
double dp_sweep(const Objective1D& obj, double cap, std::vector<Stage>& stages,
                std::vector<double>& path) {
  const std::size_t k = stages.size();  // = n-1 free coordinates
  const double slack = kFeasTol;
  for (std::size_t i = 0; i < k; ++i) {
    Stage& st = stages[i];
    const std::size_t m = st.grid.size();
    st.value.assign(m, kInf);
    st.parent.assign(m, -1);
    if (i == 0) {
      for (std::size_t a = 0; a < m; ++a) {
        const double h = st.grid[a];
        if (h >= -slack && h <= cap + slack) st.value[a] = obj.gap_cost(0, h);
      }
      continue;
    }
    const Stage& pr = stages[i - 1];
    // Window [h-cap, h] over the sorted predecessor grid: sliding minimum.
    std::size_t lo = 0, hi = 0;  // candidate range [lo, hi)
    std::vector<std::size_t> deque_idx;
    deque_idx.reserve(pr.grid.size());
    std::size_t head = 0;
    for (std::size_t a = 0; a < m; ++a) {
      const double h = st.grid[a];
      const double wlo = h - cap - slack, whi = h + slack;
      while (hi < pr.grid.size() && pr.grid[hi] <= whi) {
        while (deque_idx.size() > head &&
               pr.value[deque_idx.back()] >= pr.value[hi])
          deque_idx.pop_back();
        deque_idx.push_back(hi);
        ++hi;
      }
      while (lo < hi && pr.grid[lo] < wlo) {
        if (deque_idx.size() > head && deque_idx[head] == lo) ++head;
        ++lo;
      }
      if (deque_idx.size() > head) {
        const std::size_t b = deque_idx[head];
        if (pr.value[b] < kInf) {
          st.value[a] = pr.value[b] + obj.gap_cost(i, h);
          st.parent[a] = static_cast<int>(b);
        }
      }
    }
  }
  // Terminal constraint: 1 - h_{n-1} within [0, cap].
  const Stage& last = stages.back();
  double best = kInf;
  int arg = -1;
  for (std::size_t a = 0; a < last.grid.size(); ++a) {
    const double h = last.grid[a];
    if (h <= 1.0 + slack && h >= 1.0 - cap - slack && last.value[a] < best) {
      best = last.value[a];
      arg = static_cast<int>(a);
    }
  }
  if (arg < 0) return kInf;
  path.resize(k);
  for (std::size_t i = k; i-- > 0;) {
    path[i] = stages[i].grid[static_cast<std::size_t>(arg)];
    arg = stages[i].parent[static_cast<std::size_t>(arg)];
  }
  return best;
}

}  // namespace

TrimSolve1DResult solve_trim1d(const std::vector<double>& x, const TrimParams& params,
                               double tol) {
  check_sorted_strict(x);
  if (!(tol > 0.0)) throw error(errc::usage, "tol must be positive");
  const std::size_t n = x.size();
  const Objective1D obj = objective_terms(x, params.p);
  const auto [vlow, vup] = sandwich_bounds(x, params);

  TrimSolve1DResult res;
  res.lower_bound = vlow;
  res.upper_bound = vup;
  res.grid_points = kGridPoints;

  if (n == 1) {  // no free coordinates
    res.cost = obj.v_n();
    return res;
  }
  if (params.alpha == 0.0) {  // C_{0,n} is the single point h_i = i/n
    res.h_opt.h.resize(n - 1);
    for (std::size_t i = 1; i <= n - 1; ++i)
      res.h_opt.h[i - 1] = static_cast<double>(i) / static_cast<double>(n);
    res.cost = w_p_empirical_to_uniform(x, params.p);
    return res;
  }

  const Envelopes env = compute_envelopes(x, params);
  const double cap = params.cap(n);
  TrimVector incumbent = project_to_band_chain(obj.midpoints, env, cap);
  double best = obj.cost(incumbent);

  std::vector<double> band_lo(n - 1), band_hi(n - 1);
  for (std::size_t i = 0; i < n - 1; ++i) {
    band_lo[i] = env.h_lower[i + 1];
    band_hi[i] = env.h_bar[i + 1];
  }

  std::vector<Stage> stages(n - 1);
  std::vector<double> path;
  double prev_val = kInf;
  int round = 0;
  for (; round < kMaxRefinements; ++round) {
    for (std::size_t i = 0; i < n - 1; ++i) {
      auto& g = stages[i].grid;
      g.clear();
      const double lo = band_lo[i], hi = band_hi[i];
      if (hi - lo < 1e-15) {
        g.push_back(lo);
      } else {
        const double step = (hi - lo) / (kGridPoints - 1);
        for (int a = 0; a < kGridPoints; ++a) g.push_back(lo + a * step);
      }
      g.push_back(incumbent.h[i]);
      g.push_back(clamp(obj.midpoints[i], lo, hi));
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    const double gap_sum = dp_sweep(obj, cap, stages, path);
    if (gap_sum < kInf) {
      const double val = obj.v_n() + gap_sum;
      if (val < best) {
        best = val;
        incumbent.h = path;
      }
      if (std::abs(prev_val - val) < tol) {
        ++round;
        break;
      }
      prev_val = val;
    }
    // Shrink each band around the incumbent; keep the width when the
    // incumbent sits on a band edge so the region can recenter first.
    for (std::size_t i = 0; i < n - 1; ++i) {
      const double w = band_hi[i] - band_lo[i];
      const double spacing = w / (kGridPoints - 1);
      const double c = incumbent.h[i];
      const bool on_edge =
          c - band_lo[i] <= spacing + 1e-18 || band_hi[i] - c <= spacing + 1e-18;
      const double half = on_edge ? 0.5 * w : 0.25 * w;
      band_lo[i] = std::max(env.h_lower[i + 1], c - half);
      band_hi[i] = std::min(env.h_bar[i + 1], c + half);
    }
  }

  res.h_opt = incumbent;
  res.cost = best;
  res.refinements = round;
  if (!(res.cost >= res.lower_bound - 1e-9 && res.cost <= res.upper_bound + 1e-9))
    throw error(errc::internal, "solution escaped the sandwich bounds");
  return res;
}

std::pair<double, double> sandwich_bounds(const std::vector<double>& x,
                                          const TrimParams& params) {
  check_sorted_strict(x);
  const Objective1D obj = objective_terms(x, params.p);
  const double lower = obj.v_n();
  if (x.size() == 1) return {lower, lower};
  const Envelopes env = compute_envelopes(x, params);
  double corr = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) corr += obj.gap_cost(i, env.h_bar[i + 1]);
  return {lower, lower + corr};
}

namespace {

// Quantile-representation cost sum_i int_{h_{i-1}}^{h_i} |x_i - t|^p dt,
// evaluated without the f_p decomposition.
double quantile_cost(const std::vector<double>& x, const TrimVector& h, double p) {
  double total = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = h.at(i - 1), b = h.at(i);
    total += (signed_pow(b - x[i - 1], p + 1.0) - signed_pow(a - x[i - 1], p + 1.0)) /
             (p + 1.0);
  }
  return total;
}

// Each level enumerates its own feasible window [max(prev, 1-(n-i)cap),
// min(prev+cap, 1)] with both endpoints on the grid, so chain-active optima
// (h_i = h_{i-1} + cap, or pinned at 0/1) are represented exactly and the
// remaining error is quadratic in the spacing.
void brute_recurse(const std::vector<double>& x, const TrimParams& params, int grid,
                   std::size_t i, double prev, TrimVector& h, double& best) {
  const std::size_t n = x.size();
  const double cap = params.cap(n);
  if (i == n) {
    const double final_step = 1.0 - prev;
    if (final_step < -kFeasTol || final_step > cap + kFeasTol) return;
    best = std::min(best, quantile_cost(x, h, params.p));
    return;
  }
  const double lo =
      std::max(prev, 1.0 - static_cast<double>(n - i) * cap);
  const double hi = std::min(prev + cap, 1.0);
  if (lo > hi + kFeasTol) return;
  const double width = std::max(0.0, hi - lo);
  for (int a = 0; a < grid; ++a) {
    const double g = lo + width * static_cast<double>(a) / static_cast<double>(grid - 1);
    h.h[i - 1] = g;
    brute_recurse(x, params, grid, i + 1, g, h, best);
    if (width == 0.0) break;
  }
}

}  // namespace

double brute_force_trim1d(const std::vector<double>& x, const TrimParams& params,
                          int grid) {
  check_sorted_strict(x);
  const std::size_t n = x.size();
  if (n > 6) throw error(errc::usage, "brute-force oracle limited to n <= 6");
  if (grid < 2 || grid > 2001) throw error(errc::usage, "grid must be in [2, 2001]");
  if (n == 1) {
    return quantile_cost(x, TrimVector{}, params.p);
  }
  if (params.alpha == 0.0) {
    TrimVector h;
    h.h.resize(n - 1);
    for (std::size_t i = 1; i <= n - 1; ++i)
      h.h[i - 1] = static_cast<double>(i) / static_cast<double>(n);
    return quantile_cost(x, h, params.p);
  }
  TrimVector h;
  h.h.resize(n - 1);
  double best = kInf;
  brute_recurse(x, params, grid, 1, 0.0, h, best);
  if (best == kInf) throw error(errc::internal, "brute-force grid missed C_{alpha,n}");
  return best;
}

}  // namespace otrim
