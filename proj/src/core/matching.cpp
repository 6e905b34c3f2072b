#include "core/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace otrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kCacheLimit = 4096;  // above this, recompute costs on demand

void check_problem(const MatchingProblem& pr) {
  if (pr.x.dim != pr.y.dim)
    throw error(errc::dimension, "samples differ in dimension");
  if (pr.x.size() != pr.y.size())
    throw error(errc::dimension, "samples differ in size");
  if (!(pr.p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  if (!(pr.alpha >= 0.0 && pr.alpha < 1.0))
    throw error(errc::usage, "alpha must lie in [0,1)");
  for (double c : pr.x.coords)
    if (!std::isfinite(c)) throw error(errc::precondition, "non-finite coordinate");
  for (double c : pr.y.coords)
    if (!std::isfinite(c)) throw error(errc::precondition, "non-finite coordinate");
}

double pair_cost(const Sample& x, const Sample& y, std::size_t i, std::size_t j,
                 double p) {
  double d2 = 0.0;
  for (std::uint32_t k = 0; k < x.dim; ++k) {
    const double d = x.at(i, k) - y.at(j, k);
    d2 += d * d;
  }
  if (p == 2.0) return d2;
  if (p == 1.0) return std::sqrt(d2);
  return std::pow(d2, 0.5 * p);
}

}  // namespace

std::size_t MatchingProblem::m() const {
  const std::size_t n = x.size();
  // Keep at least the nominal fraction when alpha*n is not an integer.
  const auto trimmed = static_cast<std::size_t>(
      std::floor(alpha * static_cast<double>(n) + 1e-9));
  return n - std::min(trimmed, n - 1);
}

MatchingResult solve_partial_matching(const MatchingProblem& pr) {
  check_problem(pr);
  const std::size_t n = pr.x.size();
  const std::size_t m = pr.m();
  if (m == 0) throw error(errc::usage, "degenerate problem: no points kept");

  std::vector<double> cost_cache;
  const bool cached = n <= kCacheLimit;
  if (cached) {
    cost_cache.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cost_cache[i * n + j] = pair_cost(pr.x, pr.y, i, j, pr.p);
  }
  auto cost = [&](std::size_t i, std::size_t j) {
    return cached ? cost_cache[i * n + j] : pair_cost(pr.x, pr.y, i, j, pr.p);
  };

  // Successive shortest augmenting paths with node potentials. All edge costs
  // are nonnegative, so zero potentials are dual-feasible at the start; after
  // each Dijkstra pass the potentials absorb the distances and reduced costs
  // stay nonnegative. After k augmentations the matching is the cheapest one
  // of cardinality k, which realizes the integer optimum of the trimmed LP.
  std::vector<double> u(n, 0.0), v(n, 0.0);
  std::vector<int> match_x(n, -1), match_y(n, -1);
  std::vector<double> dist(n), dx(n);
  std::vector<int> pred(n);
  std::vector<char> done(n);
  MatchingResult res;

  for (std::size_t step = 0; step < m; ++step) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    std::fill(dx.begin(), dx.end(), kInf);
    for (std::size_t i = 0; i < n; ++i) {
      if (match_x[i] >= 0) continue;
      dx[i] = 0.0;
      const double ui = u[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double nd = cost(i, j) - ui - v[j];
        if (nd < dist[j]) {
          dist[j] = nd;
          pred[j] = static_cast<int>(i);
        }
      }
    }

    int target = -1;
    double reached = 0.0;
    while (true) {
      int jstar = -1;
      double dmin = kInf;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j] && dist[j] < dmin) {
          dmin = dist[j];
          jstar = static_cast<int>(j);
        }
      if (jstar < 0)
        throw error(errc::internal, "no augmenting path while flow below m");
      done[static_cast<std::size_t>(jstar)] = 1;
      ++res.dijkstra_scans;
      if (match_y[static_cast<std::size_t>(jstar)] < 0) {
        target = jstar;
        reached = dmin;
        break;
      }
      const auto i2 = static_cast<std::size_t>(match_y[static_cast<std::size_t>(jstar)]);
      dx[i2] = dmin;
      const double base = dmin - u[i2];
      for (std::size_t j = 0; j < n; ++j) {
        if (done[j]) continue;
        const double nd = base + cost(i2, j) - v[j];
        if (nd < dist[j]) {
          dist[j] = nd;
          pred[j] = static_cast<int>(i2);
        }
      }
    }

    for (std::size_t j = 0; j < n; ++j)
      v[j] += std::min(dist[j], reached) - reached;
    for (std::size_t i = 0; i < n; ++i)
      if (dx[i] < reached) u[i] += reached - dx[i];

    // Flip the alternating path ending at `target`.
    int j = target;
    while (j >= 0) {
      const int i = pred[static_cast<std::size_t>(j)];
      const int jnext = match_x[static_cast<std::size_t>(i)];
      match_x[static_cast<std::size_t>(i)] = j;
      match_y[static_cast<std::size_t>(j)] = i;
      j = jnext;
    }
    ++res.augmentations;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (match_x[i] < 0) continue;
    const auto j = static_cast<std::size_t>(match_x[i]);
    res.kept_x.push_back(static_cast<std::uint32_t>(i));
    res.kept_y.push_back(static_cast<std::uint32_t>(j));
    res.pairing.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    total += cost(i, j);
  }
  std::sort(res.kept_y.begin(), res.kept_y.end());
  res.cost = total / static_cast<double>(m);
  return res;
}

namespace {

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

double brute_force_partial_matching(const MatchingProblem& pr) {
  check_problem(pr);
  const std::size_t n = pr.x.size();
  if (n > 8) throw error(errc::usage, "enumeration oracle limited to n <= 8");
  const std::size_t m = pr.m();

  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = pair_cost(pr.x, pr.y, i, j, pr.p);

  std::vector<std::size_t> sx(m), sy0(m);
  std::iota(sx.begin(), sx.end(), std::size_t{0});
  double best = kInf;
  do {
    std::iota(sy0.begin(), sy0.end(), std::size_t{0});
    do {
      std::vector<std::size_t> sy = sy0;
      std::sort(sy.begin(), sy.end());
      do {
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) total += c[sx[k] * n + sy[k]];
        best = std::min(best, total);
      } while (std::next_permutation(sy.begin(), sy.end()));
    } while (next_combination(sy0, n));
  } while (next_combination(sx, n));
  return best / static_cast<double>(m);
}

MatchingResult untrimmed_matching(const Sample& x, const Sample& y, double p) {
  MatchingProblem pr;
  pr.x = x;
  pr.y = y;
  pr.p = p;
  pr.alpha = 0.0;
  return solve_partial_matching(pr);
}

}  // namespace otrim
