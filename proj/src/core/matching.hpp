#pragma once

#include <cstdint>
#include <vector>

#include "core/sample.hpp"

namespace otrim {

// Incomplete matching instance: keep m = n - floor(alpha*n) points on each
// side and pair them bijectively at cost ||X - Y||^p per pair.
struct MatchingProblem {
  Sample x;
  Sample y;
  double p = 2.0;
  double alpha = 0.0;

  std::size_t m() const;
};

struct MatchingResult {
  std::vector<std::uint32_t> kept_x;  // size m, increasing
  std::vector<std::uint32_t> kept_y;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairing;  // (x index, y index)
  double cost = 0.0;                  // (1/m) * sum of pair costs
  std::size_t augmentations = 0;
  std::size_t dijkstra_scans = 0;
};

// Globally optimal integer solution of the trimmed-marginal transportation LP,
// computed as a min-cost flow of value m by successive shortest augmenting
// paths with node potentials (all reduced costs stay nonnegative).
MatchingResult solve_partial_matching(const MatchingProblem& problem);

// Exhaustive minimum over kept subsets and permutations; exact, n <= 8 only.
double brute_force_partial_matching(const MatchingProblem& problem);

// Classical optimal matching (alpha = 0).
MatchingResult untrimmed_matching(const Sample& x, const Sample& y, double p);

}  // namespace otrim
