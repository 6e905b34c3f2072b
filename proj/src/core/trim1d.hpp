#pragma once

#include <cstddef>
#include <vector>

#include "core/sample.hpp"
#include "core/wasserstein1d.hpp"

namespace otrim {

// Upper and lower feasible trimmings bracketing the optimal trim vector.
// Index convention: all four sequences run over i = 0..n with the boundary
// values u_n = f_bar_n = -alpha/(1-alpha), h_bar_0 = h_lower_0 = 0 and
// h_bar_n = h_lower_n = 1 stored explicitly.
struct Envelopes {
  std::vector<double> u;        // u_1..u_n (u[0] unused, kept for 1-based reads)
  std::vector<double> f_bar;    // f_bar_0..f_bar_n, nonincreasing
  std::vector<double> h_bar;    // upper envelope, in C_{alpha,n}
  std::vector<double> h_lower;  // lower envelope, in C_{alpha,n}

  TrimVector upper_trim() const;
  TrimVector lower_trim() const;
  TrimVector midpoint_trim() const;  // (h_bar + h_lower)/2, diagnostic only
};

// Envelope construction by one backward max-scan (upper) and the mirrored
// forward min-scan (lower). alpha = 0 degenerates to h_i = i/n on both sides.
Envelopes compute_envelopes(const std::vector<double>& sorted_points,
                            const TrimParams& params);

struct TrimSolve1DResult {
  TrimVector h_opt;
  double cost = 0.0;         // W_p^p(R_alpha(P_n), P)
  double lower_bound = 0.0;  // V_n(p)
  double upper_bound = 0.0;  // V_n(p) + correction evaluated at h_bar
  int grid_points = 0;       // states per stage
  int refinements = 0;       // refinement rounds actually run
};

// Exact minimizer of the trimmed 1-d cost over C_{alpha,n}: dynamic program
// on the scalar state h_i restricted to the envelope band [h_lower, h_bar],
// with iterative grid refinement around the incumbent until successive
// objective values differ by less than tol.
TrimSolve1DResult solve_trim1d(const std::vector<double>& sorted_points,
                               const TrimParams& params, double tol = 1e-9);

// (V_n(p), V_n(p) + upper-envelope correction).
std::pair<double, double> sandwich_bounds(const std::vector<double>& sorted_points,
                                          const TrimParams& params);

// Exhaustive chain-constrained grid search; test oracle, n <= 6 only. The
// objective is evaluated from the quantile representation directly, not
// through the f_p decomposition.
double brute_force_trim1d(const std::vector<double>& sorted_points,
                          const TrimParams& params, int grid);

// Nearest feasible-chain vector to `target` built by a forward pass that also
// respects the envelope band; used to seed the solver.
TrimVector project_to_band_chain(const std::vector<double>& target,
                                 const Envelopes& env, double cap);

}  // namespace otrim
