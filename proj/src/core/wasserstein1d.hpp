#pragma once

#include <cstddef>
#include <vector>

#include "core/sample.hpp"

namespace otrim {

// Finite discrete measure on the line: atoms with positive weights summing to 1.
struct DiscreteMeasure1D {
  std::vector<double> atoms;    // sorted
  std::vector<double> weights;  // nonnegative, sum 1

  static DiscreteMeasure1D empirical(const std::vector<double>& points);
  static DiscreteMeasure1D from_atoms(std::vector<double> atoms, std::vector<double> weights);
};

// Even convex penalty of the 1-d objective decomposition:
//   f_p(y) = (1+|y|)^{p+1} + sgn(1-|y|)|1-|y||^{p+1} - 2,
// nonnegative, f_p(0) = 0, strictly increasing on [0,inf).
double f_p(double y, double p);

// W_p between two discrete measures by exact integration of
// |F^{-1}(t)-G^{-1}(t)|^p over the merged breakpoint partition of [0,1].
double w_p_quantile(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu, double p);

// Integral of |Q_mu(t) - t|^p dt over (0,1]: the p-th power cost between a
// discrete measure and U(0,1), evaluated atom by atom in closed form.
double wpp_discrete_to_uniform(const DiscreteMeasure1D& mu, double p);

// W_p^p(P_n, U(0,1)) for a sorted sample via the telescoped closed form.
double w_p_empirical_to_uniform(const std::vector<double>& sorted_points, double p);

// h-independent part of the trimmed cost plus the per-gap geometry needed to
// evaluate it at any trim vector:
//   cost(h) = boundary_term + spacing_term
//           + (1/(p+1)) sum_i r_i^{p+1} f_p((h_i - m_i)/r_i).
struct Objective1D {
  double p = 1.0;
  double boundary_term = 0.0;  // (x_1^{p+1} + (1-x_n)^{p+1})/(p+1)
  double spacing_term = 0.0;   // (1/(2^p(p+1))) sum (x_{i+1}-x_i)^{p+1}
  std::vector<double> midpoints;      // m_i = (x_i+x_{i+1})/2, strictly increasing
  std::vector<double> half_spacings;  // r_i = (x_{i+1}-x_i)/2, positive

  double v_n() const { return boundary_term + spacing_term; }
  double gap_cost(std::size_t i, double h_i) const;  // one summand of the minimand
  double cost(const TrimVector& h) const;
};

// Requires strictly increasing points in [0,1].
Objective1D objective_terms(const std::vector<double>& sorted_points, double p);

// E(V_n(p)) for uniform order statistics, via log-gamma:
//   n^p E V_n(p) = n^p Gamma(n+1)Gamma(p+2) / ((p+1)Gamma(n+p+2)) * (2+(n-1)/2^p).
double v_n_expectation(std::size_t n, double p);

}  // namespace otrim
