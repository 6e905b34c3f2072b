#include "core/wasserstein1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace otrim {

DiscreteMeasure1D DiscreteMeasure1D::empirical(const std::vector<double>& points) {
  DiscreteMeasure1D m;
  m.atoms = points;
  std::sort(m.atoms.begin(), m.atoms.end());
  m.weights.assign(m.atoms.size(), 1.0 / static_cast<double>(m.atoms.size()));
  return m;
}

DiscreteMeasure1D DiscreteMeasure1D::from_atoms(std::vector<double> atoms,
                                                std::vector<double> weights) {
  if (atoms.size() != weights.size())
    throw error(errc::measure, "atoms and weights differ in length");
  std::vector<std::size_t> idx(atoms.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  DiscreteMeasure1D m;
  m.atoms.reserve(atoms.size());
  m.weights.reserve(atoms.size());
  for (std::size_t k : idx) {
    m.atoms.push_back(atoms[k]);
    m.weights.push_back(weights[k]);
  }
  return m;
}

double f_p(double y, double p) {
  if (!(p >= 1.0)) throw error(errc::usage, "f_p requires p >= 1");
  const double a = std::abs(y);
  if (p == 1.0) return a <= 1.0 ? 2.0 * y * y : 2.0 * (2.0 * a - 1.0);
  if (p == 2.0) return 6.0 * y * y;
  return std::pow(1.0 + a, p + 1.0) + signed_pow(1.0 - a, p + 1.0) - 2.0;
}

namespace {

void check_measure(const DiscreteMeasure1D& m) {
  if (m.atoms.empty() || m.atoms.size() != m.weights.size())
    throw error(errc::measure, "measure needs matching nonempty atoms and weights");
  double sum = 0.0;
  for (double w : m.weights) {
    if (!(w >= 0.0)) throw error(errc::measure, "negative atom weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw error(errc::measure, "atom weights must sum to 1");
  if (!std::is_sorted(m.atoms.begin(), m.atoms.end()))
    throw error(errc::measure, "atoms must be sorted");
}

}  // namespace

double w_p_quantile(const DiscreteMeasure1D& mu, const DiscreteMeasure1D& nu, double p) {
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  check_measure(mu);
  check_measure(nu);
  // Both quantile functions are step functions; walk their breakpoints jointly.
  double integral = 0.0;
  double t = 0.0;
  std::size_t i = 0, j = 0;
  double cum_i = mu.weights[0], cum_j = nu.weights[0];
  while (t < 1.0) {
    const double next = std::min(1.0, std::min(cum_i, cum_j));
    if (next > t) integral += (next - t) * std::pow(std::abs(mu.atoms[i] - nu.atoms[j]), p);
    t = next;
    if (cum_i <= t && i + 1 < mu.atoms.size()) cum_i += mu.weights[++i];
    else if (cum_i <= t) cum_i = 1.0 + 1e-30;
    if (cum_j <= t && j + 1 < nu.atoms.size()) cum_j += nu.weights[++j];
    else if (cum_j <= t) cum_j = 1.0 + 1e-30;
  }
  return std::pow(integral, 1.0 / p);
}

double wpp_discrete_to_uniform(const DiscreteMeasure1D& mu, double p) {
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  check_measure(mu);
  // Q_mu = x_i on (c_{i-1}, c_i]; each cell integrates in closed form.
  double cost = 0.0;
  double lo = 0.0;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const double hi = std::min(1.0, lo + mu.weights[i]);
    cost += (signed_pow(hi - mu.atoms[i], p + 1.0) - signed_pow(lo - mu.atoms[i], p + 1.0)) /
            (p + 1.0);
    lo = hi;
  }
  return cost;
}

double w_p_empirical_to_uniform(const std::vector<double>& x, double p) {
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  const std::size_t n = x.size();
  if (n == 0) throw error(errc::precondition, "empty sample");
  if (!std::is_sorted(x.begin(), x.end()))
    throw error(errc::precondition, "points must be sorted");
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    sum += signed_pow(static_cast<double>(i) / dn - x[i - 1], p + 1.0) -
           signed_pow(static_cast<double>(i - 1) / dn - x[i - 1], p + 1.0);
  }
  return sum / (p + 1.0);
}

double Objective1D::gap_cost(std::size_t i, double h_i) const {
  const double r = half_spacings[i];
  return std::pow(r, p + 1.0) * f_p((h_i - midpoints[i]) / r, p) / (p + 1.0);
}

double Objective1D::cost(const TrimVector& h) const {
  if (h.h.size() != midpoints.size())
    throw error(errc::dimension, "trim vector length mismatch");
  double c = v_n();
  for (std::size_t i = 0; i < h.h.size(); ++i) c += gap_cost(i, h.h[i]);
  return c;
}

Objective1D objective_terms(const std::vector<double>& x, double p) {
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  const std::size_t n = x.size();
  if (n == 0) throw error(errc::precondition, "empty sample");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0))
      throw error(errc::precondition, "points must lie in [0,1]");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw error(errc::precondition, "points must be strictly increasing");
  }
  Objective1D o;
  o.p = p;
  o.boundary_term =
      (std::pow(x.front(), p + 1.0) + std::pow(1.0 - x.back(), p + 1.0)) / (p + 1.0);
  double spac = 0.0;
  o.midpoints.resize(n - 1);
  o.half_spacings.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = x[i + 1] - x[i];
    spac += std::pow(gap, p + 1.0);
    o.midpoints[i] = 0.5 * (x[i] + x[i + 1]);
    o.half_spacings[i] = 0.5 * gap;
  }
  o.spacing_term = spac / (std::pow(2.0, p) * (p + 1.0));
  return o;
}

double v_n_expectation(std::size_t n, double p) {
  if (n < 1) throw error(errc::usage, "n must be >= 1");
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  const double dn = static_cast<double>(n);
  const double log_ratio = std::lgamma(dn + 1.0) + std::lgamma(p + 2.0) -
                           std::lgamma(dn + p + 2.0) - std::log(p + 1.0);
  return std::exp(log_ratio) * (2.0 + (dn - 1.0) / std::pow(2.0, p));
}

}  // namespace otrim
