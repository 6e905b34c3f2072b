#include "core/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/kdtree.hpp"
#include "core/rng.hpp"

namespace otrim {

QuantizationReport quantization_cost_1d(const std::vector<double>& x, double p) {
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  const std::size_t n = x.size();
  if (n == 0) throw error(errc::precondition, "empty sample");
  if (!std::is_sorted(x.begin(), x.end()))
    throw error(errc::precondition, "points must be sorted");
  double cost = 0.0;
  double lo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = i + 1 < n ? 0.5 * (x[i] + x[i + 1]) : 1.0;
    cost += (signed_pow(hi - x[i], p + 1.0) - signed_pow(lo - x[i], p + 1.0)) / (p + 1.0);
    lo = hi;
  }
  QuantizationReport r;
  r.cost = cost;
  r.exact = true;
  r.scaled = std::pow(static_cast<double>(n), p) * cost;
  return r;
}

QuantizationReport quantization_cost_mc(const Sample& sample, double p,
                                        std::size_t n_mc, std::uint64_t seed) {
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  if (n_mc < 1000) throw error(errc::usage, "n_mc must be >= 1000");
  const KdTree tree(sample);
  const std::uint32_t d = sample.dim;
  double sum = 0.0, sum2 = 0.0;
  double q[16];
  if (d > 16) throw error(errc::dimension, "dimension too large for MC quantization");
  // Draws come in fixed blocks with per-block substreams and are aggregated in
  // block order, so the estimate is the same no matter who consumes the blocks.
  constexpr std::size_t kBlock = 4096;
  for (std::size_t b = 0; b * kBlock < n_mc; ++b) {
    rng::Stream stream(rng::substream(seed, b));
    const std::size_t end = std::min(n_mc, (b + 1) * kBlock);
    for (std::size_t t = b * kBlock; t < end; ++t) {
      for (std::uint32_t k = 0; k < d; ++k) q[k] = stream.next_unit();
      double sq = 0.0;
      tree.nearest(q, &sq);
      const double v = p == 2.0 ? sq : (p == 1.0 ? std::sqrt(sq) : std::pow(sq, 0.5 * p));
      sum += v;
      sum2 += v * v;
    }
  }
  const double mean = sum / static_cast<double>(n_mc);
  const double var =
      std::max(0.0, sum2 / static_cast<double>(n_mc) - mean * mean);
  QuantizationReport r;
  r.cost = mean;
  r.exact = false;
  r.mc_std_error = std::sqrt(var / static_cast<double>(n_mc));
  r.scaled = std::pow(static_cast<double>(sample.size()), p / static_cast<double>(d)) * mean;
  return r;
}

double quantization_constant(std::uint32_t d, double p) {
  if (d < 1) throw error(errc::usage, "d must be >= 1");
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
  const double dd = static_cast<double>(d);
  const double log_omega =
      0.5 * dd * std::log(std::numbers::pi) - std::lgamma(1.0 + 0.5 * dd);
  return std::exp(std::lgamma(1.0 + p / dd) - (p / dd) * log_omega);
}

}  // namespace otrim
