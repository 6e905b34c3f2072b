#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/sample.hpp"

namespace otrim {

// Full-trimming endpoint: integrated p-th-power nearest-neighbor distance to
// the sample under U([0,1]^d).
struct QuantizationReport {
  double cost = 0.0;
  bool exact = false;  // closed-form 1-d integration vs. Monte Carlo
  std::optional<double> mc_std_error;
  double scaled = 0.0;  // n^{p/d} * cost
};

// Exact in 1-d: Voronoi cells are midpoint intervals, integrated in closed form.
QuantizationReport quantization_cost_1d(const std::vector<double>& sorted_points,
                                        double p);

// Monte Carlo with exact nearest neighbors from a k-d tree; deterministic
// given the seed. Draws are partitioned into fixed-order blocks so the result
// does not depend on how workers consume them.
QuantizationReport quantization_cost_mc(const Sample& sample, double p,
                                        std::size_t n_mc, std::uint64_t seed);

// Limit of n^{p/d} E(cost): Gamma(1 + p/d) * omega_d^{-p/d} with
// omega_d = pi^{d/2} / Gamma(1 + d/2), the volume of the unit ball.
double quantization_constant(std::uint32_t d, double p);

}  // namespace otrim
