#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace otrim {

// n points in [0,1]^d, row-major, with optional seed provenance.
// Immutable after construction; all operations on it are pure.
struct Sample {
  std::uint32_t dim = 1;
  std::vector<double> coords;  // size n * dim
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  double at(std::size_t i, std::uint32_t k) const { return coords[i * dim + k]; }

  // Validates dim >= 1, n >= 1, coordinates finite and in [0,1].
  static Sample make(std::uint32_t dim, std::vector<double> coords,
                     std::optional<std::uint64_t> seed = std::nullopt);
};

// Trim level and cost exponent. The retained-mass cap 1/(n(1-alpha)) depends
// on the sample size, so it is exposed as a function of n.
struct TrimParams {
  double alpha = 0.1;  // in [0,1); alpha = 1 lives in the quantization module
  double p = 2.0;      // cost exponent, >= 1

  TrimParams() = default;
  TrimParams(double alpha_, double p_);

  double cap(std::size_t n) const { return 1.0 / (static_cast<double>(n) * (1.0 - alpha)); }
};

// Cumulative weights h_1..h_{n-1} of a trimming of a sorted empirical measure,
// with implicit boundary values h_0 = 0 and h_n = 1.
struct TrimVector {
  std::vector<double> h;

  std::size_t n() const { return h.size() + 1; }
  double at(std::size_t i) const {  // i in 0..n
    if (i == 0) return 0.0;
    if (i == h.size() + 1) return 1.0;
    return h[i - 1];
  }
};

// Atom weights b_i on sample points; a trimming of the empirical measure when
// every weight respects the cap 1/(n(1-alpha)).
struct TrimmedMeasure {
  Sample base;
  std::vector<double> weights;
};

// True iff all n chain constraints 0 <= h_i - h_{i-1} <= cap hold within 1e-12.
bool validate_trim_vector(const TrimVector& h, const TrimParams& params, std::size_t n);

// b_i = h_i - h_{i-1}; requires a valid h for the sample's n.
TrimmedMeasure trim_vector_to_measure(const TrimVector& h, const Sample& sample,
                                      const TrimParams& params);

// Cap-and-mass check of the trimming definition specialized to atoms.
bool is_trimming_of(const TrimmedMeasure& r, double alpha);

// Sorted strictly-increasing 1-d view. `order[k]` is the original index of the
// k-th sorted point; tied coordinates are separated by multiples of 1e-15.
struct SortedView {
  std::vector<double> x;
  std::vector<std::uint32_t> order;
};

SortedView sorted_view_1d(const Sample& sample);

// CSV serialization: two comment lines ("# dim,n,seed" then "# <d>,<n>,<seed>",
// seed empty when absent) followed by one comma-separated row per point,
// 17 significant digits.
void write_sample_csv(const Sample& sample, const std::string& path);
Sample read_sample_csv(const std::string& path);

}  // namespace otrim
