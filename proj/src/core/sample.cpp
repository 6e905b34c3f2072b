#include "core/sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace otrim {

Sample Sample::make(std::uint32_t dim, std::vector<double> coords,
                    std::optional<std::uint64_t> seed) {
  if (dim == 0) throw error(errc::dimension, "sample dimension must be >= 1");
  if (coords.empty() || coords.size() % dim != 0)
    throw error(errc::dimension, "coordinate count is not a positive multiple of dim");
  for (double c : coords) {
    if (!(c >= 0.0 && c <= 1.0))
      throw error(errc::precondition, "sample coordinate outside [0,1]");
  }
  Sample s;
  s.dim = dim;
  s.coords = std::move(coords);
  s.seed = seed;
  return s;
}

TrimParams::TrimParams(double alpha_, double p_) : alpha(alpha_), p(p_) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw error(errc::usage, "alpha must lie in [0,1)");
  if (!(p >= 1.0)) throw error(errc::usage, "p must be >= 1");
}

bool validate_trim_vector(const TrimVector& h, const TrimParams& params, std::size_t n) {
  if (n < 1 || h.h.size() != n - 1)
    throw error(errc::dimension, "trim vector length must be n-1");
  const double cap = params.cap(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double step = h.at(i) - h.at(i - 1);
    if (step < -kFeasTol || step > cap + kFeasTol) return false;
  }
  return true;
}

TrimmedMeasure trim_vector_to_measure(const TrimVector& h, const Sample& sample,
                                      const TrimParams& params) {
  const std::size_t n = sample.size();
  if (!validate_trim_vector(h, params, n))
    throw error(errc::feasibility, "trim vector violates the chain constraints");
  TrimmedMeasure r;
  r.base = sample;
  r.weights.resize(n);
  for (std::size_t i = 1; i <= n; ++i) r.weights[i - 1] = h.at(i) - h.at(i - 1);
  return r;
}

bool is_trimming_of(const TrimmedMeasure& r, double alpha) {
  const std::size_t n = r.weights.size();
  if (n == 0 || !(alpha >= 0.0 && alpha < 1.0)) return false;
  const double cap = 1.0 / (static_cast<double>(n) * (1.0 - alpha));
  double sum = 0.0;
  for (double b : r.weights) {
    if (b < -kFeasTol || b > cap + kFeasTol) return false;
    sum += b;
  }
  return std::abs(sum - 1.0) <= kFeasTol;
}

SortedView sorted_view_1d(const Sample& sample) {
  if (sample.dim != 1)
    throw error(errc::dimension, "sorted 1-d view requires a 1-d sample");
  const std::size_t n = sample.size();
  SortedView v;
  v.order.resize(n);
  std::iota(v.order.begin(), v.order.end(), 0u);
  std::stable_sort(v.order.begin(), v.order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return sample.coords[a] < sample.coords[b];
                   });
  v.x.resize(n);
  for (std::size_t k = 0; k < n; ++k) v.x[k] = sample.coords[v.order[k]];
  // Separate ties deterministically; pull back below 1 if the end overflows.
  for (std::size_t k = 1; k < n; ++k)
    if (v.x[k] <= v.x[k - 1]) v.x[k] = v.x[k - 1] + kTieStep;
  if (v.x.back() > 1.0) {
    v.x.back() = 1.0;
    for (std::size_t k = n - 1; k-- > 0;)
      if (v.x[k] >= v.x[k + 1]) v.x[k] = v.x[k + 1] - kTieStep;
    if (v.x.front() < 0.0)
      throw error(errc::internal, "tie separation ran out of room in [0,1]");
  }
  return v;
}

void write_sample_csv(const Sample& sample, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot open for writing: " + path);
  out << "# dim,n,seed\n# " << sample.dim << ',' << sample.size() << ',';
  if (sample.seed) out << *sample.seed;
  out << '\n';
  char buf[64];
  const std::size_t n = sample.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < sample.dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", sample.at(i, k));
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw error(errc::io, "write failed: " + path);
}

Sample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open for reading: " + path);
  std::string line;
  std::uint32_t dim = 0;
  std::optional<std::uint64_t> seed;
  std::vector<double> coords;
  std::size_t header_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Second comment line carries "dim,n,seed" values.
      if (++header_no == 2) {
        std::istringstream hs(line.substr(1));
        std::string tok;
        if (std::getline(hs, tok, ',')) dim = static_cast<std::uint32_t>(std::stoul(tok));
        std::getline(hs, tok, ',');  // n is implied by the rows
        if (std::getline(hs, tok, ',') && !tok.empty()) seed = std::stoull(tok);
      }
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    std::uint32_t got = 0;
    while (std::getline(ls, tok, ',')) {
      try {
        coords.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw error(errc::io, "bad coordinate in " + path + ": '" + tok + "'");
      }
      ++got;
    }
    if (dim == 0) dim = got;
    if (got != dim) throw error(errc::io, "ragged row in " + path);
  }
  if (coords.empty()) throw error(errc::io, "no points in " + path);
  return Sample::make(dim, std::move(coords), seed);
}

}  // namespace otrim
