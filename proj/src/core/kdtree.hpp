#pragma once

#include <cstdint>
#include <vector>

#include "core/sample.hpp"

namespace otrim {

// Exact nearest-neighbor tree over sample points: median splits on the widest
// extent, leaf size 16, deterministic by construction order. Immutable after
// build; queries are thread-safe.
class KdTree {
 public:
  explicit KdTree(const Sample& sample);

  // Returns the index of the nearest point and writes the squared distance.
  std::size_t nearest(const double* query, double* sq_dist_out) const;

 private:
  struct Node {
    double split = 0.0;
    std::int32_t left = -1, right = -1;  // children, or leaf range below
    std::uint32_t begin = 0, end = 0;    // into idx_ when leaf
    std::uint16_t axis = 0;
    bool leaf = false;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const double* q, std::size_t& best_idx,
              double& best_sq) const;

  std::uint32_t dim_;
  std::vector<double> pts_;  // row-major copy
  std::vector<std::uint32_t> idx_;
  std::vector<Node> nodes_;
};

}  // namespace otrim
