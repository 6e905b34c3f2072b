#include "core/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace otrim {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

KdTree::KdTree(const Sample& sample) : dim_(sample.dim), pts_(sample.coords) {
  const auto n = static_cast<std::uint32_t>(sample.size());
  idx_.resize(n);
  std::iota(idx_.begin(), idx_.end(), 0u);
  nodes_.reserve(2 * n / kLeafSize + 2);
  build(0, n);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[id].leaf = true;
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  // Widest extent picks the axis; ties resolve to the lowest index.
  std::uint16_t axis = 0;
  double widest = -1.0;
  for (std::uint16_t k = 0; k < dim_; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::uint32_t t = begin; t < end; ++t) {
      const double c = pts_[idx_[t] * dim_ + k];
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = k;
    }
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = pts_[a * dim_ + axis], cb = pts_[b * dim_ + axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  nodes_[id].axis = axis;
  nodes_[id].split = pts_[idx_[mid] * dim_ + axis];
  const std::int32_t l = build(begin, mid);
  const std::int32_t r = build(mid, end);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void KdTree::search(std::int32_t node, const double* q, std::size_t& best_idx,
                    double& best_sq) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  if (nd.leaf) {
    for (std::uint32_t t = nd.begin; t < nd.end; ++t) {
      const std::uint32_t i = idx_[t];
      double d2 = 0.0;
      for (std::uint32_t k = 0; k < dim_; ++k) {
        const double d = q[k] - pts_[i * dim_ + k];
        d2 += d * d;
      }
      if (d2 < best_sq || (d2 == best_sq && i < best_idx)) {
        best_sq = d2;
        best_idx = i;
      }
    }
    return;
  }
  const double delta = q[nd.axis] - nd.split;
  const std::int32_t near = delta < 0.0 ? nd.left : nd.right;
  const std::int32_t far = delta < 0.0 ? nd.right : nd.left;
  search(near, q, best_idx, best_sq);
  if (delta * delta <= best_sq) search(far, q, best_idx, best_sq);
}

std::size_t KdTree::nearest(const double* query, double* sq_dist_out) const {
  std::size_t best_idx = std::numeric_limits<std::size_t>::max();
  double best_sq = std::numeric_limits<double>::infinity();
  search(0, query, best_idx, best_sq);
  if (sq_dist_out) *sq_dist_out = best_sq;
  return best_idx;
}

}  // namespace otrim
