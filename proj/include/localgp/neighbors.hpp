#pragma once

#include "localgp/types.hpp"

#include <vector>

namespace localgp {

// Exact k-nearest-neighbor queries over a fixed design. Results equal an
// exhaustive sort by (squared Euclidean distance, row index). Excluded rows are
// filtered at query time. Uses a kd-tree for p <= 10 and a linear scan above.
class NeighborIndex {
 public:
  explicit NeighborIndex(const RowMatrix& X);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  bool uses_tree() const { return !nodes_.empty(); }

  // The k nearest rows not listed in `excluded`, nearest first, ties by
  // ascending row index. Throws std::invalid_argument when fewer than k rows
  // remain.
  std::vector<Index> nearest(Point x, Index k, std::span<const Index> excluded = {}) const;

  // Nearest non-excluded row.
  Index snap(Point x_star, std::span<const Index> excluded = {}) const;

 private:
  struct Node {
    Index begin = 0;  // range into order_
    Index end = 0;
    int split_dim = -1;  // -1 for leaves
    double split = 0.0;
    Index left = -1;
    Index right = -1;
    std::vector<double> box_lo;
    std::vector<double> box_hi;
  };

  Index build(Index begin, Index end);

  RowMatrix points_;         // rows in tree order
  std::vector<Index> order_;  // tree position -> original row
  std::vector<Node> nodes_;
};

NeighborIndex build_index(const RowMatrix& X);

}  // namespace localgp
