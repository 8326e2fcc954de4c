#include "localgp/neighbors.hpp"

#include "localgp/kernel.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace localgp {

namespace {

constexpr Index kLeafSize = 16;
constexpr Index kMaxTreeDim = 10;

using Entry = std::pair<double, Index>;  // (squared distance, row); lexicographic order

class Excluded {
 public:
  Excluded(std::span<const Index> rows, Index n) {
    for (Index r : rows) {
      if (r >= 0 && r < n) rows_.push_back(r);
    }
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
  }
  bool contains(Index r) const { return std::binary_search(rows_.begin(), rows_.end(), r); }
  Index count() const { return static_cast<Index>(rows_.size()); }

 private:
  std::vector<Index> rows_;
};

class Collector {
 public:
  explicit Collector(Index k) : k_(static_cast<std::size_t>(k)) {}

  bool full() const { return heap_.size() == k_; }
  double worst() const { return heap_.top().first; }

  void offer(double d, Index row) {
    if (heap_.size() < k_) {
      heap_.emplace(d, row);
    } else if (Entry{d, row} < heap_.top()) {
      heap_.pop();
      heap_.emplace(d, row);
    }
  }

  std::vector<Index> sorted() {
    std::vector<Entry> entries;
    entries.reserve(heap_.size());
    while (!heap_.empty()) {
      entries.push_back(heap_.top());
      heap_.pop();
    }
    std::sort(entries.begin(), entries.end());
    std::vector<Index> rows;
    rows.reserve(entries.size());
    for (const auto& e : entries) rows.push_back(e.second);
    return rows;
  }

 private:
  std::size_t k_;
  std::priority_queue<Entry> heap_;
};

}  // namespace

NeighborIndex::NeighborIndex(const RowMatrix& X) {
  if (X.rows() < 1) throw std::invalid_argument("NeighborIndex: empty design");
  const Index n = X.rows();
  order_.resize(static_cast<std::size_t>(n));
  std::iota(order_.begin(), order_.end(), Index{0});
  points_ = X;
  if (X.cols() <= kMaxTreeDim) {
    nodes_.reserve(static_cast<std::size_t>(2 * n / kLeafSize + 1));
    build(0, n);
    RowMatrix ordered(n, X.cols());
    for (Index pos = 0; pos < n; ++pos) ordered.row(pos) = X.row(order_[static_cast<std::size_t>(pos)]);
    points_ = std::move(ordered);
  }
}

Index NeighborIndex::build(Index begin, Index end) {
  const Index p = points_.cols();
  Node node;
  node.begin = begin;
  node.end = end;
  node.box_lo.assign(static_cast<std::size_t>(p), std::numeric_limits<double>::infinity());
  node.box_hi.assign(static_cast<std::size_t>(p), -std::numeric_limits<double>::infinity());
  for (Index pos = begin; pos < end; ++pos) {
    const Index r = order_[static_cast<std::size_t>(pos)];
    for (Index c = 0; c < p; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      node.box_lo[cc] = std::min(node.box_lo[cc], points_(r, c));
      node.box_hi[cc] = std::max(node.box_hi[cc], points_(r, c));
    }
  }

  const auto id = static_cast<Index>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  int dim = 0;
  double spread = -1.0;
  for (Index c = 0; c < p; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const double s = node.box_hi[cc] - node.box_lo[cc];
    if (s > spread) {
      spread = s;
      dim = static_cast<int>(c);
    }
  }
  if (spread <= 0.0) return id;  // all points coincide

  const Index mid = begin + (end - begin) / 2;
  auto first = order_.begin() + begin;
  std::nth_element(first, order_.begin() + mid, order_.begin() + end, [&](Index a, Index b) {
    const double va = points_(a, dim);
    const double vb = points_(b, dim);
    return va < vb || (va == vb && a < b);
  });
  const double split = points_(order_[static_cast<std::size_t>(mid)], dim);

  const Index left = build(begin, mid);
  const Index right = build(mid, end);
  Node& self = nodes_[static_cast<std::size_t>(id)];
  self.split_dim = dim;
  self.split = split;
  self.left = left;
  self.right = right;
  return id;
}

std::vector<Index> NeighborIndex::nearest(Point x, Index k, std::span<const Index> excluded) const {
  if (static_cast<Index>(x.size()) != dim()) {
    throw std::invalid_argument("nearest: query dimension mismatch");
  }
  const Excluded skip(excluded, size());
  if (k < 0 || k > size() - skip.count()) {
    throw std::invalid_argument("nearest: requested " + std::to_string(k) + " neighbors but only " +
                                std::to_string(size() - skip.count()) + " rows remain");
  }
  if (k == 0) return {};

  Collector found(k);
  if (!uses_tree()) {
    for (Index r = 0; r < size(); ++r) {
      if (skip.contains(r)) continue;
      found.offer(sq_dist(row_of(points_, r), x), r);
    }
    return found.sorted();
  }

  const auto box_dist = [&](const Node& node) {
    double d = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      double diff = 0.0;
      if (x[c] < node.box_lo[c]) {
        diff = node.box_lo[c] - x[c];
      } else if (x[c] > node.box_hi[c]) {
        diff = x[c] - node.box_hi[c];
      }
      d += diff * diff;
    }
    return d;
  };

  // Explicit stack; the near child is visited first. Subtrees are pruned only
  // when strictly farther than the current k-th entry so that equal-distance
  // rows with smaller indices are still found.
  std::vector<Index> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (found.full() && box_dist(node) > found.worst()) continue;
    if (node.split_dim < 0) {
      for (Index pos = node.begin; pos < node.end; ++pos) {
        const Index r = order_[static_cast<std::size_t>(pos)];
        if (skip.contains(r)) continue;
        found.offer(sq_dist(row_of(points_, pos), x), r);
      }
      continue;
    }
    const bool go_left = x[static_cast<std::size_t>(node.split_dim)] < node.split;
    stack.push_back(go_left ? node.right : node.left);
    stack.push_back(go_left ? node.left : node.right);
  }
  return found.sorted();
}

Index NeighborIndex::snap(Point x_star, std::span<const Index> excluded) const {
  return nearest(x_star, 1, excluded).front();
}

NeighborIndex build_index(const RowMatrix& X) { return NeighborIndex(X); }

}  // namespace localgp
