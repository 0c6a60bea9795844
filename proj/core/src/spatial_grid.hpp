#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cantorgap::detail {

struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

inline Box merge(const Box& a, const Box& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

// Uniform bucket grid over axis-aligned boxes. Objects are stored by id in
// every bucket their box touches; queries deduplicate with an epoch stamp,
// so a grid must not be queried from two threads at once.
class SpatialGrid {
 public:
  SpatialGrid(Box domain, std::size_t per_axis, std::size_t object_count)
      : domain_(domain),
        n_(std::max<std::size_t>(1, per_axis)),
        cells_(n_ * n_),
        stamp_(object_count, 0) {
    cell_w_ = std::max((domain_.x1 - domain_.x0) / static_cast<double>(n_), 1e-300);
    cell_h_ = std::max((domain_.y1 - domain_.y0) / static_cast<double>(n_), 1e-300);
  }

  void insert(std::uint32_t id, const Box& b) {
    const auto [i0, j0] = cell_of(b.x0, b.y0);
    const auto [i1, j1] = cell_of(b.x1, b.y1);
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) cells_[j * n_ + i].push_back(id);
    }
  }

  template <class Visit>
  void query(const Box& b, Visit&& visit) const {
    next_epoch();
    const auto [i0, j0] = cell_of(b.x0, b.y0);
    const auto [i1, j1] = cell_of(b.x1, b.y1);
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) visit_cell(i, j, visit);
    }
  }

  // Visits ids in the square ring of Chebyshev radius r around bucket (ci, cj).
  // Returns false once the ring lies entirely outside the grid.
  template <class Visit>
  bool visit_ring(std::size_t ci, std::size_t cj, std::size_t r, Visit&& visit) const {
    const auto lo_i = static_cast<long>(ci) - static_cast<long>(r);
    const auto hi_i = static_cast<long>(ci) + static_cast<long>(r);
    const auto lo_j = static_cast<long>(cj) - static_cast<long>(r);
    const auto hi_j = static_cast<long>(cj) + static_cast<long>(r);
    const long n = static_cast<long>(n_);
    if (lo_i < 0 && lo_j < 0 && hi_i >= n && hi_j >= n) return false;
    for (long j = lo_j; j <= hi_j; ++j) {
      if (j < 0 || j >= n) continue;
      const bool edge_row = (j == lo_j || j == hi_j);
      for (long i = lo_i; i <= hi_i; ++i) {
        if (i < 0 || i >= n) continue;
        if (!edge_row && i != lo_i && i != hi_i) continue;
        visit_cell(static_cast<std::size_t>(i), static_cast<std::size_t>(j), visit);
      }
    }
    return true;
  }

  void next_epoch() const {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  std::pair<std::size_t, std::size_t> cell_of(double x, double y) const {
    return {clamp_index((x - domain_.x0) / cell_w_), clamp_index((y - domain_.y0) / cell_h_)};
  }

  double cell_size() const { return std::min(cell_w_, cell_h_); }
  std::size_t per_axis() const { return n_; }

 private:
  std::size_t clamp_index(double t) const {
    if (!(t > 0.0)) return 0;
    const double m = static_cast<double>(n_ - 1);
    return t >= m ? n_ - 1 : static_cast<std::size_t>(t);
  }

  template <class Visit>
  void visit_cell(std::size_t i, std::size_t j, Visit& visit) const {
    for (const std::uint32_t id : cells_[j * n_ + i]) {
      if (stamp_[id] == epoch_) continue;
      stamp_[id] = epoch_;
      visit(id);
    }
  }

  Box domain_;
  std::size_t n_;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<std::vector<std::uint32_t>> cells_;
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t epoch_ = 0;
};

}  // namespace cantorgap::detail
