#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "cantorgap/error.hpp"
#include "cantorgap/geometry.hpp"
#include "spatial_grid.hpp"

namespace cantorgap {

namespace {

// Region expressed in the axes of S (origin at S's centre).
struct LocalRegion {
  bool is_square = true;
  Point center{};
  double half = 0.0;  // half side for squares, radius for disks
  Point unrotate{1.0, 0.0};

  double distance(Point p) const {
    if (!is_square) return std::max(0.0, std::abs(p - center) - half);
    const Point q = (p - center) * unrotate;
    const double dx = std::max(std::abs(q.real()) - half, 0.0);
    const double dy = std::max(std::abs(q.imag()) - half, 0.0);
    return std::hypot(dx, dy);
  }

  detail::Box box() const {
    double ext = half;
    if (is_square) ext *= std::abs(unrotate.real()) + std::abs(unrotate.imag());
    return {center.real() - ext, center.imag() - ext, center.real() + ext, center.imag() + ext};
  }
};

constexpr std::size_t kCandidates = 6;

struct Neighbour {
  double distance;
  std::uint32_t id;
};

class RegionIndex {
 public:
  RegionIndex(std::vector<LocalRegion> regions, double half_extent)
      : regions_(std::move(regions)),
        grid_({-half_extent, -half_extent, half_extent, half_extent},
              std::clamp<std::size_t>(
                  static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(regions_.size())))),
                  1, 2048),
              regions_.size()) {
    for (std::size_t i = 0; i < regions_.size(); ++i) {
      grid_.insert(static_cast<std::uint32_t>(i), regions_[i].box());
    }
  }

  // Exact k nearest regions to p, sorted by distance.
  std::size_t nearest(Point p, std::size_t k, std::array<Neighbour, kCandidates>& out) const {
    std::size_t count = 0;
    grid_.next_epoch();
    const auto [ci, cj] = grid_.cell_of(p.real(), p.imag());
    const double cs = grid_.cell_size();
    for (std::size_t r = 0;; ++r) {
      const bool inside = grid_.visit_ring(ci, cj, r, [&](std::uint32_t id) {
        const double d = regions_[id].distance(p);
        if (count == k && d >= out[k - 1].distance) return;
        std::size_t pos = count < k ? count++ : k - 1;
        while (pos > 0 && out[pos - 1].distance > d) {
          out[pos] = out[pos - 1];
          --pos;
        }
        out[pos] = {d, id};
      });
      if (!inside) break;
      if (count == k && out[k - 1].distance <= static_cast<double>(r) * cs) break;
    }
    return count;
  }

  const LocalRegion& operator[](std::size_t i) const { return regions_[i]; }
  std::size_t size() const { return regions_.size(); }

 private:
  std::vector<LocalRegion> regions_;
  detail::SpatialGrid grid_;
};

struct Cell {
  double x0, y0, x1, y1;
  double ub;

  Point centre() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.ub < b.ub; }
};

// min over lambda in [0,1] of max_c (lambda * a[c] + (1 - lambda) * b[c]).
double blended_bound(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  auto eval = [&](double lambda) {
    double m = 0.0;
    for (int c = 0; c < 4; ++c) m = std::max(m, b[c] + lambda * (a[c] - b[c]));
    return m;
  };
  double best = std::min(eval(0.0), eval(1.0));
  for (int c = 0; c < 4; ++c) {
    for (int e = c + 1; e < 4; ++e) {
      const double slope = (a[c] - b[c]) - (a[e] - b[e]);
      if (slope == 0.0) continue;
      const double lambda = (b[e] - b[c]) / slope;
      if (lambda > 0.0 && lambda < 1.0) best = std::min(best, eval(lambda));
    }
  }
  return best;
}

class Evaluator {
 public:
  explicit Evaluator(const RegionIndex& index) : index_(index) {}

  // Distance at the centre (a true value) and a certified upper bound on
  // the distance over the whole cell.
  std::pair<double, double> operator()(const Cell& cell) const {
    std::array<Neighbour, kCandidates> near{};
    const std::size_t n = index_.nearest(cell.centre(), std::min(kCandidates, index_.size()), near);
    const std::array<Point, 4> corners = {Point{cell.x0, cell.y0}, Point{cell.x1, cell.y0},
                                          Point{cell.x1, cell.y1}, Point{cell.x0, cell.y1}};
    std::array<std::array<double, 4>, kCandidates> d{};
    double ub = INFINITY;
    for (std::size_t r = 0; r < n; ++r) {
      double worst = 0.0;
      for (int c = 0; c < 4; ++c) {
        d[r][c] = index_[near[r].id].distance(corners[c]);
        worst = std::max(worst, d[r][c]);
      }
      ub = std::min(ub, worst);
    }
    // Distance to each convex region is convex, so every convex blend of two
    // of them is maximised at a corner and bounds min over the regions.
    if (ub > 0.0) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t q = r + 1; q < n; ++q) ub = std::min(ub, blended_bound(d[r], d[q]));
      }
    }
    return {near[0].distance, std::min(ub, cell.ub)};
  }

 private:
  const RegionIndex& index_;
};

}  // namespace

EmptyDiskResult largest_empty_disk(const OrientedSquare& s, std::span<const Region> regions,
                                   const EmptyDiskOptions& opts) {
  if (regions.empty()) throw Error(ErrorCode::EmptyRegionList, "largest_empty_disk needs regions");
  if (!(opts.pitch > 0.0)) throw Error(ErrorCode::InvalidParams, "grid pitch must be positive");

  const double half = s.half_side();
  std::vector<LocalRegion> local;
  local.reserve(regions.size());
  for (const Region& r : regions) {
    if (const auto* sq = std::get_if<OrientedSquare>(&r)) {
      local.push_back({true, s.to_local(sq->center), sq->half_side(),
                       std::polar(1.0, -(sq->rotation - s.rotation))});
    } else {
      const auto& dk = std::get<Disk>(r);
      local.push_back({false, s.to_local(dk.center), dk.radius(), {1.0, 0.0}});
    }
  }
  const RegionIndex index(std::move(local), half);
  const Evaluator evaluate(index);

  const double tol = kEmptyDiskResolution * opts.pitch;
  const double floor = 1e-13 * s.side();

  EmptyDiskResult result;
  double best = -1.0;
  Point best_point{};
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;

  auto visit = [&](Cell cell) {
    const auto [lb, ub] = evaluate(cell);
    ++result.cells_visited;
    if (lb > best) {
      best = lb;
      best_point = cell.centre();
    }
    cell.ub = ub;
    return cell;
  };

  // A single dyadic tree rooted at S: runs with a smaller pitch replay the
  // same search further, so refining the pitch never widens the enclosure.
  Cell root = visit({-half, -half, half, half, INFINITY});
  if (root.ub > best) heap.push(root);

  double hi = best;
  while (!heap.empty()) {
    const Cell top = heap.top();
    if (top.ub <= best + tol || result.cells_visited >= opts.max_cells) {
      hi = std::max(hi, top.ub);
      break;
    }
    heap.pop();
    if (top.ub <= best) continue;
    const double w = top.x1 - top.x0;
    const double h = top.y1 - top.y0;
    if (w <= floor && h <= floor) {
      hi = std::max(hi, top.ub);
      continue;
    }
    const double xm = 0.5 * (top.x0 + top.x1);
    const double ym = 0.5 * (top.y0 + top.y1);
    std::array<Cell, 2> by_x{}, by_y{};
    bool have_x = w > floor, have_y = h > floor;
    if (have_x) {
      by_x = {visit({top.x0, top.y0, xm, top.y1, top.ub}), visit({xm, top.y0, top.x1, top.y1, top.ub})};
    }
    if (have_y) {
      by_y = {visit({top.x0, top.y0, top.x1, ym, top.ub}), visit({top.x0, ym, top.x1, top.y1, top.ub})};
    }
    const double mx = have_x ? std::max(by_x[0].ub, by_x[1].ub) : INFINITY;
    const double my = have_y ? std::max(by_y[0].ub, by_y[1].ub) : INFINITY;
    const bool split_x = mx < my || (mx == my && w >= h);
    for (const Cell& child : split_x ? by_x : by_y) {
      if (child.ub > best) heap.push(child);
    }
  }

  best = std::max(best, 0.0);
  hi = std::max(hi, best);
  result.diameter = {round_down(2.0 * best), round_up(2.0 * hi)};
  result.witness = s.from_local(best_point);
  return result;
}

}  // namespace cantorgap
