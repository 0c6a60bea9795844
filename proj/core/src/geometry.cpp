#include "cantorgap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cantorgap/error.hpp"
#include "spatial_grid.hpp"

namespace cantorgap {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

detail::Box bounding_box(const OrientedSquare& s) {
  const double h = s.half_side();
  const double ext = h * (std::abs(std::cos(s.rotation)) + std::abs(std::sin(s.rotation)));
  return {s.center.real() - ext, s.center.imag() - ext, s.center.real() + ext,
          s.center.imag() + ext};
}

Point unit(double angle) { return std::polar(1.0, angle); }

}  // namespace

double dist(Point a, Point b) { return std::abs(a - b); }

bool Disk::contains(Point p, double slack) const { return dist(p, center) <= radius() - slack; }

bool Disk::contains(const Disk& other, double slack) const {
  return dist(other.center, center) + other.radius() <= radius() - slack;
}

double Disk::distance(Point p) const { return std::max(0.0, dist(p, center) - radius()); }

double OrientedSquare::side() const { return diameter / kSqrt2; }

Point OrientedSquare::to_local(Point p) const { return (p - center) * unit(-rotation); }

Point OrientedSquare::from_local(Point q) const { return center + q * unit(rotation); }

std::array<Point, 4> OrientedSquare::corners() const {
  const double h = half_side();
  return {from_local({h, h}), from_local({-h, h}), from_local({-h, -h}), from_local({h, -h})};
}

bool OrientedSquare::contains(Point p, double slack) const {
  const Point q = to_local(p);
  const double h = half_side() - slack;
  return std::abs(q.real()) < h && std::abs(q.imag()) < h;
}

double OrientedSquare::distance(Point p) const {
  const Point q = to_local(p);
  const double h = half_side();
  const double dx = std::max(std::abs(q.real()) - h, 0.0);
  const double dy = std::max(std::abs(q.imag()) - h, 0.0);
  return std::hypot(dx, dy);
}

double OrientedSquare::clearance(Point p) const {
  const Point q = to_local(p);
  return half_side() - std::max(std::abs(q.real()), std::abs(q.imag()));
}

bool operator==(const OrientedSquare& a, const OrientedSquare& b) {
  return a.center == b.center && a.diameter == b.diameter && a.rotation == b.rotation;
}

Disk quarter_disk_in_square(Point z, Point z2, const OrientedSquare& s) {
  if (z == z2) throw Error(ErrorCode::DegenerateInput, "quarter_disk_in_square needs z != z2");
  // Work in the normalised square: centre 0, side 1.
  const double scale = 1.0 / s.side();
  const Point zl = s.to_local(z) * scale;
  const double d = std::abs(zl - s.to_local(z2) * scale);
  // Quadrant pointing towards the centre of the square.
  const double sx = zl.real() <= 0.0 ? 1.0 : -1.0;
  const double sy = zl.imag() <= 0.0 ? 1.0 : -1.0;

  double radius = 0.0;
  if (d <= 0.5) {
    // The quarter disk of radius d fits in S; take the incircle of its
    // inscribed right isosceles triangle.
    radius = d / (2.0 + kSqrt2);
  } else {
    // Disk tangent to both quadrant legs, clipped by the far walls of S.
    const double wall = std::min(0.5 + std::abs(zl.real()), 0.5 + std::abs(zl.imag()));
    radius = std::min(d / (1.0 + kSqrt2), 0.5 * wall);
  }
  const Point centre_local = zl + radius * Point{sx, sy};
  return Disk{s.from_local(centre_local / scale), 2.0 * radius / scale};
}

bool overlap_exact(const OrientedSquare& a, const OrientedSquare& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Point, 4> axes = {unit(a.rotation), unit(a.rotation + std::numbers::pi / 2),
                                     unit(b.rotation), unit(b.rotation + std::numbers::pi / 2)};
  for (const Point& axis : axes) {
    double amin = INFINITY, amax = -INFINITY, bmin = INFINITY, bmax = -INFINITY;
    for (const Point& p : ca) {
      const double t = p.real() * axis.real() + p.imag() * axis.imag();
      amin = std::min(amin, t);
      amax = std::max(amax, t);
    }
    for (const Point& p : cb) {
      const double t = p.real() * axis.real() + p.imag() * axis.imag();
      bmin = std::min(bmin, t);
      bmax = std::max(bmax, t);
    }
    // Open squares: touching projections do not count.
    if (!(amax > bmin && bmax > amin)) return false;
  }
  return true;
}

bool disks_overlap(const Disk& a, const Disk& b) {
  return dist(a.center, b.center) < a.radius() + b.radius();
}

bool disk_overlaps_square(const Disk& d, const OrientedSquare& s) {
  return s.distance(d.center) < d.radius();
}

bool disk_in_square(const Disk& d, const OrientedSquare& s, double slack) {
  const Point q = s.to_local(d.center);
  const double lim = s.half_side() - slack;
  return std::abs(q.real()) + d.radius() <= lim && std::abs(q.imag()) + d.radius() <= lim;
}

bool square_in_square(const OrientedSquare& inner, const OrientedSquare& outer, double slack) {
  const double lim = outer.half_side() - slack;
  for (const Point& c : inner.corners()) {
    const Point q = outer.to_local(c);
    if (std::abs(q.real()) > lim || std::abs(q.imag()) > lim) return false;
  }
  return true;
}

bool square_in_disk(const OrientedSquare& s, const Disk& d, double slack) {
  for (const Point& c : s.corners()) {
    if (dist(c, d.center) > d.radius() - slack) return false;
  }
  return true;
}

std::vector<Point> overlap_polygon(const OrientedSquare& a, const OrientedSquare& b) {
  if (!overlap_exact(a, b)) return {};
  // Clip a's boundary polygon against the four half-planes of b.
  const auto ca = a.corners();
  std::vector<Point> poly(ca.begin(), ca.end());
  const double h = b.half_side();
  for (int edge = 0; edge < 4 && !poly.empty(); ++edge) {
    auto inside = [&](Point p) {
      const Point q = b.to_local(p);
      switch (edge) {
        case 0: return q.real() <= h;
        case 1: return q.real() >= -h;
        case 2: return q.imag() <= h;
        default: return q.imag() >= -h;
      }
    };
    auto cross = [&](Point p, Point r) {
      const Point qp = b.to_local(p);
      const Point qr = b.to_local(r);
      double tp = 0.0, tr = 0.0;
      switch (edge) {
        case 0: tp = qp.real() - h; tr = qr.real() - h; break;
        case 1: tp = qp.real() + h; tr = qr.real() + h; break;
        case 2: tp = qp.imag() - h; tr = qr.imag() - h; break;
        default: tp = qp.imag() + h; tr = qr.imag() + h; break;
      }
      const double t = tp / (tp - tr);
      return p + t * (r - p);
    };
    std::vector<Point> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point cur = poly[i];
      const Point prev = poly[(i + poly.size() - 1) % poly.size()];
      const bool in_cur = inside(cur);
      const bool in_prev = inside(prev);
      if (in_cur) {
        if (!in_prev) out.push_back(cross(prev, cur));
        out.push_back(cur);
      } else if (in_prev) {
        out.push_back(cross(prev, cur));
      }
    }
    poly = std::move(out);
  }
  return poly;
}

bool polygon_meets_disk(std::span<const Point> poly, const Disk& d) {
  if (poly.empty()) return false;
  bool inside = true;
  double sign = 0.0;
  double nearest = INFINITY;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point p = poly[i];
    const Point q = poly[(i + 1) % poly.size()];
    const Point e = q - p;
    const Point v = d.center - p;
    const double c = e.real() * v.imag() - e.imag() * v.real();
    if (c != 0.0) {
      if (sign == 0.0) sign = c;
      if (c * sign < 0.0) inside = false;
    }
    const double len2 = std::norm(e);
    const double t = len2 > 0.0 ? std::clamp((v.real() * e.real() + v.imag() * e.imag()) / len2, 0.0, 1.0) : 0.0;
    nearest = std::min(nearest, std::abs(d.center - (p + t * e)));
  }
  return inside || nearest < d.radius();
}

std::optional<Point> overlap_witness(const OrientedSquare& a, const OrientedSquare& b) {
  const std::vector<Point> poly = overlap_polygon(a, b);
  if (poly.empty()) return std::nullopt;
  Point sum{};
  for (const Point& p : poly) sum += p;
  return sum / static_cast<double>(poly.size());
}

double distance(const Region& r, Point p) {
  return std::visit([p](const auto& shape) { return shape.distance(p); }, r);
}

std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(
    std::span<const OrientedSquare> a, std::span<const OrientedSquare> b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (a.empty() || b.empty()) return out;
  detail::Box domain = bounding_box(b.front());
  for (const auto& s : b) domain = detail::merge(domain, bounding_box(s));
  const auto per_axis = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(b.size()))));
  detail::SpatialGrid grid(domain, std::min<std::size_t>(per_axis, 1024), b.size());
  for (std::size_t j = 0; j < b.size(); ++j) grid.insert(static_cast<std::uint32_t>(j), bounding_box(b[j]));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const detail::Box box = bounding_box(a[i]);
    if (box.x1 < domain.x0 || box.x0 > domain.x1 || box.y1 < domain.y0 || box.y0 > domain.y1) continue;
    grid.query(box, [&](std::uint32_t j) {
      if (overlap_exact(a[i], b[j])) out.emplace_back(i, j);
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> find_self_overlap(
    std::span<const OrientedSquare> squares) {
  if (squares.size() < 2) return std::nullopt;
  detail::Box domain = bounding_box(squares.front());
  for (const auto& s : squares) domain = detail::merge(domain, bounding_box(s));
  const auto per_axis =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(squares.size()))));
  detail::SpatialGrid grid(domain, std::min<std::size_t>(per_axis, 1024), squares.size());
  for (std::size_t j = 0; j < squares.size(); ++j) {
    grid.insert(static_cast<std::uint32_t>(j), bounding_box(squares[j]));
  }
  for (std::size_t i = 0; i < squares.size(); ++i) {
    std::optional<std::pair<std::size_t, std::size_t>> hit;
    grid.query(bounding_box(squares[i]), [&](std::uint32_t j) {
      if (!hit && j > i && overlap_exact(squares[i], squares[j])) hit = {i, j};
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

}  // namespace cantorgap
