#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cantorgap/interval.hpp"

namespace cantorgap {

/// Plane points are complex numbers; maps act on them by complex arithmetic.
using Point = std::complex<double>;

/// Absolute slack used on certified comparisons between O(1) quantities.
inline constexpr double kSlack = 1e-12;

double dist(Point a, Point b);

struct Disk {
  Point center{};
  double diameter = 0.0;

  double radius() const { return 0.5 * diameter; }
  bool contains(Point p, double slack = 0.0) const;
  bool contains(const Disk& other, double slack = 0.0) const;
  double distance(Point p) const;
};

/// Open square given by its centre, diagonal length and rotation (radians).
struct OrientedSquare {
  Point center{};
  double diameter = 0.0;
  double rotation = 0.0;

  double side() const;
  double half_side() const { return 0.5 * side(); }
  double inscribed_diameter() const { return side(); }
  double escribed_diameter() const { return diameter; }

  // Coordinates in the square's own axes, origin at the centre (unscaled).
  Point to_local(Point p) const;
  Point from_local(Point q) const;

  std::array<Point, 4> corners() const;
  bool contains(Point p, double slack = 0.0) const;
  // Euclidean distance to the closed square (0 inside).
  double distance(Point p) const;
  // Distance from an inside point to the boundary (negative outside).
  double clearance(Point p) const;
};

bool operator==(const OrientedSquare& a, const OrientedSquare& b);

/// A disk inside Γ ∩ S, where Γ is the disk centred at z through z2.
/// The radius is always larger than |z - z2| / 5.
Disk quarter_disk_in_square(Point z, Point z2, const OrientedSquare& s);

/// True iff the open squares intersect (separating-axis test).
bool overlap_exact(const OrientedSquare& a, const OrientedSquare& b);

bool disks_overlap(const Disk& a, const Disk& b);
bool disk_overlaps_square(const Disk& d, const OrientedSquare& s);
bool disk_in_square(const Disk& d, const OrientedSquare& s, double slack = 0.0);
bool square_in_square(const OrientedSquare& inner, const OrientedSquare& outer, double slack = 0.0);
bool square_in_disk(const OrientedSquare& s, const Disk& d, double slack = 0.0);

/// Convex polygon a ∩ b (empty when the squares do not overlap).
std::vector<Point> overlap_polygon(const OrientedSquare& a, const OrientedSquare& b);

/// Whether a convex polygon and an open disk intersect.
bool polygon_meets_disk(std::span<const Point> poly, const Disk& d);

/// A point inside both squares, or nothing when they do not overlap.
std::optional<Point> overlap_witness(const OrientedSquare& a, const OrientedSquare& b);

using Region = std::variant<OrientedSquare, Disk>;

double distance(const Region& r, Point p);

struct EmptyDiskOptions {
  // Root grid pitch; the certified slack on the max distance is pitch / 256.
  double pitch = 0.0;
  std::size_t max_cells = 50'000'000;
};

struct EmptyDiskResult {
  // Enclosure of 2 * max_{z in S} dist(z, union of regions).
  Interval diameter;
  // Sample point achieving the lower end.
  Point witness{};
  std::size_t cells_visited = 0;
};

inline constexpr double kEmptyDiskResolution = 1.0 / 256.0;

/// Certified enclosure of twice the largest distance from a point of S to
/// the union of the regions.
EmptyDiskResult largest_empty_disk(const OrientedSquare& s, std::span<const Region> regions,
                                   const EmptyDiskOptions& opts);

/// Index pairs (i, j) with a[i] and b[j] overlapping (open squares).
std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(
    std::span<const OrientedSquare> a, std::span<const OrientedSquare> b);

/// First pair of overlapping squares within one list, if any.
std::optional<std::pair<std::size_t, std::size_t>> find_self_overlap(
    std::span<const OrientedSquare> squares);

}  // namespace cantorgap
