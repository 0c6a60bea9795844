#include "cantorgap/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cantorgap/error.hpp"

namespace cantorgap {

namespace {

// (1+t)/(1-t)^3 <= 1 + 5t holds for 0 <= t <= 0.09.
constexpr double kKoebeLinearRange = 0.09;

std::vector<Point> sample_square(const OrientedSquare& s, std::size_t grid) {
  grid = std::max<std::size_t>(grid, 2);
  const double h = s.half_side();
  std::vector<Point> pts;
  pts.reserve(grid * grid);
  for (std::size_t j = 0; j < grid; ++j) {
    for (std::size_t i = 0; i < grid; ++i) {
      const double x = -h + 2.0 * h * static_cast<double>(i) / static_cast<double>(grid - 1);
      const double y = -h + 2.0 * h * static_cast<double>(j) / static_cast<double>(grid - 1);
      pts.push_back(s.from_local({x, y}));
    }
  }
  return pts;
}

double lipschitz_bound(const IfsSpec& spec, const Interval& D) {
  double L = 0.0;
  const OrientedSquare& s = spec.square();
  const Interval reach = Interval::point(std::abs(s.center)) + Interval::point(0.5 * s.escribed_diameter());
  for (const auto& f : spec.maps()) {
    const double m = std::abs(f.derivative(s.center));
    double bound = f.is_affine() ? m : (Interval::point(D.hi) * Interval::point(m)).hi;
    if (const auto c = f.quadratic_coefficient()) {
      // max |a + 2cz| over the convex square.
      const Interval direct = Interval::point(std::abs(f.a())) + 2.0 * (Interval::point(std::abs(*c)) * reach);
      bound = std::min(bound, direct.hi);
    }
    L = std::max(L, bound);
  }
  return L;
}

std::vector<Region> piece_regions(const std::vector<Piece>& pieces, bool inner) {
  std::vector<Region> out;
  out.reserve(pieces.size());
  for (const Piece& p : pieces) {
    if (p.polygon) {
      out.emplace_back(*p.polygon);
    } else {
      out.emplace_back(Disk{p.center, inner ? p.delta.lo : p.Delta.hi});
    }
  }
  return out;
}

}  // namespace

Interval distortion_bounds(const IfsSpec& spec) {
  if (spec.all_affine()) return Interval::point(1.0);
  const Interval r = Interval::point(spec.extension_ratio());
  const Interval one = Interval::point(1.0);
  const Interval a = pow(one + r, 3) / (one - r);
  const Interval b = (one + r) / pow(one - r, 3);
  return {1.0, std::min(a.hi, b.hi)};
}

double s_n(const IfsSpec& spec, std::size_t n, std::size_t grid) {
  if (spec.all_affine() || n == 0) return 1.0;
  const std::vector<Point> pts = sample_square(spec.square(), grid);
  double worst = 1.0;
  for (const Piece& p : enumerate_depth(spec, n, Interval::point(1.0))) {
    double lo = INFINITY, hi = 0.0;
    for (const Point z : pts) {
      const double m = std::abs(derivative_at(spec, p.word, z));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

double tail_product(double a, double R, std::size_t n) {
  double log_sum = 0.0;
  double term = 5.0 / R * std::pow(a, static_cast<double>(n));
  for (int k = 0; k < 10'000 && term > 1e-300; ++k) {
    log_sum += std::log1p(term);
    if (term < 1e-18 * log_sum) {
      // Remainder of the geometric tail.
      log_sum += term * a / (1.0 - a);
      break;
    }
    term *= a;
  }
  return std::exp(log_sum);
}

std::size_t tail_start_index(double a, double R, double eps) {
  if (!(R > 0.0)) throw Error(ErrorCode::TailBoundUnavailable, "no Koebe radius R > 0");
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::TailBoundUnavailable, "contraction a must lie in (0, 1)");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParams, "eps must be positive");
  for (std::size_t n = 0; n < 100'000; ++n) {
    if (std::pow(a, static_cast<double>(n)) / R <= kKoebeLinearRange && tail_product(a, R, n) <= 1.0 + eps) {
      return n;
    }
  }
  throw Error(ErrorCode::TailBoundUnavailable, "tail product does not converge in range");
}

DistortionRefinement distortion_refine(const IfsSpec& spec, double eps, std::size_t grid,
                                       std::size_t budget) {
  DistortionRefinement out;
  out.D = distortion_bounds(spec);
  if (spec.all_affine()) return out;

  const OrientedSquare& s = spec.square();
  const std::vector<Piece> ones = enumerate_depth(spec, 1, out.D);
  out.a = lipschitz_bound(spec, out.D);
  double R = INFINITY;
  for (const Piece& p : ones) {
    const double reach = std::min(p.Delta.hi, (Interval::point(out.a) * Interval::point(s.escribed_diameter())).hi);
    R = std::min(R, s.clearance(p.center) - 0.5 * reach);
  }
  out.R = R / s.escribed_diameter();
  out.n_eps = tail_start_index(out.a, out.R, eps);

  std::size_t words = 1;
  for (std::size_t k = 0; k < out.n_eps; ++k) {
    if (words > budget / spec.size()) throw Error(ErrorCode::BudgetExceeded, "n_eps too deep for the budget");
    words *= spec.size();
  }
  double best = 1.0;
  for (std::size_t n = 1; n <= out.n_eps; ++n) best = std::max(best, s_n(spec, n, grid));
  const Interval refined{best, (Interval::point(best) * Interval::point(1.0 + eps)).hi};
  const Interval both = intersect(out.D, refined);
  out.D = both.valid() ? both : out.D;
  return out;
}

ReductionRatios reduction_ratios(const IfsSpec& spec, const Interval& D) {
  const Interval ds = Interval::point(spec.square().inscribed_diameter());
  Interval lo{INFINITY, INFINITY};
  Interval hi{-INFINITY, -INFINITY};
  for (const Piece& p : enumerate_depth(spec, 1, D)) {
    lo = min(lo, p.delta / ds);
    hi = max(hi, p.Delta / ds);
  }
  const Interval d2 = square(D);
  return {lo, hi, lo / d2, d2 * hi};
}

GapResult gap_sigma(const IfsSpec& spec, const Interval& D, const GapOptions& opts) {
  const OrientedSquare& s = spec.square();
  const double ds = s.inscribed_diameter();
  GapResult out;
  out.pitch = opts.pitch > 0.0 ? opts.pitch : ds / 512.0;
  out.lipschitz = lipschitz_bound(spec, D);
  if (!(out.lipschitz < 1.0)) {
    throw Error(ErrorCode::DivergentRecursion, "Lipschitz bound L >= 1");
  }

  // Levels whose outer enclosures feed the lower bound.
  std::vector<std::vector<Region>> outer;
  std::size_t count = 1;
  for (std::size_t d = 1; d <= std::max<std::size_t>(opts.depth, 1); ++d) {
    if (count > opts.piece_cap / spec.size()) break;
    count *= spec.size();
    outer.push_back(piece_regions(enumerate_depth(spec, d, D), false));
    out.depth_used = d;
  }
  const std::vector<Region> inner = piece_regions(enumerate_depth(spec, 1, D), true);
  const bool same_level_one = spec.all_affine();

  const Interval one_minus_l = Interval::point(1.0) - Interval::point(out.lipschitz);
  const EmptyDiskResult up = largest_empty_disk(s, inner, {out.pitch});
  const double hi = (Interval::point(up.diameter.hi) / one_minus_l).hi;
  out.witness = up.witness;
  double lo = 0.0;
  for (std::size_t d = 0; d < outer.size(); ++d) {
    const double low = (d == 0 && same_level_one) ? up.diameter.lo
                                                  : largest_empty_disk(s, outer[d], {out.pitch}).diameter.lo;
    lo = std::max(lo, low);
  }
  out.rho = {lo, std::max(lo, hi)};
  const Interval dsi = Interval::point(ds);
  out.sigma0 = {(Interval::point(out.rho.lo) / dsi).lo, (Interval::point(out.rho.hi) / dsi).hi};
  return out;
}

Interval thickness_formula(const Interval& lambda0, const Interval& D, const Interval& sigma0) {
  return lambda0 / (pow(D, 5) * sqrt(sigma0));
}

InvariantReport thickness(const IfsSpec& spec, const ThicknessOptions& opts) {
  InvariantReport rep;
  rep.D = distortion_bounds(spec);
  if (!spec.all_affine()) {
    try {
      rep.D = distortion_refine(spec, opts.refine_eps).D;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TailBoundUnavailable && e.code() != ErrorCode::BudgetExceeded) throw;
    }
  }
  const ReductionRatios rr = reduction_ratios(spec, rep.D);
  rep.lambda0 = rr.lambda0;
  rep.Lambda0 = rr.Lambda0;
  rep.lambda = rr.lambda;
  rep.Lambda = rr.Lambda;
  const GapResult gap = gap_sigma(spec, rep.D, opts.gap);
  rep.sigma0 = gap.sigma0;
  rep.sigma = square(rep.D) * rep.sigma0;
  rep.thickness = thickness_formula(rep.lambda0, rep.D, rep.sigma0);
  rep.depth_used = gap.depth_used;
  rep.grid_used = gap.pitch;
  rep.square = spec.square();
  return rep;
}

std::string_view to_string(BalanceVerdict v) {
  switch (v) {
    case BalanceVerdict::Certified: return "Certified";
    case BalanceVerdict::FailedCondition1: return "FailedCondition1";
    case BalanceVerdict::FailedSufficientCondition: return "FailedSufficientCondition";
    case BalanceVerdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

BalanceVerdict well_balanced(const InvariantReport& k, const InvariantReport& l) {
  if (k.square && l.square && !(*k.square == *l.square)) {
    throw Error(ErrorCode::MismatchedSquares, "reports refer to different initial squares");
  }
  const double limit = 1.0 / 20.0;
  if (std::max(k.Lambda.lo, l.Lambda.lo) >= limit) return BalanceVerdict::FailedCondition1;
  const Interval twenty = Interval::point(20.0);
  const Interval one = Interval::point(1.0);
  const Interval lhs_k = k.sigma + Interval::point(2.0) * k.Lambda;
  const Interval lhs_l = l.sigma + Interval::point(2.0) * l.Lambda;
  const Interval rhs_k = one / (twenty * square(l.D));
  const Interval rhs_l = one / (twenty * square(k.D));
  if (std::max(k.Lambda.hi, l.Lambda.hi) < limit && lhs_k.hi < rhs_k.lo && lhs_l.hi < rhs_l.lo) {
    return BalanceVerdict::Certified;
  }
  if (lhs_k.lo >= rhs_k.hi || lhs_l.lo >= rhs_l.hi) return BalanceVerdict::FailedSufficientCondition;
  return BalanceVerdict::Unknown;
}

}  // namespace cantorgap
