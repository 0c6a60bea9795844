#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "cantorgap/geometry.hpp"
#include "cantorgap/ifs.hpp"
#include "cantorgap/interval.hpp"

namespace cantorgap {

/// [1, 1] for affine systems, else [1, min((1+r)^3/(1-r), (1+r)/(1-r)^3)].
Interval distortion_bounds(const IfsSpec& spec);

/// Sampled lower estimate of S_n: the largest ratio |f_I'(z)| / |f_I'(z')|
/// over words of length n and a grid x grid sample of the closed square.
double s_n(const IfsSpec& spec, std::size_t n, std::size_t grid = 9);

/// prod_{k >= n} (1 + (5/R) a^k), summed until the terms vanish in double.
double tail_product(double a, double R, std::size_t n);

/// Smallest n with tail_product(a, R, n) <= 1 + eps and a^n / R small
/// enough for (1+t)/(1-t)^3 <= 1 + 5t. Throws TailBoundUnavailable when
/// a >= 1 or R <= 0.
std::size_t tail_start_index(double a, double R, double eps);

struct DistortionRefinement {
  Interval D;
  std::size_t n_eps = 0;
  double a = 0.0;  // per-step contraction of escribed diameters
  double R = 0.0;  // Koebe radius relative to diam(S)
};

/// [max_{n <= n_eps} s_n, max_{n <= n_eps} s_n * (1 + eps)] intersected with
/// distortion_bounds. Affine systems give [1, 1].
DistortionRefinement distortion_refine(const IfsSpec& spec, double eps, std::size_t grid = 9,
                                       std::size_t budget = piece_budget());

struct ReductionRatios {
  Interval lambda0;
  Interval Lambda0;
  Interval lambda;
  Interval Lambda;
};

ReductionRatios reduction_ratios(const IfsSpec& spec, const Interval& D);

struct GapOptions {
  // Grid pitch; 0 means diam-inscribed(S) / 512.
  double pitch = 0.0;
  // Deepest level whose outer enclosures feed the lower bound.
  std::size_t depth = 3;
  // Lower-bound levels are skipped once they would exceed this many pieces.
  std::size_t piece_cap = 200'000;
};

struct GapResult {
  Interval sigma0;
  Interval rho;  // enclosure of 2 max_{z in S} dist(z, K)
  double lipschitz = 0.0;
  std::size_t depth_used = 0;
  double pitch = 0.0;
  Point witness{};  // point of S far from the depth-1 pieces
};

/// Certified enclosure of sigma^0 = rho(S) / delta(S). The upper bound uses
/// rho <= rho1 / (1 - L); the lower bound is the largest disk found empty
/// of the outer enclosures of levels 1..depth, the best of them taken.
GapResult gap_sigma(const IfsSpec& spec, const Interval& D, const GapOptions& opts = {});

struct InvariantReport {
  Interval D;
  Interval lambda0;
  Interval Lambda0;
  Interval lambda;
  Interval Lambda;
  Interval sigma0;
  Interval sigma;
  Interval thickness;
  std::size_t depth_used = 0;
  double grid_used = 0.0;
  // Initial square; absent for reports read back from JSON without one.
  std::optional<OrientedSquare> square;
};

struct ThicknessOptions {
  GapOptions gap;
  // Tail tolerance for distortion_refine on general systems.
  double refine_eps = 0.1;
};

InvariantReport thickness(const IfsSpec& spec, const ThicknessOptions& opts = {});

/// lambda0 / (D^5 sqrt(sigma0)).
Interval thickness_formula(const Interval& lambda0, const Interval& D, const Interval& sigma0);

enum class BalanceVerdict { Certified, FailedCondition1, FailedSufficientCondition, Unknown };

std::string_view to_string(BalanceVerdict v);

/// Decides the well-balanced hypothesis through its sufficient test
/// Lambda < 1/20 and sigma_K + 2 Lambda_K < 1 / (20 D_L^2) (and symmetrically).
/// Throws MismatchedSquares when both reports carry different squares.
BalanceVerdict well_balanced(const InvariantReport& k, const InvariantReport& l);

}  // namespace cantorgap
