#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace cantorgap {

/// A Cantor set on the line given by its bounding interval and a finite
/// prefix of its gaps (open intervals). The thickness is computed over the
/// listed gaps only.
struct Cantor1D {
  std::pair<double, double> interval{0.0, 1.0};
  std::vector<std::pair<double, double>> gaps;

  /// Sorts the gaps; throws InvalidParams when they overlap or leave the interval.
  void normalize();
};

/// Newhouse thickness: min over gaps I of min(l(U_left), l(U_right)) / l(I)
/// where each bridge U runs from I to the nearest gap at least as long as I.
/// The two components outside the bounding interval count as infinite gaps.
/// Throws NoGaps.
double tau(const Cantor1D& c);

enum class GapVerdict { KInGapOfL, LInGapOfK, MustIntersect, Inconclusive };

std::string_view to_string(GapVerdict v);

/// MustIntersect when tau(K) tau(L) >= 1 up to the rounding of the listed
/// endpoints (4 eps max|x| over the shortest listed length, per set).
GapVerdict gap_lemma_1d(const Cantor1D& k, const Cantor1D& l);

/// log 2 / log(2 + 1/tau). Throws NonpositiveTau.
double hausdorff_lower(double tau);

/// Middle-alpha set on [a, b]: every interval loses its open middle part of
/// relative length alpha, down to the given number of levels.
Cantor1D middle_alpha(double alpha, unsigned levels, double a = 0.0, double b = 1.0);

/// Closed intervals that survive after removing the listed gaps.
std::vector<std::pair<double, double>> bridges(const Cantor1D& c);

}  // namespace cantorgap
