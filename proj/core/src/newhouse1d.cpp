#include "cantorgap/newhouse1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cantorgap/error.hpp"

namespace cantorgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double length(const std::pair<double, double>& g) { return g.second - g.first; }

// True when [lo, hi] sits inside an open gap of c, the outside included.
bool inside_gap(double lo, double hi, const Cantor1D& c) {
  if (hi < c.interval.first || lo > c.interval.second) return true;
  return std::any_of(c.gaps.begin(), c.gaps.end(),
                     [&](const auto& g) { return g.first < lo && hi < g.second; });
}

}  // namespace

void Cantor1D::normalize() {
  if (!(interval.first < interval.second)) throw Error(ErrorCode::InvalidParams, "empty bounding interval");
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const auto& g = gaps[i];
    if (!(g.first < g.second)) throw Error(ErrorCode::InvalidParams, "empty gap");
    if (g.first <= interval.first || g.second >= interval.second) {
      throw Error(ErrorCode::InvalidParams, "gap leaves the bounding interval");
    }
    if (i > 0 && gaps[i - 1].second >= g.first) throw Error(ErrorCode::InvalidParams, "gaps overlap");
  }
}

double tau(const Cantor1D& c) {
  if (c.gaps.empty()) throw Error(ErrorCode::NoGaps, "thickness needs at least one gap");
  Cantor1D sorted = c;
  sorted.normalize();
  const auto& g = sorted.gaps;
  const std::size_t m = g.size();

  // Nearest gap on each side at least as long, found with monotone stacks.
  std::vector<double> left(m), right(m);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < m; ++i) {
    while (!stack.empty() && length(g[stack.back()]) < length(g[i])) stack.pop_back();
    left[i] = g[i].first - (stack.empty() ? sorted.interval.first : g[stack.back()].second);
    stack.push_back(i);
  }
  stack.clear();
  for (std::size_t i = m; i-- > 0;) {
    while (!stack.empty() && length(g[stack.back()]) < length(g[i])) stack.pop_back();
    right[i] = (stack.empty() ? sorted.interval.second : g[stack.back()].first) - g[i].second;
    stack.push_back(i);
  }
  double best = kInf;
  for (std::size_t i = 0; i < m; ++i) best = std::min(best, std::min(left[i], right[i]) / length(g[i]));
  return best;
}

std::string_view to_string(GapVerdict v) {
  switch (v) {
    case GapVerdict::KInGapOfL: return "K_in_gap_of_L";
    case GapVerdict::LInGapOfK: return "L_in_gap_of_K";
    case GapVerdict::MustIntersect: return "MustIntersect";
    case GapVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

// Relative error a length ratio can pick up from rounding the listed endpoints.
double resolution(const Cantor1D& c) {
  const double m = std::max(std::abs(c.interval.first), std::abs(c.interval.second));
  double shortest = c.interval.second - c.interval.first;
  for (const auto& [a, b] : c.gaps) shortest = std::min(shortest, b - a);
  for (const auto& [a, b] : bridges(c)) {
    if (b > a) shortest = std::min(shortest, b - a);
  }
  return 4.0 * std::numeric_limits<double>::epsilon() * m / shortest;
}

}  // namespace

GapVerdict gap_lemma_1d(const Cantor1D& k, const Cantor1D& l) {
  if (inside_gap(k.interval.first, k.interval.second, l)) return GapVerdict::KInGapOfL;
  if (inside_gap(l.interval.first, l.interval.second, k)) return GapVerdict::LInGapOfK;
  if (k.gaps.empty() || l.gaps.empty()) return GapVerdict::MustIntersect;
  const double slack = (1.0 + resolution(k)) * (1.0 + resolution(l));
  return tau(k) * tau(l) * slack >= 1.0 ? GapVerdict::MustIntersect : GapVerdict::Inconclusive;
}

double hausdorff_lower(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTau, "tau must be positive");
  if (std::isinf(t)) return 1.0;
  return std::log(2.0) / std::log(2.0 + 1.0 / t);
}

Cantor1D middle_alpha(double alpha, unsigned levels, double a, double b) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(a < b)) throw Error(ErrorCode::InvalidParams, "need 0 < alpha < 1 and a < b");
  Cantor1D c;
  c.interval = {a, b};
  std::vector<std::pair<double, double>> level{{a, b}};
  const double keep = 0.5 * (1.0 - alpha);
  for (unsigned n = 0; n < levels; ++n) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * level.size());
    for (const auto& [lo, hi] : level) {
      const double w = hi - lo;
      const double g0 = lo + keep * w;
      const double g1 = hi - keep * w;
      c.gaps.emplace_back(g0, g1);
      next.emplace_back(lo, g0);
      next.emplace_back(g1, hi);
    }
    level = std::move(next);
  }
  std::sort(c.gaps.begin(), c.gaps.end());
  return c;
}

std::vector<std::pair<double, double>> bridges(const Cantor1D& c) {
  Cantor1D sorted = c;
  sorted.normalize();
  std::vector<std::pair<double, double>> out;
  double start = sorted.interval.first;
  for (const auto& g : sorted.gaps) {
    out.emplace_back(start, g.first);
    start = g.second;
  }
  out.emplace_back(start, sorted.interval.second);
  return out;
}

}  // namespace cantorgap
