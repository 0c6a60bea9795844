#include "cantorgap/interval.hpp"

#include <ostream>
#include <stdexcept>

#include "cantorgap/error.hpp"

namespace cantorgap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyRegionList: return "EmptyRegionList";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DomainEscape: return "DomainEscape";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TailBoundUnavailable: return "TailBoundUnavailable";
    case ErrorCode::DivergentRecursion: return "DivergentRecursion";
    case ErrorCode::MismatchedSquares: return "MismatchedSquares";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::CaseSelectionAmbiguous: return "CaseSelectionAmbiguous";
    case ErrorCode::NoGaps: return "NoGaps";
    case ErrorCode::NonpositiveTau: return "NonpositiveTau";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ContainmentLost: return "ContainmentLost";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

double round_down(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double round_up(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

namespace {

// Exact results stay exact; only rounded ones are widened.
Interval widen(double lo, double hi, bool exact) {
  if (exact) return {lo, hi};
  return {round_down(lo), round_up(hi)};
}

}  // namespace

Interval operator+(const Interval& a, const Interval& b) {
  return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)};
}

Interval operator*(const Interval& a, const Interval& b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
  const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
  const bool exact = (a.is_point() && (a.lo == 1.0 || a.lo == 0.0)) ||
                     (b.is_point() && (b.lo == 1.0 || b.lo == 0.0));
  return widen(lo, hi, exact);
}

Interval operator*(double s, const Interval& a) { return Interval::point(s) * a; }

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) {
    throw std::domain_error("interval division by an interval containing zero");
  }
  const double q1 = a.lo / b.lo;
  const double q2 = a.lo / b.hi;
  const double q3 = a.hi / b.lo;
  const double q4 = a.hi / b.hi;
  const double lo = std::min(std::min(q1, q2), std::min(q3, q4));
  const double hi = std::max(std::max(q1, q2), std::max(q3, q4));
  return widen(lo, hi, b.is_point() && b.lo == 1.0);
}

Interval sqrt(const Interval& a) {
  if (a.lo < 0.0) throw std::domain_error("interval sqrt of negative values");
  return {round_down(std::sqrt(a.lo)), round_up(std::sqrt(a.hi))};
}

Interval square(const Interval& a) {
  if (a.lo >= 0.0) return a * a;
  if (a.hi <= 0.0) return Interval{-a.hi, -a.lo} * Interval{-a.hi, -a.lo};
  const double m = std::max(-a.lo, a.hi);
  return {0.0, round_up(m * m)};
}

Interval pow(const Interval& a, unsigned n) {
  Interval r = Interval::point(1.0);
  for (unsigned i = 0; i < n; ++i) r = r * a;
  return r;
}

Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo << ", " << x.hi << ']';
}

}  // namespace cantorgap
