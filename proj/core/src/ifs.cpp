#include "cantorgap/ifs.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "cantorgap/error.hpp"

namespace cantorgap {

namespace {

constexpr int kBoundarySamples = 512;

bool in_extension(const Disk& ext, Point z) {
  return dist(z, ext.center) <= ext.radius() * (1.0 + 1e-12);
}

void validate_map(const ContractionMap& f, std::size_t i, const OrientedSquare& s, const Disk& ext) {
  const std::string which = "map " + std::to_string(i + 1);
  if (f.is_affine()) {
    const double m = std::abs(f.a());
    if (!(m > 0.0 && m < 1.0)) throw Error(ErrorCode::InvalidSpec, which + ": need 0 < |a| < 1");
    if (!square_in_square(image_square(s, {f.a(), f.b()}), s)) {
      throw Error(ErrorCode::InvalidSpec, which + ": f(S) is not compactly inside S");
    }
    return;
  }
  if (const auto c = f.quadratic_coefficient()) {
    const double reach = std::abs(ext.center) + ext.radius();
    if (!(2.0 * std::abs(*c) * reach < std::abs(f.a()))) {
      throw Error(ErrorCode::InvalidSpec, which + ": quadratic map not univalent on S'");
    }
  }
  const double margin = 1e-6 * s.inscribed_diameter();
  for (int k = 0; k < kBoundarySamples; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / kBoundarySamples;
    const Point z = ext.center + std::polar(ext.radius(), theta);
    if (!s.contains(f(z), margin)) {
      throw Error(ErrorCode::InvalidSpec, which + ": f(S') is not compactly inside S");
    }
  }
}

}  // namespace

ContractionMap ContractionMap::affine(Point a, Point b) {
  ContractionMap m;
  m.kind_ = Kind::Affine;
  m.a_ = a;
  m.b_ = b;
  return m;
}

ContractionMap ContractionMap::general(Function f, Function df) {
  ContractionMap m;
  m.kind_ = Kind::General;
  m.b_ = f(Point{});
  m.a_ = df(Point{});
  m.f_ = std::move(f);
  m.df_ = std::move(df);
  return m;
}

ContractionMap ContractionMap::quadratic(Point a, Point b, Point c) {
  ContractionMap m;
  m.kind_ = Kind::General;
  m.a_ = a;
  m.b_ = b;
  m.c_ = c;
  return m;
}

Point ContractionMap::operator()(Point z) const {
  if (kind_ == Kind::Affine) return a_ * z + b_;
  if (c_) return b_ + z * (a_ + *c_ * z);
  return f_(z);
}

Point ContractionMap::derivative(Point z) const {
  if (kind_ == Kind::Affine) return a_;
  if (c_) return a_ + 2.0 * *c_ * z;
  return df_(z);
}

IfsSpec::IfsSpec(OrientedSquare square, std::vector<ContractionMap> maps, double extension_ratio,
                 IfsOptions options)
    : square_(square), maps_(std::move(maps)), extension_ratio_(extension_ratio), options_(options) {
  if (!(square_.diameter > 0.0) || !std::isfinite(square_.diameter)) {
    throw Error(ErrorCode::InvalidSpec, "square diameter must be positive");
  }
  if (maps_.size() < 2) throw Error(ErrorCode::InvalidSpec, "need at least two maps");
  if (!(extension_ratio_ > 0.0 && extension_ratio_ < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "extension ratio must lie in (0, 1)");
  }
  const Disk ext = extension_disk();
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    validate_map(maps_[i], i, square_, ext);
    all_affine_ = all_affine_ && maps_[i].is_affine();
  }
  if (all_affine_ && !options_.allow_overlapping_images) {
    std::vector<OrientedSquare> images;
    images.reserve(maps_.size());
    for (const auto& f : maps_) images.push_back(image_square(square_, {f.a(), f.b()}));
    if (const auto hit = find_self_overlap(images)) {
      throw Error(ErrorCode::InvalidSpec, "images of maps " + std::to_string(hit->first + 1) +
                                              " and " + std::to_string(hit->second + 1) +
                                              " overlap");
    }
  }
}

Disk IfsSpec::extension_disk() const { return {square_.center, square_.diameter / extension_ratio_}; }

Word Word::prepend(std::uint32_t d) const {
  Word w;
  w.digits.reserve(digits.size() + 1);
  w.digits.push_back(d);
  w.digits.insert(w.digits.end(), digits.begin(), digits.end());
  return w;
}

bool Word::is_ancestor_of(const Word& descendant) const {
  if (descendant.size() < size()) return false;
  return std::equal(digits.begin(), digits.end(), descendant.digits.end() - static_cast<long>(size()));
}

std::string Word::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < digits.size(); ++i) os << (i ? "," : "") << digits[i] + 1;
  os << ')';
  return os.str();
}

bool operator==(const Word& a, const Word& b) { return a.digits == b.digits; }
bool operator<(const Word& a, const Word& b) { return a.digits < b.digits; }

AffineMap affine_of(const IfsSpec& spec, const Word& w) {
  AffineMap f;
  for (const std::uint32_t d : w.digits) {
    const auto& m = spec.map(d);
    if (!m.is_affine()) throw Error(ErrorCode::InvalidParams, "affine_of on a general map");
    f = f.then({m.a(), m.b()});
  }
  return f;
}

OrientedSquare image_square(const OrientedSquare& s, const AffineMap& f) {
  return {f(s.center), std::abs(f.a) * s.diameter, s.rotation + std::arg(f.a)};
}

Point evaluate(const IfsSpec& spec, const Word& w, Point z) {
  const Disk ext = spec.extension_disk();
  if (!in_extension(ext, z)) throw Error(ErrorCode::DomainEscape, "start point outside S'");
  for (const std::uint32_t d : w.digits) {
    z = spec.map(d)(z);
    if (!in_extension(ext, z)) throw Error(ErrorCode::DomainEscape, "orbit left S' under " + w.str());
  }
  return z;
}

Point derivative_at(const IfsSpec& spec, const Word& w, Point z) {
  const Disk ext = spec.extension_disk();
  if (!in_extension(ext, z)) throw Error(ErrorCode::DomainEscape, "start point outside S'");
  Point deriv{1.0, 0.0};
  for (const std::uint32_t d : w.digits) {
    deriv *= spec.map(d).derivative(z);
    z = spec.map(d)(z);
    if (!in_extension(ext, z)) throw Error(ErrorCode::DomainEscape, "orbit left S' under " + w.str());
  }
  return deriv;
}

Piece piece_of(const IfsSpec& spec, const Word& w, const Interval& D) {
  const OrientedSquare& s = spec.square();
  Piece p;
  p.word = w;
  if (spec.all_affine()) {
    const AffineMap f = affine_of(spec, w);
    const OrientedSquare img = image_square(s, f);
    p.center = img.center;
    p.deriv = f.a;
    p.delta = Interval::point(img.inscribed_diameter());
    p.Delta = Interval::point(img.escribed_diameter());
    p.polygon = img;
    return p;
  }
  p.center = evaluate(spec, w, s.center);
  p.deriv = derivative_at(spec, w, s.center);
  const Interval m = Interval::point(std::abs(p.deriv));
  const Interval d = Interval::point(D.hi);
  const Interval inner = m * Interval::point(s.inscribed_diameter());
  const Interval outer = m * Interval::point(s.escribed_diameter());
  p.delta = {(inner / d).lo, (d * inner).hi};
  p.Delta = {(outer / d).lo, (d * outer).hi};
  return p;
}

std::vector<Piece> children(const IfsSpec& spec, const Piece& p, const Interval& D) {
  std::vector<Piece> out;
  out.reserve(spec.size());
  for (std::uint32_t i = 0; i < spec.size(); ++i) out.push_back(piece_of(spec, p.word.prepend(i), D));
  return out;
}

std::size_t piece_budget() {
  if (const char* env = std::getenv("CANTOR_GAP_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

std::vector<Piece> enumerate_depth(const IfsSpec& spec, std::size_t n, const Interval& D,
                                   std::size_t budget) {
  std::size_t count = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (count > budget / spec.size()) {
      throw Error(ErrorCode::BudgetExceeded, "depth " + std::to_string(n) + " exceeds the piece budget");
    }
    count *= spec.size();
  }
  std::vector<Piece> out;
  out.reserve(count);
  if (spec.all_affine()) {
    // Build composite maps level by level instead of re-composing each word.
    std::vector<std::pair<Word, AffineMap>> level{{Word{}, AffineMap{}}};
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::pair<Word, AffineMap>> next;
      next.reserve(level.size() * spec.size());
      for (const auto& [w, f] : level) {
        for (std::uint32_t i = 0; i < spec.size(); ++i) {
          const auto& m = spec.map(i);
          next.emplace_back(w.prepend(i), AffineMap{m.a(), m.b()}.then(f));
        }
      }
      level = std::move(next);
    }
    for (auto& [w, f] : level) {
      const OrientedSquare img = image_square(spec.square(), f);
      Piece p;
      p.word = std::move(w);
      p.center = img.center;
      p.deriv = f.a;
      p.delta = Interval::point(img.inscribed_diameter());
      p.Delta = Interval::point(img.escribed_diameter());
      p.polygon = img;
      out.push_back(std::move(p));
    }
    return out;
  }
  std::vector<Word> level{Word{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Word> next;
    next.reserve(level.size() * spec.size());
    for (const Word& w : level) {
      for (std::uint32_t i = 0; i < spec.size(); ++i) next.push_back(w.prepend(i));
    }
    level = std::move(next);
  }
  for (const Word& w : level) out.push_back(piece_of(spec, w, D));
  return out;
}

}  // namespace cantorgap
