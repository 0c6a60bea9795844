#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cantorgap/geometry.hpp"
#include "cantorgap/interval.hpp"

namespace cantorgap {

/// A holomorphic contraction of the initial square.
class ContractionMap {
 public:
  enum class Kind { Affine, General };

  using Function = std::function<Point(Point)>;

  /// z -> a z + b.
  static ContractionMap affine(Point a, Point b);
  /// Arbitrary holomorphic map given by f and f'. The caller vouches that f
  /// is univalent on the extension disk; containment is checked on samples.
  static ContractionMap general(Function f, Function df);
  /// z -> b + a z + c z^2, a general map with a checkable univalence radius
  /// |a| / (2|c|).
  static ContractionMap quadratic(Point a, Point b, Point c);

  Kind kind() const { return kind_; }
  bool is_affine() const { return kind_ == Kind::Affine; }

  // Affine coefficients; for general maps the linearisation at the origin.
  Point a() const { return a_; }
  Point b() const { return b_; }
  std::optional<Point> quadratic_coefficient() const { return c_; }

  Point operator()(Point z) const;
  Point derivative(Point z) const;

 private:
  Kind kind_ = Kind::Affine;
  Point a_{};
  Point b_{};
  std::optional<Point> c_;
  Function f_;
  Function df_;
};

struct IfsOptions {
  // Perturbation experiments may push images into contact; everything except
  // the Cantor-set interpretation still makes sense then.
  bool allow_overlapping_images = false;
};

/// Initial square S, maps f_1..f_p and the extension ratio r, so that each
/// map extends to the disk S' concentric with S of diameter diam(S)/r.
class IfsSpec {
 public:
  IfsSpec(OrientedSquare square, std::vector<ContractionMap> maps, double extension_ratio,
          IfsOptions options = {});

  const OrientedSquare& square() const { return square_; }
  const std::vector<ContractionMap>& maps() const { return maps_; }
  const ContractionMap& map(std::size_t i) const { return maps_[i]; }
  std::size_t size() const { return maps_.size(); }
  double extension_ratio() const { return extension_ratio_; }
  bool all_affine() const { return all_affine_; }
  const IfsOptions& options() const { return options_; }

  Disk extension_disk() const;

 private:
  OrientedSquare square_;
  std::vector<ContractionMap> maps_;
  double extension_ratio_;
  IfsOptions options_;
  bool all_affine_ = true;
};

/// Digits in application order: digits[0] is applied first, so the word
/// (i1, ..., ik) denotes f_ik o ... o f_i1. Digits are 0-based here and
/// 1-based in every serialised form.
struct Word {
  std::vector<std::uint32_t> digits;

  std::size_t size() const { return digits.size(); }
  bool empty() const { return digits.empty(); }
  /// The son word: apply d before everything else.
  Word prepend(std::uint32_t d) const;
  /// True when descendant = J·this for some J, i.e. its piece lies in ours.
  bool is_ancestor_of(const Word& descendant) const;
  std::string str() const;
};

bool operator==(const Word& a, const Word& b);
bool operator<(const Word& a, const Word& b);

struct Piece {
  Word word;
  Point center{};  // image of the centre of S
  Point deriv{1.0, 0.0};
  Interval delta;  // inscribed diameter
  Interval Delta;  // escribed diameter
  std::optional<OrientedSquare> polygon;
};

/// z -> a z + b.
struct AffineMap {
  Point a{1.0, 0.0};
  Point b{};

  Point operator()(Point z) const { return a * z + b; }
  AffineMap then(const AffineMap& outer) const { return {outer.a * a, outer.a * b + outer.b}; }
  AffineMap inverse() const { return {1.0 / a, -b / a}; }
};

/// Composite affine map of an all-affine word.
AffineMap affine_of(const IfsSpec& spec, const Word& w);

/// Image of S under an affine map.
OrientedSquare image_square(const OrientedSquare& s, const AffineMap& f);

/// f_I(z). Throws DomainEscape when z or an intermediate point leaves S'.
Point evaluate(const IfsSpec& spec, const Word& w, Point z);
/// f_I'(z) by the chain rule.
Point derivative_at(const IfsSpec& spec, const Word& w, Point z);

Piece piece_of(const IfsSpec& spec, const Word& w, const Interval& D);
std::vector<Piece> children(const IfsSpec& spec, const Piece& p, const Interval& D);

/// Piece cap: CANTOR_GAP_BUDGET when set, else 10^7.
std::size_t piece_budget();

/// All p^n pieces of depth n. Throws BudgetExceeded above the budget.
std::vector<Piece> enumerate_depth(const IfsSpec& spec, std::size_t n, const Interval& D,
                                   std::size_t budget = piece_budget());

}  // namespace cantorgap
