#include <cmath>
#include <cstdlib>
#include <numbers>

#include "cantorgap/error.hpp"
#include "cantorgap/ifs.hpp"
#include "cantorgap/invariants.hpp"
#include "cantorgap/tools/commands.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cantorgap;
using testsupport::random_quadratic_spec;
using testsupport::random_word;
using testsupport::sample_piece;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// f1 = z / 2 and a small disjoint second map on S(0, 4).
IfsSpec halving_spec() {
  return IfsSpec({{0, 0}, 4.0, 0.0},
                 {ContractionMap::affine({0.5, 0}, {0, 0}), ContractionMap::affine({0.1, 0}, {1.1, 1.1})}, 0.5);
}

Word word(std::initializer_list<std::uint32_t> one_based) {
  Word w;
  for (auto d : one_based) w.digits.push_back(d - 1);
  return w;
}

}  // namespace

TEST_CASE("spec validation") {
  const OrientedSquare s{{0, 0}, 1.0, 0.0};
  const auto f = ContractionMap::affine({0.2, 0}, {-0.15, 0});
  const auto g = ContractionMap::affine({0.2, 0}, {0.15, 0});
  CHECK_NOTHROW(IfsSpec(s, {f, g}, 0.5));
  CHECK_THROWS_AS(IfsSpec(s, {f}, 0.5), Error);
  CHECK_THROWS_AS(IfsSpec(s, {f, g}, 1.0), Error);
  CHECK_THROWS_AS(IfsSpec(s, {f, ContractionMap::affine({1.0, 0}, {0, 0})}, 0.5), Error);
  CHECK_THROWS_AS(IfsSpec(s, {f, ContractionMap::affine({0.2, 0}, {0.34, 0})}, 0.5), Error);
  // Overlapping images are rejected unless waived.
  const auto h = ContractionMap::affine({0.2, 0}, {-0.1, 0});
  CHECK_THROWS_AS(IfsSpec(s, {f, h}, 0.5), Error);
  CHECK_NOTHROW(IfsSpec(s, {f, h}, 0.5, IfsOptions{true}));
  try {
    IfsSpec(s, {f}, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
}

TEST_CASE("quadratic maps must be univalent on the extension disk") {
  const OrientedSquare s{{0, 0}, 1.0, 0.0};
  const auto good = ContractionMap::quadratic({0.1, 0}, {-0.17, 0}, {0.02, 0});
  const auto bad = ContractionMap::quadratic({0.1, 0}, {0.17, 0}, {0.06, 0});
  CHECK_THROWS_AS(IfsSpec(s, {good, bad}, 0.5), Error);
}

TEST_CASE("words") {
  const Word w = word({1, 2});
  CHECK(w.str() == "(1,2)");
  CHECK(w.prepend(2).str() == "(3,1,2)");
  CHECK(w.is_ancestor_of(w.prepend(0)));
  CHECK_FALSE(w.prepend(0).is_ancestor_of(w));
  CHECK(Word{}.is_ancestor_of(w));
}

TEST_CASE("evaluate examples") {
  const IfsSpec spec = halving_spec();
  CHECK(evaluate(spec, Word{}, {0.3, -0.2}) == Point{0.3, -0.2});
  CHECK(evaluate(spec, word({1, 1}), {1.0, 0}) == Point{0.25, 0});

  const IfsSpec grid = tools::grid_example(4, 0.9);
  const double side = grid.square().side();
  for (std::uint32_t k = 0; k < 16; ++k) {
    const Point expect{((k % 4 + 0.5) / 4 - 0.5) * side, ((k / 4 + 0.5) / 4 - 0.5) * side};
    CHECK(std::abs(evaluate(grid, Word{{k}}, {0, 0}) - expect) < 1e-15);
  }
}

TEST_CASE("derivative examples") {
  const IfsSpec spec = halving_spec();
  CHECK(derivative_at(spec, Word{}, {0.1, 0.1}) == Point{1, 0});
  const IfsSpec two({{0, 0}, 1.0, 0.0},
                    {ContractionMap::affine({0.3, 0}, {0, 0}), ContractionMap::affine({0, 0.2}, {0.25, 0})}, 0.5);
  const Point d = derivative_at(two, word({1, 2}), {0.05, 0.05});
  CHECK(std::abs(d - Point{0, 0.06}) < 1e-16);
}

TEST_CASE("general derivative matches central differences") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const IfsSpec spec = random_quadratic_spec(rng);
    const Word w = random_word(rng, spec.size(), 3);
    const Point z{0.05, -0.1};
    const double h = 1e-5;
    const Point fd = (evaluate(spec, w, z + h) - evaluate(spec, w, z - h)) / (2 * h);
    const Point d = derivative_at(spec, w, z);
    CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
  }
}

TEST_CASE("composition convention: sons apply the new map first") {
  std::mt19937_64 rng(4);
  const IfsSpec spec = random_quadratic_spec(rng);
  const Interval D = distortion_bounds(spec);
  const Word w = word({2, 3});
  for (std::uint32_t i = 0; i < spec.size(); ++i) {
    const Word son = w.prepend(i);
    const Point z{0.1, 0.07};
    CHECK(std::abs(evaluate(spec, son, z) - evaluate(spec, w, spec.map(i)(z))) < 1e-15);
    // delta(f_{iI}(S)) >= |f_I'(0)| / D * delta(S_i).
    const double lhs = sample_piece(spec, son).inscribed;
    const double rhs = std::abs(derivative_at(spec, w, {0, 0})) / D.hi * sample_piece(spec, Word{{i}}).inscribed;
    CHECK(lhs >= rhs);
  }
}

TEST_CASE("piece_of examples") {
  const IfsSpec spec({{0, 0}, 1.0, 0.0},
                     {ContractionMap::affine({0.1, 0}, {-0.2, 0}), ContractionMap::affine({0.1, 0}, {0.2, 0})}, 0.5);
  const Interval D = distortion_bounds(spec);
  const Piece root = piece_of(spec, Word{}, D);
  CHECK(root.delta == Interval::point(1 / kSqrt2));
  CHECK(root.Delta == Interval::point(1.0));
  const Piece p = piece_of(spec, Word{{0}}, D);
  CHECK(p.delta.lo == doctest::Approx(0.1 / kSqrt2).epsilon(1e-15));
  CHECK(p.delta.is_point());
  CHECK(p.Delta == Interval::point(0.1));
  REQUIRE(p.polygon.has_value());
  CHECK(p.polygon->diameter == doctest::Approx(0.1).epsilon(1e-15));

  std::mt19937_64 rng(9);
  const IfsSpec g = random_quadratic_spec(rng);
  const Interval Dg = distortion_bounds(g);
  CHECK(Dg.hi == doctest::Approx(6.75).epsilon(1e-12));
  const Piece q = piece_of(g, word({1, 4}), Dg);
  CHECK(q.delta.hi / q.delta.lo <= Dg.hi * Dg.hi * (1 + 1e-12));
  CHECK(q.Delta.lo <= q.Delta.hi);
  CHECK_FALSE(q.polygon.has_value());
}

TEST_CASE("Lemma 2.7 enclosures contain sampled diameters of general pieces") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const IfsSpec spec = random_quadratic_spec(rng);
    const Interval D = distortion_bounds(spec);
    const Word w = random_word(rng, spec.size(), 4);
    const Piece p = piece_of(spec, w, D);
    const auto sampled = sample_piece(spec, w, 2000);
    // The boundary sample overestimates the inscribed diameter by O(h^2).
    CHECK(p.delta.lo <= sampled.inscribed);
    CHECK(sampled.inscribed * (1 - 1e-6) <= p.delta.hi);
    CHECK(p.Delta.lo <= sampled.escribed * (1 + 1e-6));
    CHECK(sampled.escribed <= p.Delta.hi);
    CHECK(std::abs(p.center - evaluate(spec, w, {0, 0})) < 1e-15);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("children and enumeration") {
  const IfsSpec two({{0, 0}, 1.0, 0.0},
                    {ContractionMap::affine({0.3, 0}, {-0.15, 0}), ContractionMap::affine({0.3, 0}, {0.15, 0})}, 0.5);
  const Interval D = distortion_bounds(two);
  const Piece root = piece_of(two, Word{}, D);
  const auto sons = children(two, root, D);
  CHECK(sons.size() == 2);
  for (const auto& s : sons) CHECK(s.delta.hi < root.delta.hi);

  const IfsSpec three({{0, 0}, 1.0, 0.0},
                      {ContractionMap::affine({0.2, 0}, {-0.2, 0}), ContractionMap::affine({0.2, 0}, {0.2, 0}),
                       ContractionMap::affine({0.2, 0}, {0, 0.2})},
                      0.5);
  CHECK(enumerate_depth(three, 2, distortion_bounds(three)).size() == 9);
  CHECK_THROWS_AS(enumerate_depth(three, 5, distortion_bounds(three), 100), Error);

  const IfsSpec grid = tools::grid_example(4, 0.99);
  const auto cells = enumerate_depth(grid, 1, distortion_bounds(grid));
  CHECK(cells.size() == 16);
  for (const auto& c : cells) CHECK(c.polygon.has_value());
}

TEST_CASE("budget comes from the environment") {
  ::setenv("CANTOR_GAP_BUDGET", "1000", 1);
  CHECK(piece_budget() == 1000);
  ::unsetenv("CANTOR_GAP_BUDGET");
  CHECK(piece_budget() == 10'000'000);
}

TEST_CASE("affine pieces: exact diameters and nesting") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  const OrientedSquare s{{0.5, -1.0}, 3.0, 0.4};
  std::vector<ContractionMap> maps;
  for (const Point q : {Point{-0.25, -0.25}, Point{0.25, -0.25}, Point{0, 0.25}}) {
    const Point a = std::polar(0.3, angle(rng));
    maps.push_back(ContractionMap::affine(a, s.from_local(q * s.side()) - a * s.center));
  }
  const IfsSpec spec(s, maps, 0.5);
  const Interval D = distortion_bounds(spec);
  const auto pieces = enumerate_depth(spec, 5, D);
  int bad = 0;
  for (const Piece& p : pieces) {
    const double expect = std::abs(affine_of(spec, p.word).a) * s.inscribed_diameter();
    if (std::abs(p.delta.lo - expect) > 1e-12 * expect) ++bad;
    if (!p.delta.is_point()) ++bad;
    Word father{std::vector<std::uint32_t>(p.word.digits.begin() + 1, p.word.digits.end())};
    const Piece f = piece_of(spec, father, D);
    if (!square_in_square(*p.polygon, *f.polygon, -1e-12)) ++bad;
  }
  CHECK(bad == 0);
}
