#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cantorgap/ifs.hpp"

namespace testsupport {

using namespace cantorgap;

/// Four quadratic maps b + a z + c z^2 near the quadrant centres of S(0, 1).
inline IfsSpec random_quadratic_spec(std::mt19937_64& rng, double extension_ratio = 0.5) {
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> amp(0.0, 0.03);
  std::uniform_real_distribution<double> mul(0.06, 0.1);
  const OrientedSquare s{{0, 0}, 1.0, 0.0};
  std::vector<ContractionMap> maps;
  for (const Point b : {Point{-0.17, -0.17}, Point{0.17, -0.17}, Point{-0.17, 0.17}, Point{0.17, 0.17}}) {
    const Point a = std::polar(mul(rng), angle(rng));
    const Point c = std::polar(std::min(amp(rng), 0.45 * std::abs(a)), angle(rng));
    maps.push_back(ContractionMap::quadratic(a, b, c));
  }
  return IfsSpec(s, std::move(maps), extension_ratio);
}

struct SampledDiameters {
  double inscribed = INFINITY;
  double escribed = 0.0;
};

/// 2 min and 2 max of |f_I(w) - f_I(centre)| over a dense sample of the
/// boundary of S; the piece is the image of S, so its boundary is f_I(dS).
inline SampledDiameters sample_piece(const IfsSpec& spec, const Word& w, int per_side = 4000) {
  const OrientedSquare& s = spec.square();
  const Point c = evaluate(spec, w, s.center);
  SampledDiameters out;
  const auto corners = s.corners();
  for (int e = 0; e < 4; ++e) {
    const Point p = corners[e];
    const Point q = corners[(e + 1) % 4];
    for (int k = 0; k < per_side; ++k) {
      const Point z = p + (q - p) * (k / double(per_side));
      // Step a hair inside so that the evaluation stays in S.
      const Point zi = s.center + (z - s.center) * (1 - 1e-12);
      const double d = std::abs(evaluate(spec, w, zi) - c);
      out.inscribed = std::min(out.inscribed, 2 * d);
      out.escribed = std::max(out.escribed, 2 * d);
    }
  }
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t p, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::uint32_t> digit(0, static_cast<std::uint32_t>(p - 1));
  Word w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w.digits.push_back(digit(rng));
  return w;
}

}  // namespace testsupport
