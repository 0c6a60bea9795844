#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "cantorgap/ifs.hpp"

namespace cantorgap::detail {

using Real = boost::multiprecision::cpp_bin_float_100;
using Complex = boost::multiprecision::cpp_complex_100;

inline Complex widen(Point p) { return Complex(Real(p.real()), Real(p.imag())); }

inline Point narrow(const Complex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline double magnitude(const Complex& z) { return static_cast<double>(abs(z)); }

/// Affine map carried in extended precision, so that deep pieces keep their
/// position relative to each other long after doubles would have collapsed.
struct PreciseMap {
  Complex a{1};
  Complex b{0};

  Complex operator()(const Complex& z) const { return a * z + b; }
  PreciseMap then(const PreciseMap& outer) const { return {outer.a * a, outer.a * b + outer.b}; }
  // This map applied after one of the system's maps.
  PreciseMap after(const ContractionMap& f) const { return {a * widen(f.a()), a * widen(f.b()) + b}; }
  Complex pull(const Complex& w) const { return (w - b) / a; }
  // frame^{-1} o g, rounded to double.
  AffineMap relative(const PreciseMap& g) const { return {narrow(g.a / a), narrow((g.b - b) / a)}; }
};

inline PreciseMap precise_of(const IfsSpec& spec, const Word& w) {
  PreciseMap f;
  for (const std::uint32_t d : w.digits) {
    const auto& m = spec.map(d);
    f = f.then({widen(m.a()), widen(m.b())});
  }
  return f;
}

}  // namespace cantorgap::detail
