#include "cantorgap/tools/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace cantorgap::tools {

namespace {

Point uniform_in_disk(double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rho = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(rho, theta);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

IfsSpec grid_example(unsigned n, double r) {
  if (n < 2) throw Error(ErrorCode::InvalidParams, "grid needs n >= 2");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidParams, "grid needs 0 < r < 1");
  const OrientedSquare s{{0.0, 0.0}, 1.0, 0.0};
  const double side = s.side();
  const double nn = static_cast<double>(n);
  std::vector<ContractionMap> maps;
  maps.reserve(static_cast<std::size_t>(n) * n);
  for (unsigned j = 0; j < n; ++j) {
    for (unsigned i = 0; i < n; ++i) {
      const Point b{((i + 0.5) / nn - 0.5) * side, ((j + 0.5) / nn - 0.5) * side};
      maps.push_back(ContractionMap::affine({r / nn, 0.0}, b));
    }
  }
  const double ratio = affine_extension_ratio(s, maps);
  return IfsSpec(s, std::move(maps), ratio);
}

double affine_extension_ratio(const OrientedSquare& s, const std::vector<ContractionMap>& maps) {
  double need = 0.0;
  for (const auto& f : maps) {
    const double clear = s.clearance(f(s.center));
    if (clear <= 0.0) return 0.5;
    need = std::max(need, std::abs(f.a()) * s.diameter / (2.0 * clear));
  }
  if (need <= 0.0 || need >= 1.0) return 0.5;
  const double r = std::nextafter(need, 1.0);
  return r < 1.0 ? r : 0.5;
}

PerturbedSpec perturb_spec(const IfsSpec& spec, double eta, std::mt19937_64& rng) {
  if (!spec.all_affine()) throw Error(ErrorCode::InvalidParams, "perturbation needs affine maps");
  if (!(eta >= 0.0)) throw Error(ErrorCode::InvalidParams, "eta must be nonnegative");
  constexpr std::size_t kMaxDraws = 10'000;
  const OrientedSquare& s = spec.square();
  PerturbedSpec out{spec, 0};
  std::vector<ContractionMap> maps;
  maps.reserve(spec.size());
  for (const auto& f : spec.maps()) {
    std::size_t draws = 0;
    for (;;) {
      if (++draws > kMaxDraws) throw Error(ErrorCode::ContainmentLost, "no admissible perturbation of a map");
      const Point b = f.b() + uniform_in_disk(eta, rng);
      const Point a = f.a() + uniform_in_disk(eta / 10.0, rng);
      const double m = std::abs(a);
      if (m > 0.0 && m < 1.0 && square_in_square(image_square(s, {a, b}), s)) {
        maps.push_back(ContractionMap::affine(a, b));
        break;
      }
      ++out.rejections;
    }
  }
  IfsOptions opts = spec.options();
  opts.allow_overlapping_images = true;
  const double ratio = affine_extension_ratio(s, maps);
  out.spec = IfsSpec(s, std::move(maps), ratio, opts);
  return out;
}

PerturbSummary run_perturb(const IfsSpec& spec, double eta, std::size_t samples, std::uint64_t seed,
                           const ThicknessOptions& opts) {
  std::mt19937_64 rng(seed);
  PerturbSummary sum;
  sum.base = thickness(spec, opts);
  for (std::size_t k = 0; k < samples; ++k) {
    PerturbedSpec p = perturb_spec(spec, eta, rng);
    sum.rejections += p.rejections;
    InvariantReport r = thickness(p.spec, opts);
    sum.max_mid_drift = std::max(sum.max_mid_drift, std::abs(r.thickness.mid() - sum.base.thickness.mid()));
    sum.max_endpoint_drift =
        std::max({sum.max_endpoint_drift, std::abs(r.thickness.lo - sum.base.thickness.lo),
                  std::abs(r.thickness.hi - sum.base.thickness.hi)});
    sum.samples.push_back(std::move(r));
    sum.specs.push_back(std::move(p.spec));
  }
  for (std::size_t i = 0; i < sum.samples.size(); ++i) {
    for (std::size_t j = i + 1; j < sum.samples.size(); ++j) {
      if (robust_check(sum.samples[i], sum.samples[j]) != RobustVerdict::RobustIntersection) ++sum.robust_failures;
    }
  }
  return sum;
}

std::string render_svg(const IfsSpec& spec, std::size_t depth) {
  const OrientedSquare& s = spec.square();
  const auto frame = s.corners();
  double x0 = frame[0].real(), x1 = x0, y0 = frame[0].imag(), y1 = y0;
  for (const Point& c : frame) {
    x0 = std::min(x0, c.real());
    x1 = std::max(x1, c.real());
    y0 = std::min(y0, c.imag());
    y1 = std::max(y1, c.imag());
  }
  const double pad = 0.02 * s.diameter;
  const double w = x1 - x0 + 2 * pad;
  const double h = y1 - y0 + 2 * pad;
  // SVG's y axis points down.
  auto X = [&](Point p) { return num(p.real()); };
  auto Y = [&](Point p) { return num(-p.imag()); };
  auto polygon = [&](const std::array<Point, 4>& c, const char* style) {
    std::string line = "<polygon points=\"";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) line += ' ';
      line += X(c[i]) + "," + Y(c[i]);
    }
    return line + "\" " + style + "/>\n";
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"" + num(800.0 * h / w) +
         "\" viewBox=\"" + num(x0 - pad) + " " + num(-y1 - pad) + " " + num(w) + " " + num(h) + "\">\n";
  const std::string stroke = num(s.diameter / 1000.0);
  svg += polygon(frame, ("fill=\"none\" stroke=\"black\" stroke-width=\"" + stroke + "\"").c_str());
  const auto pieces = enumerate_depth(spec, depth, distortion_bounds(spec));
  for (const Piece& p : pieces) {
    if (p.polygon) {
      svg += polygon(p.polygon->corners(), "fill=\"black\"");
    } else {
      svg += "<circle cx=\"" + X(p.center) + "\" cy=\"" + Y(p.center) + "\" r=\"" + num(0.5 * p.Delta.hi) +
             "\" fill=\"black\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string format_report(const InvariantReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "D          " << r.D << "\n"
     << "lambda0    " << r.lambda0 << "\n"
     << "Lambda0    " << r.Lambda0 << "\n"
     << "lambda     " << r.lambda << "\n"
     << "Lambda     " << r.Lambda << "\n"
     << "sigma0     " << r.sigma0 << "\n"
     << "sigma      " << r.sigma << "\n"
     << "thickness  " << r.thickness << "\n"
     << "depth_used " << r.depth_used << "\n"
     << "grid_used  " << r.grid_used << "\n";
  return os.str();
}

int exit_code_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::TailBoundUnavailable:
    case ErrorCode::DivergentRecursion:
    case ErrorCode::DomainEscape:
    case ErrorCode::CaseSelectionAmbiguous:
    case ErrorCode::ContainmentLost:
      return 2;
    case ErrorCode::HypothesisViolated:
      return 3;
    default:
      return 1;
  }
}

}  // namespace cantorgap::tools
