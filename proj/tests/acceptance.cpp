// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only N]... [--strict]
//
// Exits 0 unless --strict is given and a criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cantorgap/error.hpp"
#include "cantorgap/gap.hpp"
#include "cantorgap/geometry.hpp"
#include "cantorgap/invariants.hpp"
#include "cantorgap/newhouse1d.hpp"
#include "cantorgap/tools/commands.hpp"
#include "support.hpp"

using namespace cantorgap;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; the first failing one is named in the detail line.
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << " first failure: " << what << ";";
      pass = false;
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ThicknessOptions depth_one() {
  ThicknessOptions o;
  o.gap.depth = 1;
  return o;
}

// ---------------------------------------------------------------------------

void grid_reproduction(Outcome& o) {
  const auto t0 = Clock::now();
  const IfsSpec k = tools::grid_example(100, 0.999);
  const InvariantReport r = thickness(k, depth_one());
  const double secs = seconds_since(t0);
  o.expect(std::abs(r.lambda0.lo - 0.00999) <= 1e-12 && std::abs(r.lambda0.hi - 0.00999) <= 1e-12, "lambda0");
  o.expect(r.sigma0.hi <= 4e-5, "sigma0.hi");
  o.expect(r.D.lo == 1.0 && r.D.hi == 1.0, "D");
  o.expect(r.thickness.lo >= 1.5, "t.lo");
  o.expect(well_balanced(r, r) == BalanceVerdict::Certified, "well_balanced");
  o.expect(robust_check(r, r) == RobustVerdict::RobustIntersection, "robust_check");
  o.expect(secs <= 60.0, "runtime");
  o.detail.precision(6);
  o.detail << " lambda0=" << r.lambda0 << " sigma0=" << r.sigma0 << " D=" << r.D << " t=" << r.thickness
           << " well_balanced=" << to_string(well_balanced(r, r)) << " robust=" << to_string(robust_check(r, r))
           << " time=" << secs << "s";
}

void cross_validation(Outcome& o) {
  for (const unsigned n : {60u, 100u}) {
    for (const double ratio : {0.99, 0.999}) {
      const auto t0 = Clock::now();
      const IfsSpec k = tools::grid_example(n, ratio);
      const std::string tag = "N=" + std::to_string(n) + " r=" + (ratio == 0.99 ? "0.99" : "0.999");
      o.detail << " [" << tag;
      try {
        const InvariantReport r = thickness(k, depth_one());
        ConstructiveOptions co;
        co.max_depth = 10;
        const auto cons = intersect_constructive(k, k, r, r, co);
        OracleOptions oo;
        oo.max_depth = 10;
        if (!cons.chain.empty()) oo.focus_l_word = cons.chain.back().l_word;
        const auto orac = intersect_oracle(k, k, oo);
        const bool overlap = cons.verdict == Verdict::CertifiedNonempty && orac.verdict == Verdict::CertifiedNonempty &&
                             final_regions_overlap(k, k, cons, orac);
        const double secs = seconds_since(t0);
        o.expect(cons.verdict == Verdict::CertifiedNonempty && cons.chain.size() >= 10, tag + " constructive");
        o.expect(orac.verdict == Verdict::CertifiedNonempty && orac.chain.size() >= 10, tag + " oracle");
        o.expect(overlap, tag + " final regions");
        o.expect(secs <= 120.0, tag + " runtime");
        o.detail << " constructive " << cons.chain.size() << " links, oracle " << orac.chain.size()
                 << " links, overlap=" << (overlap ? "yes" : "no") << ", " << secs << "s]";
      } catch (const Error& e) {
        o.expect(false, tag);
        OracleOptions oo;
        oo.max_depth = 10;
        const auto orac = intersect_oracle(k, k, oo);
        o.detail << " constructive: " << e.what() << "; oracle " << to_string(orac.verdict) << " with "
                 << orac.chain.size() << " links]";
      }
    }
  }
}

void robustness_replay(Outcome& o) {
  const auto t0 = Clock::now();
  const IfsSpec base = tools::grid_example(100, 0.999);
  try {
    const tools::PerturbSummary s = tools::run_perturb(base, 1e-4, 20, 2024, depth_one());
    std::size_t oracle_failures = 0;
    OracleOptions oo;
    oo.max_depth = 10;
    for (std::size_t i = 0; i < s.specs.size(); ++i) {
      const IfsSpec& a = s.specs[i];
      const IfsSpec& b = s.specs[(i + 1) % s.specs.size()];
      if (intersect_oracle(a, b, oo).verdict != Verdict::CertifiedNonempty) ++oracle_failures;
    }
    o.expect(s.robust_failures == 0, "robust pairs");
    o.expect(oracle_failures == 0, "oracle pairs");
    double lowest = INFINITY;
    for (const auto& r : s.samples) lowest = std::min(lowest, r.thickness.lo);
    o.detail << " robust failures " << s.robust_failures << "/190, oracle failures " << oracle_failures
             << "/20, min t.lo=" << lowest << ", rejected draws " << s.rejections;
  } catch (const Error& e) {
    o.expect(false, "perturbation");
    o.detail << " " << e.what();
  }
  o.detail << ", " << seconds_since(t0) << "s";
}

void continuity(Outcome& o) {
  const auto t0 = Clock::now();
  const IfsSpec base = tools::grid_example(60, 0.99);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    double drift[3];
    int i = 0;
    for (const double eta : {1e-5, 1e-4, 1e-3}) {
      drift[i++] = tools::run_perturb(base, eta, 3, seed, depth_one()).max_mid_drift;
    }
    const std::string tag = "seed " + std::to_string(seed);
    o.expect(std::isfinite(drift[0]) && std::isfinite(drift[1]) && std::isfinite(drift[2]), tag + " finite");
    o.expect(drift[0] < drift[2], tag + " trend");
    o.detail << " [" << tag << ": " << drift[0] << " " << drift[1] << " " << drift[2] << "]";
  }
  o.detail << " " << seconds_since(t0) << "s";
}

// Light re-runs of the property suites in the unit tests.
void invariant_suites(Outcome& o) {
  std::mt19937_64 rng(99);

  int enclosure_failures = 0;
  for (int k = 0; k < 100; ++k) {
    const IfsSpec spec = testsupport::random_quadratic_spec(rng);
    const Interval D = distortion_bounds(spec);
    const Word w = testsupport::random_word(rng, spec.size(), 4);
    const Piece p = piece_of(spec, w, D);
    const auto sampled = testsupport::sample_piece(spec, w, 1000);
    if (!(p.delta.lo <= sampled.inscribed && sampled.escribed <= p.Delta.hi)) ++enclosure_failures;
  }
  o.expect(enclosure_failures == 0, "piece enclosures");

  const IfsSpec grid = tools::grid_example(8, 0.9);
  const InvariantReport r0 = thickness(grid);
  double worst_scale = 0.0;
  for (const double c : {0.125, 3.0, 1e3}) {
    OrientedSquare s = grid.square();
    s.center *= c;
    s.diameter *= c;
    std::vector<ContractionMap> maps;
    for (const auto& f : grid.maps()) maps.push_back(ContractionMap::affine(f.a(), c * f.b()));
    const InvariantReport r = thickness(IfsSpec(s, maps, grid.extension_ratio()));
    worst_scale = std::max({worst_scale, std::abs(r.thickness.lo / r0.thickness.lo - 1),
                            std::abs(r.thickness.hi / r0.thickness.hi - 1)});
  }
  o.expect(worst_scale <= 1e-10, "scale invariance");

  const IfsSpec five = tools::grid_example(5, 0.7);
  const Interval one{1, 1};
  GapOptions go;
  go.depth = 1;
  go.pitch = five.square().side() / 32;
  Interval prev = gap_sigma(five, one, go).sigma0;
  bool monotone = true;
  for (int halve = 1; halve <= 4; ++halve) {
    go.pitch /= 2;
    const Interval cur = gap_sigma(five, one, go).sigma0;
    monotone = monotone && cur.width() <= prev.width() * (1 + 1e-12) && intersect(cur, prev).valid();
    prev = cur;
  }
  o.expect(monotone, "sigma refinement");

  const IfsSpec six = tools::grid_example(6, 0.9);
  OracleOptions oo;
  oo.max_depth = 5;
  const auto cert = intersect_oracle(six, five, oo);
  auto broken = cert;
  if (broken.chain.size() > 2) broken.chain[2].l_word = broken.chain[0].l_word;
  const bool replay = cert.verdict == Verdict::CertifiedNonempty && replay_certificate(six, five, cert).ok &&
                      !replay_certificate(six, five, broken).ok;
  o.expect(replay, "certificate replay");

  std::uniform_real_distribution<double> scale(0.01, 100.0), angle(-3.0, 3.0), shift(-10.0, 10.0), unit(-0.5, 0.5);
  int geometry_failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const OrientedSquare s{{shift(rng), shift(rng)}, scale(rng), angle(rng)};
    const Point z = s.from_local({unit(rng) * s.side(), unit(rng) * s.side()});
    const Point z2 = s.from_local({unit(rng) * s.side(), unit(rng) * s.side()});
    if (z == z2) continue;
    const double d = std::abs(z - z2);
    const Disk out = quarter_disk_in_square(z, z2, s);
    const double tol = 1e-12 * s.diameter;
    const Point c = s.to_local(out.center);
    const bool ok = out.diameter >= 0.4 * d - tol && std::abs(out.center - z) + out.diameter / 2 <= d + tol &&
                    std::max(std::abs(c.real()), std::abs(c.imag())) + out.diameter / 2 <= s.side() / 2 + tol;
    if (!ok) ++geometry_failures;

    const OrientedSquare a{{unit(rng), unit(rng)}, 0.1 + std::abs(unit(rng)), angle(rng)};
    const OrientedSquare b{{unit(rng), unit(rng)}, 0.1 + std::abs(unit(rng)), angle(rng)};
    const bool exact = overlap_exact(a, b);
    if (exact != overlap_exact(b, a) || exact != overlap_witness(a, b).has_value()) ++geometry_failures;
    if (const auto w = overlap_witness(a, b); w && !(a.contains(*w) && b.contains(*w))) ++geometry_failures;
  }
  o.expect(geometry_failures == 0, "geometry properties");

  o.detail << " enclosure failures " << enclosure_failures << "/100, scale drift " << worst_scale
           << ", sigma refinement " << (monotone ? "monotone" : "widened") << ", replay " << (replay ? "sound" : "unsound")
           << ", geometry failures " << geometry_failures << "/10000";
}

void one_dimensional(Outcome& o) {
  // Middle thirds on [0, 3^8] with integer endpoints.
  Cantor1D thirds;
  const double top = 6561.0;
  thirds.interval = {0.0, top};
  std::vector<std::pair<double, double>> level{{0.0, top}};
  for (int k = 0; k < 8; ++k) {
    std::vector<std::pair<double, double>> next;
    for (const auto& [a, b] : level) {
      const double third = (b - a) / 3;
      thirds.gaps.emplace_back(a + third, b - third);
      next.emplace_back(a, a + third);
      next.emplace_back(b - third, b);
    }
    level = std::move(next);
  }
  thirds.normalize();
  const double t = tau(thirds);
  o.expect(t == 1.0, "tau");

  const double h = hausdorff_lower(1.0);
  o.expect(std::abs(h - std::log(2.0) / std::log(3.0)) <= 1e-12, "hausdorff_lower");

  const Cantor1D k = middle_alpha(1.0 / 3, 10);
  const GapVerdict v = gap_lemma_1d(k, k);
  o.expect(v == GapVerdict::MustIntersect, "gap lemma");
  const Cantor1D l = middle_alpha(1.0 / 3, 10, 0.37, 1.37);
  const GapVerdict shifted = gap_lemma_1d(k, l);
  const auto bk = bridges(k);
  const auto bl = bridges(l);
  bool meet = false;
  for (std::size_t i = 0, j = 0; i < bk.size() && j < bl.size() && !meet;) {
    meet = std::max(bk[i].first, bl[j].first) <= std::min(bk[i].second, bl[j].second);
    if (bk[i].second < bl[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  o.expect(shifted == GapVerdict::MustIntersect && meet, "depth-10 bridges");
  o.detail.precision(17);
  o.detail << " tau=" << t << " hausdorff_lower(1)=" << h << " verdict=" << to_string(v)
           << " shifted copy=" << to_string(shifted) << " bridges meet=" << (meet ? "yes" : "no");
}

void negative_controls(Outcome& o) {
  const IfsSpec four = tools::grid_example(4, 0.99);
  const InvariantReport r4 = thickness(four);
  const BalanceVerdict b = well_balanced(r4, r4);
  o.expect(b == BalanceVerdict::FailedCondition1, "N=4 balance");

  const OrientedSquare s{{0, 0}, 1.0, 0.0};
  auto corner = [&](double sign) {
    return IfsSpec(s,
                   {ContractionMap::affine({0.2, 0}, {sign * -0.25, sign * -0.25}),
                    ContractionMap::affine({0.2, 0}, {sign * -0.05, sign * -0.25})},
                   0.5);
  };
  const auto cert = intersect_oracle(corner(1.0), corner(-1.0));
  o.expect(cert.verdict == Verdict::InconclusiveAtDepth && cert.chain.empty(), "corner pair");

  InvariantReport edge;
  edge.D = {1, 1};
  edge.lambda = edge.lambda0 = edge.Lambda = edge.Lambda0 = {0.01, 0.01};
  edge.sigma = edge.sigma0 = {0.01, 0.01};
  edge.thickness = {1, 1.2};
  const RobustVerdict rv = robust_check(edge, edge);
  o.expect(rv == RobustVerdict::NotCertified, "boundary thickness");
  o.detail << " N=4 balance " << to_string(b) << ", corner pair " << to_string(cert.verdict) << " with "
           << cert.chain.size() << " links, t.lo^2=1 gives " << to_string(rv);
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> only;
  bool strict = false;
  app.add_option("--only", only, "Run only these criteria");
  app.add_flag("--strict", strict, "Exit 1 when a criterion fails");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "grid reproduction N=100 r=0.999", grid_reproduction},
      {2, "oracle/constructive cross-validation", cross_validation},
      {3, "robustness under eta=1e-4 perturbations", robustness_replay},
      {4, "thickness continuity trend", continuity},
      {5, "invariant suites", invariant_suites},
      {6, "1D reference", one_dimensional},
      {7, "negative controls", negative_controls},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    o.detail.precision(6);
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, "exception");
      o.detail << " " << e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << ". " << c.name << ":" << o.detail.str() << std::endl;
  }
  std::cout << failed << " criteria failed" << std::endl;
  return strict && failed > 0 ? 1 : 0;
}
