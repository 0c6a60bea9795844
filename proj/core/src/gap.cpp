#include "cantorgap/gap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "cantorgap/error.hpp"
#include "precise.hpp"

namespace cantorgap {

using detail::Complex;
using detail::narrow;
using detail::PreciseMap;
using detail::widen;

namespace {

struct Node {
  Word word;
  PreciseMap g;
};

AffineMap map_of(const ContractionMap& f) { return {f.a(), f.b()}; }

std::vector<OrientedSquare> son_squares(const IfsSpec& spec, const AffineMap& frame) {
  std::vector<OrientedSquare> out;
  out.reserve(spec.size());
  for (const auto& f : spec.maps()) out.push_back(image_square(spec.square(), map_of(f).then(frame)));
  return out;
}

double max_multiplier(const IfsSpec& spec) {
  double m = 0.0;
  for (const auto& f : spec.maps()) m = std::max(m, std::abs(f.a()));
  return m;
}

// ---------------------------------------------------------------- oracle

class AffineOracle {
 public:
  AffineOracle(const IfsSpec& k, const IfsSpec& l, const OracleOptions& opts)
      : k_(k), l_(l), opts_(opts), k_sons_(son_squares(k, AffineMap{})) {
    if (opts.focus_l_word) {
      focus_ = detail::precise_of(l, *opts.focus_l_word)(widen(l.square().center));
    }
  }

  IntersectionCertificate run() {
    IntersectionCertificate cert;
    cert.method = Method::Oracle;
    const bool done = search({Word{}, PreciseMap{}}, {Word{}, PreciseMap{}}, 0);
    cert.chain = done ? chain_ : best_;
    cert.verdict = done ? Verdict::CertifiedNonempty : Verdict::InconclusiveAtDepth;
    if (!cert.chain.empty()) {
      const auto& last = cert.chain.back();
      const double dk = detail::magnitude(detail::precise_of(k_, last.k_word).a) * k_.square().diameter;
      cert.final_diameter = std::max(dk, last.alpha_region.diameter);
    }
    if (!done) cert.note = "no overlapping pair survives below depth " + std::to_string(best_.size());
    return cert;
  }

 private:
  struct Candidate {
    std::uint32_t i, j;
    double size, focus, spread;
  };

  bool search(const Node& pk, const Node& pl, std::size_t depth) {
    if (depth == opts_.max_depth) return true;
    const OrientedSquare& s = k_.square();
    const AffineMap rel = pk.g.relative(pl.g);
    const std::vector<OrientedSquare> l_sons = son_squares(l_, rel);
    const auto pairs = overlapping_pairs(k_sons_, l_sons);

    std::vector<Candidate> cands;
    cands.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
      Candidate c{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0.0, 0.0, 0.0};
      c.size = std::max(k_sons_[i].diameter, l_sons[j].diameter);
      c.spread = dist(k_sons_[i].center, l_sons[j].center);
      if (focus_) {
        const Complex centre = pl.g.after(l_.map(j))(widen(s.center));
        c.focus = detail::magnitude(centre - *focus_);
      }
      cands.push_back(c);
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(b.size, a.focus, a.spread, a.i, a.j) < std::tie(a.size, b.focus, b.spread, b.i, b.j);
    });

    for (const Candidate& c : cands) {
      if (++nodes_ > opts_.node_budget) {
        throw Error(ErrorCode::BudgetExceeded, "oracle node budget exhausted");
      }
      Node ck{pk.word.prepend(c.i), pk.g.after(k_.map(c.i))};
      Node cl{pl.word.prepend(c.j), pl.g.after(l_.map(c.j))};
      ChainLink link;
      link.k_word = ck.word;
      link.l_word = cl.word;
      link.alpha_region = {narrow(cl.g(widen(s.center))), detail::magnitude(cl.g.a) * l_.square().diameter};
      if (const auto w = overlap_witness(k_sons_[c.i], l_sons[c.j])) link.overlap_witness = narrow(pk.g(widen(*w)));
      chain_.push_back(std::move(link));
      if (chain_.size() > best_.size()) best_ = chain_;
      if (search(ck, cl, depth + 1)) return true;
      chain_.pop_back();
    }
    return false;
  }

  const IfsSpec& k_;
  const IfsSpec& l_;
  OracleOptions opts_;
  std::vector<OrientedSquare> k_sons_;
  std::optional<Complex> focus_;
  std::size_t nodes_ = 0;
  std::vector<ChainLink> chain_;
  std::vector<ChainLink> best_;
};

// Escribed-disk comparison for general maps; never certifies.
IntersectionCertificate general_oracle(const IfsSpec& k, const IfsSpec& l, const OracleOptions& opts) {
  const Interval dk = distortion_bounds(k);
  const Interval dl = distortion_bounds(l);
  std::vector<ChainLink> chain, best;
  std::size_t nodes = 0;
  auto disk_of = [](const Piece& p) { return Disk{p.center, p.Delta.hi}; };
  std::function<void(const Piece&, const Piece&, std::size_t)> search = [&](const Piece& pk, const Piece& pl,
                                                                           std::size_t depth) {
    if (depth == opts.max_depth || best.size() == opts.max_depth) return;
    for (const Piece& sk : children(k, pk, dk)) {
      for (const Piece& sl : children(l, pl, dl)) {
        if (!disks_overlap(disk_of(sk), disk_of(sl))) continue;
        if (++nodes > opts.node_budget) throw Error(ErrorCode::BudgetExceeded, "oracle node budget exhausted");
        const Point mid = 0.5 * (sk.center + sl.center);
        chain.push_back({sk.word, sl.word, disk_of(sl), mid, 0.0});
        if (chain.size() > best.size()) best = chain;
        search(sk, sl, depth + 1);
        chain.pop_back();
        if (best.size() == opts.max_depth) return;
      }
    }
  };
  search(piece_of(k, Word{}, dk), piece_of(l, Word{}, dl), 0);
  IntersectionCertificate cert;
  cert.method = Method::Oracle;
  cert.verdict = Verdict::InconclusiveAtDepth;
  cert.chain = best;
  if (!best.empty()) cert.final_diameter = best.back().alpha_region.diameter;
  cert.note = "general maps: escribed disks only give a necessary condition";
  return cert;
}

// ---------------------------------------------------------- constructive

class Construction {
 public:
  Construction(const IfsSpec& k, const IfsSpec& l, const InvariantReport& rk, const InvariantReport& rl,
               const ConstructiveOptions& opts)
      : k_(k), l_(l), rk_(rk), rl_(rl), opts_(opts), s_(k.square()) {}

  IntersectionCertificate run(bool swapped) {
    IntersectionCertificate cert;
    cert.method = Method::Constructive;
    cert.roles_swapped = swapped;
    const double ds = s_.inscribed_diameter();
    const Interval rho_k = rk_.sigma0 * Interval::point(ds);
    const Interval rho_l = rl_.sigma0 * Interval::point(ds);
    const double dl2 = square(Interval::point(rl_.D.hi)).hi;

    // Sons of an L-piece in its own frame are the depth-1 images.
    l_sons_ = son_squares(l_, AffineMap{});
    double max_son = 0.0;
    for (const auto& r : l_sons_) max_son = std::max(max_son, r.inscribed_diameter());
    bool large_gap = false;
    if (rho_l.lo >= max_son) {
      large_gap = true;
    } else if (!(rho_l.hi < max_son)) {
      throw Error(ErrorCode::CaseSelectionAmbiguous, "rho(P) straddles max delta(R_j)");
    }
    double x = 1.0;
    double threshold = 0.0;
    if (large_gap) {
      threshold = ((1.0 + 2.0 * std::numbers::sqrt2) * Interval::point(dl2) * Interval::point(rho_l.hi)).hi;
    } else {
      const Interval rt = choose_x(max_son, x);
      threshold = (3.0 * rt).hi;
    }

    // alpha_0: a piece of K inside the middle inscribed disk of S.
    const Complex centre = widen(s_.center);
    auto first = descend({Word{}, PreciseMap{}}, centre, 0.5 * ds, INFINITY);
    if (!first) {
      cert.note = "no piece of K found in the middle inscribed disk of S";
      return cert;
    }
    kseq_ = {Node{Word{}, PreciseMap{}}};
    kseq_.insert(kseq_.end(), first->begin(), first->end());

    Node p{Word{}, PreciseMap{}};
    for (std::size_t n = 1; n <= opts_.max_depth; ++n) {
      const double scale_p = detail::magnitude(p.g.a);
      if (scale_p * s_.escribed_diameter() < opts_.diameter_floor * ds) break;

      const double thr_world = threshold * scale_p;
      std::size_t q = select_q(thr_world);
      const Node big_q = kseq_[q];
      const OrientedSquare q_square = image_square(s_, p.g.relative(big_q.g));

      // Targets in P's frame: middle disks of sons inside Q (large gap) or
      // the disks C_j^x inside Q (small gap), roomiest first.
      std::vector<std::pair<double, std::uint32_t>> order;
      for (std::uint32_t j = 0; j < l_sons_.size(); ++j) {
        const OrientedSquare& r = l_sons_[j];
        const Disk c = target_disk(j, large_gap ? 0.5 : 0.5 * x);
        const bool inside = large_gap ? square_in_square(r, q_square, kSlack * r.diameter)
                                      : disk_in_square(c, q_square, kSlack * c.diameter);
        if (inside) order.emplace_back(-(q_square.clearance(c.center) - c.radius()), j);
      }
      if (order.empty()) {
        cert.note = "step " + std::to_string(n) + ": Q contains no admissible son region";
        break;
      }
      std::sort(order.begin(), order.end());

      const double q_scale = detail::magnitude(big_q.g.a);
      const double rho_q = (Interval::point(q_scale) * Interval::point(rho_k.hi)).hi;
      const double prev_size = detail::magnitude(kseq_.back().g.a) * s_.escribed_diameter();
      bool advanced = false;
      for (std::size_t t = 0; t < std::min<std::size_t>(order.size(), 8) && !advanced; ++t) {
        const std::uint32_t j = order[t].second;
        const double scale = large_gap ? 0.5 : 0.5 * x;
        const Disk c = target_disk(j, scale);
        const double target_world = c.diameter * scale_p;
        if (!(rho_q < target_world)) {
          cert.note = "step " + std::to_string(n) + ": rho(Q) is not below the target diameter";
          break;
        }
        const Complex world_centre = p.g(widen(c.center));
        auto path = descend(big_q, world_centre, target_world, prev_size);
        if (!path) continue;
        kseq_.resize(q + 1);
        kseq_.insert(kseq_.end(), path->begin(), path->end());
        p = Node{p.word.prepend(j), p.g.after(l_.map(j))};
        ChainLink link;
        link.k_word = kseq_.back().word;
        link.l_word = p.word;
        link.alpha_region = {narrow(world_centre), target_world};
        link.alpha_scale = scale;
        link.overlap_witness = narrow(kseq_.back().g(widen(s_.center)));
        cert.chain.push_back(std::move(link));
        advanced = true;
      }
      if (!advanced) {
        if (cert.note.empty()) cert.note = "step " + std::to_string(n) + ": no piece of K found in the target";
        break;
      }
    }
    const bool complete = cert.chain.size() == opts_.max_depth ||
                          (!cert.chain.empty() && cert.note.empty());
    cert.verdict = complete ? Verdict::CertifiedNonempty : Verdict::InconclusiveAtDepth;
    if (!cert.chain.empty()) {
      cert.final_diameter = detail::magnitude(p.g.a) * s_.escribed_diameter();
    }
    return cert;
  }

 private:
  Disk target_disk(std::uint32_t j, double scale) const {
    const OrientedSquare& r = l_sons_[j];
    return {r.center, scale * r.inscribed_diameter()};
  }

  Interval rho_tilde(double x, double max_son) {
    const auto hit = rho_cache_.find(x);
    if (hit != rho_cache_.end()) return hit->second;
    std::vector<Region> disks;
    disks.reserve(l_sons_.size());
    for (std::uint32_t j = 0; j < l_sons_.size(); ++j) disks.emplace_back(target_disk(j, 0.5 * x));
    (void)max_son;
    const Interval r = largest_empty_disk(s_, disks, {rl_.grid_used}).diameter;
    rho_cache_.emplace(x, r);
    return r;
  }

  // x = 1 when the middle disks already satisfy max delta(C) <= rho~,
  // else the root of max delta(C^x) = rho~(x) by bisection.
  Interval choose_x(double max_son, double& x) {
    const Interval r1 = rho_tilde(1.0, max_son);
    if (0.5 * max_son <= r1.lo) {
      x = 1.0;
      return r1;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > opts_.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      if (0.5 * mid * max_son > rho_tilde(mid, max_son).mid()) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    x = lo > 0.0 ? lo : hi;
    return rho_tilde(x, max_son);
  }

  // Last piece of the K sequence with delta >= thr, extending the sequence
  // through sons while its last piece is still that large.
  std::size_t select_q(double thr) {
    auto delta_of = [&](const Node& n) { return detail::magnitude(n.g.a) * s_.inscribed_diameter(); };
    while (delta_of(kseq_.back()) >= thr) {
      const Node& last = kseq_.back();
      const Complex c = last.g(widen(s_.center));
      std::uint32_t best = 0;
      double best_d = INFINITY;
      for (std::uint32_t i = 0; i < k_.size(); ++i) {
        const double d = detail::magnitude(last.g.after(k_.map(i))(widen(s_.center)) - c);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      kseq_.push_back({last.word.prepend(best), last.g.after(k_.map(best))});
    }
    std::size_t q = 0;
    for (std::size_t i = 0; i < kseq_.size(); ++i) {
      if (delta_of(kseq_[i]) >= thr) q = i;
    }
    return q;
  }

  // Depth-first search below `from` for a piece of K inside the disk
  // (world centre, world diameter) whose escribed diameter is below max_size.
  std::optional<std::vector<Node>> descend(const Node& from, const Complex& centre, double diameter,
                                           double max_size) {
    const double from_scale = detail::magnitude(from.g.a);
    const Disk target{narrow(from.g.pull(centre)), diameter / from_scale};
    std::size_t budget = opts_.search_budget;
    std::vector<Node> path;
    std::function<bool(const AffineMap&, const Node&)> dfs = [&](const AffineMap& rel, const Node& node) {
      const OrientedSquare sq = image_square(s_, rel);
      if (square_in_disk(sq, target, kSlack * target.diameter) && sq.diameter * from_scale < max_size) {
        return true;
      }
      if (sq.diameter * from_scale < opts_.diameter_floor * s_.inscribed_diameter()) return false;
      std::vector<std::pair<double, std::uint32_t>> kids;
      for (std::uint32_t i = 0; i < k_.size(); ++i) {
        const OrientedSquare child = image_square(s_, map_of(k_.map(i)).then(rel));
        if (disk_overlaps_square(target, child)) kids.emplace_back(dist(child.center, target.center), i);
      }
      std::sort(kids.begin(), kids.end());
      for (const auto& [d, i] : kids) {
        if (budget-- == 0) return false;
        Node child{node.word.prepend(i), node.g.after(k_.map(i))};
        path.push_back(child);
        if (dfs(map_of(k_.map(i)).then(rel), child)) return true;
        path.pop_back();
      }
      return false;
    };
    if (dfs(AffineMap{}, from)) return path;
    return std::nullopt;
  }

  const IfsSpec& k_;
  const IfsSpec& l_;
  const InvariantReport& rk_;
  const InvariantReport& rl_;
  ConstructiveOptions opts_;
  OrientedSquare s_;
  std::vector<OrientedSquare> l_sons_;
  std::vector<Node> kseq_;
  std::map<double, Interval> rho_cache_;
};

void require_same_square(const IfsSpec& k, const IfsSpec& l) {
  if (!(k.square() == l.square())) {
    throw Error(ErrorCode::MismatchedSquares, "K and L must share the initial square");
  }
}

}  // namespace

std::string_view to_string(Method m) { return m == Method::Constructive ? "constructive" : "oracle"; }

std::string_view to_string(Verdict v) {
  return v == Verdict::CertifiedNonempty ? "CertifiedNonempty" : "InconclusiveAtDepth";
}

std::string_view to_string(RobustVerdict v) {
  return v == RobustVerdict::RobustIntersection ? "RobustIntersection" : "NotCertified";
}

IntersectionCertificate intersect_oracle(const IfsSpec& k, const IfsSpec& l, const OracleOptions& opts) {
  require_same_square(k, l);
  if (k.all_affine() && l.all_affine()) return AffineOracle(k, l, opts).run();
  return general_oracle(k, l, opts);
}

IntersectionCertificate intersect_constructive(const IfsSpec& k, const IfsSpec& l, const InvariantReport& rk,
                                               const InvariantReport& rl, const ConstructiveOptions& opts) {
  require_same_square(k, l);
  // Only a certified failure of the hypotheses stops the run; undecided
  // hypotheses leave the per-step geometric checks in charge.
  const BalanceVerdict balance = well_balanced(rk, rl);
  if (balance == BalanceVerdict::FailedCondition1 || balance == BalanceVerdict::FailedSufficientCondition) {
    throw Error(ErrorCode::HypothesisViolated, "K and L are certifiably not well balanced (sufficient test)");
  }
  if ((rk.thickness * rl.thickness).hi < 1.0) {
    throw Error(ErrorCode::HypothesisViolated, "t(K) t(L) < 1 is certified");
  }
  std::string caveat;
  if (balance != BalanceVerdict::Certified || !((rk.thickness * rl.thickness).lo >= 1.0)) {
    caveat = "hypotheses not certified; every step verified geometrically";
  }
  if (!k.all_affine() || !l.all_affine()) {
    IntersectionCertificate cert;
    cert.method = Method::Constructive;
    cert.note = "general maps: the construction is only carried out for affine systems";
    return cert;
  }
  IntersectionCertificate cert = rk.sigma.hi > rl.sigma.hi ? Construction(l, k, rl, rk, opts).run(true)
                                                           : Construction(k, l, rk, rl, opts).run(false);
  if (!caveat.empty()) cert.note = cert.note.empty() ? caveat : caveat + "; " + cert.note;
  return cert;
}

RobustVerdict robust_check(const InvariantReport& rk, const InvariantReport& rl) {
  if (well_balanced(rk, rl) != BalanceVerdict::Certified) return RobustVerdict::NotCertified;
  return (rk.thickness * rl.thickness).lo > 1.0 ? RobustVerdict::RobustIntersection : RobustVerdict::NotCertified;
}

RobustVerdict robust_check(const IfsSpec& k, const IfsSpec& l) {
  require_same_square(k, l);
  return robust_check(thickness(k), thickness(l));
}

ReplayResult replay_certificate(const IfsSpec& k_in, const IfsSpec& l_in, const IntersectionCertificate& cert) {
  const IfsSpec& k = cert.roles_swapped ? l_in : k_in;
  const IfsSpec& l = cert.roles_swapped ? k_in : l_in;
  const OrientedSquare& s = k.square();
  auto fail = [](std::size_t i, const std::string& why) {
    return ReplayResult{false, "link " + std::to_string(i + 1) + ": " + why};
  };
  const double kmax = max_multiplier(k) * (1.0 + 1e-12);
  const double lmax = max_multiplier(l) * (1.0 + 1e-12);
  Word prev_k, prev_l;
  double prev_ks = 1.0, prev_ls = 1.0;
  for (std::size_t i = 0; i < cert.chain.size(); ++i) {
    const ChainLink& link = cert.chain[i];
    for (const auto d : link.k_word.digits) {
      if (d >= k.size()) return fail(i, "K digit out of range");
    }
    for (const auto d : link.l_word.digits) {
      if (d >= l.size()) return fail(i, "L digit out of range");
    }
    const PreciseMap gk = detail::precise_of(k, link.k_word);
    const PreciseMap gl = detail::precise_of(l, link.l_word);
    const double ks = detail::magnitude(gk.a);
    const double ls = detail::magnitude(gl.a);
    if (link.l_word.size() != i + 1 || !prev_l.is_ancestor_of(link.l_word)) return fail(i, "L pieces not nested");
    if (!(ls < prev_ls) || !(ks < prev_ks)) return fail(i, "diameters do not decrease");
    if (cert.method == Method::Oracle) {
      if (link.k_word.size() != i + 1 || !prev_k.is_ancestor_of(link.k_word)) return fail(i, "K pieces not nested");
      if (ks > prev_ks * kmax || ls > prev_ls * lmax) return fail(i, "contraction ratio too large");
      const OrientedSquare l_sq = image_square(s, gk.relative(gl));
      if (!overlap_exact(s, l_sq)) return fail(i, "pieces do not overlap");
    } else {
      if (!(link.alpha_scale > 0.0 && link.alpha_scale <= 0.5)) {
        return fail(i, "alpha region not inside the middle inscribed disk");
      }
      const OrientedSquare k_sq = image_square(s, gl.relative(gk));
      const Disk alpha{s.center, link.alpha_scale * s.inscribed_diameter()};
      if (!square_in_disk(k_sq, alpha)) return fail(i, "K-piece not inside the alpha region");
    }
    prev_k = link.k_word;
    prev_l = link.l_word;
    prev_ks = ks;
    prev_ls = ls;
  }
  if (cert.verdict == Verdict::CertifiedNonempty && cert.chain.empty()) {
    return {false, "certified verdict with an empty chain"};
  }
  return {};
}

bool final_regions_overlap(const IfsSpec& k_in, const IfsSpec& l_in, const IntersectionCertificate& constructive,
                           const IntersectionCertificate& oracle) {
  if (constructive.chain.empty() || oracle.chain.empty()) return false;
  const IfsSpec& k = constructive.roles_swapped ? l_in : k_in;
  const IfsSpec& l = constructive.roles_swapped ? k_in : l_in;
  const OrientedSquare& s = k.square();
  const ChainLink& c = constructive.chain.back();
  const ChainLink& o = oracle.chain.back();
  const PreciseMap frame = detail::precise_of(l, c.l_word);
  const Disk alpha{s.center, c.alpha_scale * s.inscribed_diameter()};
  const OrientedSquare ok = image_square(s, frame.relative(detail::precise_of(k_in, o.k_word)));
  const OrientedSquare ol = image_square(s, frame.relative(detail::precise_of(l_in, o.l_word)));
  const std::vector<Point> poly = overlap_polygon(ok, ol);
  return polygon_meets_disk(poly, alpha);
}

}  // namespace cantorgap
