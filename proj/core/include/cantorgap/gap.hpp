#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cantorgap/geometry.hpp"
#include "cantorgap/ifs.hpp"
#include "cantorgap/invariants.hpp"

namespace cantorgap {

enum class Method { Constructive, Oracle };
enum class Verdict { CertifiedNonempty, InconclusiveAtDepth };
enum class RobustVerdict { RobustIntersection, NotCertified };

std::string_view to_string(Method m);
std::string_view to_string(Verdict v);
std::string_view to_string(RobustVerdict v);

struct ChainLink {
  Word k_word;
  Word l_word;
  // Region of the L-piece that holds the K-piece; world coordinates are
  // informational once pieces drop below double resolution.
  Disk alpha_region;
  Point overlap_witness{};
  // alpha_region = disk at the L-piece centre of diameter alpha_scale * delta(L-piece).
  // Zero for oracle links, whose region is the escribed disk.
  double alpha_scale = 0.0;
};

struct IntersectionCertificate {
  Method method = Method::Oracle;
  Verdict verdict = Verdict::InconclusiveAtDepth;
  std::vector<ChainLink> chain;
  double final_diameter = 0.0;
  // The constructive run exchanges K and L so that sigma_K <= sigma_L; the
  // chain then refers to the exchanged roles.
  bool roles_swapped = false;
  std::string note;
};

struct OracleOptions {
  std::size_t max_depth = 10;
  std::size_t node_budget = 2'000'000;
  // Steers the search towards this L-piece (depth-first ordering only).
  std::optional<Word> focus_l_word;
};

/// Depth-first search for a chain of overlapping piece pairs, one per level.
/// Exact for affine systems; systems with general maps are compared through
/// escribed disks and never certified. Throws BudgetExceeded.
IntersectionCertificate intersect_oracle(const IfsSpec& k, const IfsSpec& l,
                                         const OracleOptions& opts = {});

struct ConstructiveOptions {
  std::size_t max_depth = 12;
  double bisection_tol = 1e-9;
  // Pieces below this fraction of delta(S) end the construction.
  double diameter_floor = 1e-80;
  std::size_t search_budget = 200'000;
};

/// The inductive construction of points alpha_n of K in the middle inscribed
/// disks of pieces of L_n. Throws HypothesisViolated when the pair certifiably
/// fails the well-balanced sufficient test or t(K) t(L) >= 1, and
/// CaseSelectionAmbiguous when an enclosure straddles the case predicate.
IntersectionCertificate intersect_constructive(const IfsSpec& k, const IfsSpec& l,
                                               const InvariantReport& rk,
                                               const InvariantReport& rl,
                                               const ConstructiveOptions& opts = {});

/// Well balanced and t(K).lo * t(L).lo > 1.
RobustVerdict robust_check(const InvariantReport& rk, const InvariantReport& rl);
/// Computes both reports with default options. Throws MismatchedSquares.
RobustVerdict robust_check(const IfsSpec& k, const IfsSpec& l);

struct ReplayResult {
  bool ok = true;
  std::string reason;
};

/// Recomputes every link in extended precision: nesting, overlap (oracle) or
/// containment in the alpha region (constructive), decreasing diameters.
ReplayResult replay_certificate(const IfsSpec& k, const IfsSpec& l, const IntersectionCertificate& cert);

/// Whether the last constructive alpha region meets the overlap of the last
/// oracle piece pair.
bool final_regions_overlap(const IfsSpec& k, const IfsSpec& l, const IntersectionCertificate& constructive,
                           const IntersectionCertificate& oracle);

}  // namespace cantorgap
