#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "cantorgap/error.hpp"
#include "cantorgap/gap.hpp"
#include "cantorgap/ifs.hpp"
#include "cantorgap/invariants.hpp"

namespace cantorgap::tools {

/// N^2 cells of multiplier r/N on the regular N x N lattice of S(0, 1).
/// Throws InvalidParams unless n >= 2 and 0 < r < 1.
IfsSpec grid_example(unsigned n, double r);

/// Smallest extension ratio with f_i(S') inside S for every map, or 0.5 when
/// no ratio below 1 works.
double affine_extension_ratio(const OrientedSquare& s, const std::vector<ContractionMap>& maps);

struct PerturbedSpec {
  IfsSpec spec;
  std::size_t rejections = 0;
};

/// Moves every translation by a uniform point of the disk of radius eta and
/// every multiplier by one of radius eta / 10. A map whose image leaves S is
/// redrawn; after 10^4 draws of one map this throws ContainmentLost.
PerturbedSpec perturb_spec(const IfsSpec& spec, double eta, std::mt19937_64& rng);

struct PerturbSummary {
  InvariantReport base;
  std::vector<InvariantReport> samples;
  std::vector<IfsSpec> specs;
  double max_mid_drift = 0.0;
  double max_endpoint_drift = 0.0;
  std::size_t rejections = 0;
  // Pairs (i < j) of perturbed specs whose robust_check fails.
  std::size_t robust_failures = 0;
};

PerturbSummary run_perturb(const IfsSpec& spec, double eta, std::size_t samples, std::uint64_t seed,
                           const ThicknessOptions& opts = {});

/// SVG 1.1 drawing of S and every depth-n piece; one element per piece plus
/// the frame. Throws BudgetExceeded.
std::string render_svg(const IfsSpec& spec, std::size_t depth);

std::string format_report(const InvariantReport& r);

/// 1 input, 2 computation budget or failed enclosure, 3 hypothesis refuted.
int exit_code_of(ErrorCode code);

/// Entry point of the command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cantorgap::tools
