#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cantorgap/gap.hpp"
#include "cantorgap/ifs.hpp"
#include "cantorgap/invariants.hpp"
#include "cantorgap/newhouse1d.hpp"

namespace cantorgap {

// Every reader throws ParseError on malformed input and re-validates the
// decoded object (a spec that parses but violates an invariant throws
// InvalidSpec).

/// {square: {center: [re, im], diameter}, extension_ratio, maps: [{type: "affine", a, b}]}.
/// Only affine maps have a file form; general maps throw InvalidParams.
std::string spec_to_json(const IfsSpec& spec, int indent = 2);
IfsSpec spec_from_json(std::string_view text, IfsOptions options = {});

/// {D, lambda0, Lambda0, lambda, Lambda, sigma0, sigma, thickness: {lo, hi}, depth_used, grid_used}
/// plus an optional square.
std::string report_to_json(const InvariantReport& report, int indent = 2);
InvariantReport report_from_json(std::string_view text);

/// {method, verdict, chain: [{k_word, l_word, alpha_center, alpha_diameter, witness}], final_diameter}
/// with 1-based words, plus roles_swapped and note.
std::string certificate_to_json(const IntersectionCertificate& cert, int indent = 2);
IntersectionCertificate certificate_from_json(std::string_view text);

/// {interval: [a, b], gaps: [[a1, b1], ...]}.
std::string cantor1d_to_json(const Cantor1D& c, int indent = 2);
Cantor1D cantor1d_from_json(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cantorgap
