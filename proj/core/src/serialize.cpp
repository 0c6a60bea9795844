#include "cantorgap/serialize.hpp"

#include <fstream>
#include <sstream>

#include "cantorgap/error.hpp"
#include "json.hpp"

namespace cantorgap {

namespace {

using json = nlohmann::json;

json point_json(Point p) { return json::array({p.real(), p.imag()}); }

Point point_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "expected [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json interval_json(const Interval& x) { return {{"lo", x.lo}, {"hi", x.hi}}; }

Interval interval_of(const json& j) {
  const Interval x{j.at("lo").get<double>(), j.at("hi").get<double>()};
  if (!x.valid()) throw Error(ErrorCode::ParseError, "interval with lo > hi");
  return x;
}

json word_json(const Word& w) {
  json out = json::array();
  for (const auto d : w.digits) out.push_back(d + 1);
  return out;
}

Word word_of(const json& j) {
  Word w;
  for (const auto& d : j) {
    const auto v = d.get<long long>();
    if (v < 1) throw Error(ErrorCode::ParseError, "word digits are 1-based");
    w.digits.push_back(static_cast<std::uint32_t>(v - 1));
  }
  return w;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

template <class F>
auto decode(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

std::string spec_to_json(const IfsSpec& spec, int indent) {
  json maps = json::array();
  for (const auto& f : spec.maps()) {
    if (!f.is_affine()) throw Error(ErrorCode::InvalidParams, "general maps have no file form");
    maps.push_back({{"type", "affine"}, {"a", point_json(f.a())}, {"b", point_json(f.b())}});
  }
  json j;
  j["square"] = {{"center", point_json(spec.square().center)}, {"diameter", spec.square().diameter}};
  if (spec.square().rotation != 0.0) j["square"]["rotation"] = spec.square().rotation;
  j["extension_ratio"] = spec.extension_ratio();
  j["maps"] = std::move(maps);
  return j.dump(indent);
}

IfsSpec spec_from_json(std::string_view text, IfsOptions options) {
  const json j = parse(text);
  return decode([&] {
    const json& sq = j.at("square");
    OrientedSquare s{point_of(sq.at("center")), sq.at("diameter").get<double>(), sq.value("rotation", 0.0)};
    std::vector<ContractionMap> maps;
    for (const auto& m : j.at("maps")) {
      if (m.at("type").get<std::string>() != "affine") {
        throw Error(ErrorCode::ParseError, "unsupported map type " + m.at("type").get<std::string>());
      }
      maps.push_back(ContractionMap::affine(point_of(m.at("a")), point_of(m.at("b"))));
    }
    return IfsSpec(s, std::move(maps), j.at("extension_ratio").get<double>(), options);
  });
}

std::string report_to_json(const InvariantReport& r, int indent) {
  json j;
  j["D"] = interval_json(r.D);
  j["lambda0"] = interval_json(r.lambda0);
  j["Lambda0"] = interval_json(r.Lambda0);
  j["lambda"] = interval_json(r.lambda);
  j["Lambda"] = interval_json(r.Lambda);
  j["sigma0"] = interval_json(r.sigma0);
  j["sigma"] = interval_json(r.sigma);
  j["thickness"] = interval_json(r.thickness);
  j["depth_used"] = r.depth_used;
  j["grid_used"] = r.grid_used;
  if (r.square) {
    j["square"] = {{"center", point_json(r.square->center)},
                   {"diameter", r.square->diameter},
                   {"rotation", r.square->rotation}};
  }
  return j.dump(indent);
}

InvariantReport report_from_json(std::string_view text) {
  const json j = parse(text);
  return decode([&] {
    InvariantReport r;
    r.D = interval_of(j.at("D"));
    r.lambda0 = interval_of(j.at("lambda0"));
    r.Lambda0 = interval_of(j.at("Lambda0"));
    r.lambda = interval_of(j.at("lambda"));
    r.Lambda = interval_of(j.at("Lambda"));
    r.sigma0 = interval_of(j.at("sigma0"));
    r.sigma = interval_of(j.at("sigma"));
    r.thickness = interval_of(j.at("thickness"));
    r.depth_used = j.at("depth_used").get<std::size_t>();
    r.grid_used = j.at("grid_used").get<double>();
    if (j.contains("square")) {
      const json& sq = j.at("square");
      r.square = OrientedSquare{point_of(sq.at("center")), sq.at("diameter").get<double>(), sq.value("rotation", 0.0)};
    }
    return r;
  });
}

std::string certificate_to_json(const IntersectionCertificate& cert, int indent) {
  json chain = json::array();
  for (const ChainLink& l : cert.chain) {
    chain.push_back({{"k_word", word_json(l.k_word)},
                     {"l_word", word_json(l.l_word)},
                     {"alpha_center", point_json(l.alpha_region.center)},
                     {"alpha_diameter", l.alpha_region.diameter},
                     {"alpha_scale", l.alpha_scale},
                     {"witness", point_json(l.overlap_witness)}});
  }
  json j;
  j["method"] = std::string(to_string(cert.method));
  j["verdict"] = std::string(to_string(cert.verdict));
  j["chain"] = std::move(chain);
  j["final_diameter"] = cert.final_diameter;
  j["roles_swapped"] = cert.roles_swapped;
  if (!cert.note.empty()) j["note"] = cert.note;
  return j.dump(indent);
}

IntersectionCertificate certificate_from_json(std::string_view text) {
  const json j = parse(text);
  return decode([&] {
    IntersectionCertificate c;
    const auto method = j.at("method").get<std::string>();
    if (method != "constructive" && method != "oracle") throw Error(ErrorCode::ParseError, "unknown method " + method);
    c.method = method == "constructive" ? Method::Constructive : Method::Oracle;
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict != "CertifiedNonempty" && verdict != "InconclusiveAtDepth") {
      throw Error(ErrorCode::ParseError, "unknown verdict " + verdict);
    }
    c.verdict = verdict == "CertifiedNonempty" ? Verdict::CertifiedNonempty : Verdict::InconclusiveAtDepth;
    for (const auto& l : j.at("chain")) {
      ChainLink link;
      link.k_word = word_of(l.at("k_word"));
      link.l_word = word_of(l.at("l_word"));
      link.alpha_region = {point_of(l.at("alpha_center")), l.at("alpha_diameter").get<double>()};
      link.alpha_scale = l.value("alpha_scale", 0.0);
      link.overlap_witness = point_of(l.at("witness"));
      c.chain.push_back(std::move(link));
    }
    c.final_diameter = j.at("final_diameter").get<double>();
    c.roles_swapped = j.value("roles_swapped", false);
    c.note = j.value("note", std::string{});
    return c;
  });
}

std::string cantor1d_to_json(const Cantor1D& c, int indent) {
  json gaps = json::array();
  for (const auto& [a, b] : c.gaps) gaps.push_back({a, b});
  json j;
  j["interval"] = {c.interval.first, c.interval.second};
  j["gaps"] = std::move(gaps);
  return j.dump(indent);
}

Cantor1D cantor1d_from_json(std::string_view text) {
  const json j = parse(text);
  return decode([&] {
    Cantor1D c;
    c.interval = {j.at("interval").at(0).get<double>(), j.at("interval").at(1).get<double>()};
    for (const auto& g : j.at("gaps")) c.gaps.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
    c.normalize();
    return c;
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::ParseError, "write failed for " + path.string());
}

}  // namespace cantorgap
