#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "cantorgap/serialize.hpp"
#include "cantorgap/tools/commands.hpp"

namespace cantorgap::tools {

namespace {

struct Common {
  std::size_t depth = 3;
  double grid = 0.0;

  ThicknessOptions thickness() const {
    ThicknessOptions o;
    o.gap.depth = depth;
    o.gap.pitch = grid;
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--depth", c.depth, "Depth (default 3)");
  cmd->add_option("--grid", c.grid, "Grid pitch; 0 means delta(S)/512")->check(CLI::NonNegativeNumber);
}

IfsSpec load_spec(const std::string& path) { return spec_from_json(read_file(path)); }

void emit(std::string text, const std::string& path, std::ostream& out) {
  if (text.empty() || text.back() != '\n') text += '\n';
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thickness, well-balanced checks and intersection certificates for planar Cantor sets",
               "cantorgap"};
  app.require_subcommand(1);

  unsigned grid_n = 0;
  double grid_r = 0.0;
  std::string out_path;
  auto* grid_cmd = app.add_subcommand("grid-example", "Write the N x N grid family");
  grid_cmd->add_option("n", grid_n, "Cells per side")->required();
  grid_cmd->add_option("r", grid_r, "Cell ratio in (0, 1)")->required();
  grid_cmd->add_option("-o,--out", out_path, "Spec file (stdout when absent)");

  Common common;
  std::string spec_path, spec_k, spec_l, json_path;
  auto* report_cmd = app.add_subcommand("report", "Invariant report of a spec");
  report_cmd->add_option("spec", spec_path)->required();
  add_common(report_cmd, common);
  report_cmd->add_option("--json", json_path, "Write the report as JSON");

  auto* check_cmd = app.add_subcommand("check", "Well-balanced and robust-intersection check");
  check_cmd->add_option("spec_k", spec_k)->required();
  check_cmd->add_option("spec_l", spec_l)->required();
  add_common(check_cmd, common);

  std::string method = "constructive";
  auto* inter_cmd = app.add_subcommand("intersect", "Intersection certificate for two specs");
  inter_cmd->add_option("spec_k", spec_k)->required();
  inter_cmd->add_option("spec_l", spec_l)->required();
  add_common(inter_cmd, common);
  inter_cmd->add_option("--method", method)->check(CLI::IsMember({"constructive", "oracle"}));
  inter_cmd->add_option("-o,--out", out_path, "Certificate file (stdout when absent)");

  double eta = 0.0;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  auto* perturb_cmd = app.add_subcommand("perturb", "Thickness drift under random perturbation");
  perturb_cmd->add_option("spec", spec_path)->required();
  perturb_cmd->add_option("--eta", eta, "Perturbation size")->required()->check(CLI::NonNegativeNumber);
  perturb_cmd->add_option("--samples", samples, "Number of perturbed specs (default 20)");
  perturb_cmd->add_option("--seed", seed, "Random seed (default 0)");
  add_common(perturb_cmd, common);
  perturb_cmd->add_option("--json", json_path, "Write the summary as JSON");

  auto* render_cmd = app.add_subcommand("render", "SVG drawing of the depth-n pieces");
  render_cmd->add_option("spec", spec_path)->required();
  render_cmd->add_option("--depth", common.depth, "Depth (default 3)");
  render_cmd->add_option("-o,--out", out_path, "SVG file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*grid_cmd) {
      emit(spec_to_json(grid_example(grid_n, grid_r)), out_path, out);
      return 0;
    }
    if (*report_cmd) {
      const InvariantReport r = thickness(load_spec(spec_path), common.thickness());
      out << format_report(r);
      if (!json_path.empty()) emit(report_to_json(r), json_path, out);
      return 0;
    }
    if (*check_cmd) {
      const IfsSpec k = load_spec(spec_k);
      const IfsSpec l = load_spec(spec_l);
      const InvariantReport rk = thickness(k, common.thickness());
      const InvariantReport rl = thickness(l, common.thickness());
      const RobustVerdict v = robust_check(rk, rl);
      std::ostringstream os;
      os.precision(10);
      os << "well_balanced " << to_string(well_balanced(rk, rl)) << "\n"
         << "t(K)         " << rk.thickness << "\n"
         << "t(L)         " << rl.thickness << "\n"
         << "t(K)t(L)     " << rk.thickness * rl.thickness << "\n"
         << "robust       " << to_string(v) << "\n";
      out << os.str();
      return v == RobustVerdict::RobustIntersection ? 0 : 3;
    }
    if (*inter_cmd) {
      const IfsSpec k = load_spec(spec_k);
      const IfsSpec l = load_spec(spec_l);
      IntersectionCertificate cert;
      if (method == "oracle") {
        OracleOptions o;
        o.max_depth = common.depth;
        cert = intersect_oracle(k, l, o);
      } else {
        ConstructiveOptions o;
        o.max_depth = common.depth;
        cert = intersect_constructive(k, l, thickness(k, common.thickness()), thickness(l, common.thickness()), o);
      }
      emit(certificate_to_json(cert), out_path, out);
      err << to_string(cert.verdict) << " with " << cert.chain.size() << " links\n";
      return cert.verdict == Verdict::CertifiedNonempty ? 0 : 3;
    }
    if (*perturb_cmd) {
      const PerturbSummary s = run_perturb(load_spec(spec_path), eta, samples, seed, common.thickness());
      std::ostringstream os;
      os.precision(10);
      os << "base thickness     " << s.base.thickness << "\n"
         << "samples            " << s.samples.size() << "\n"
         << "max midpoint drift " << s.max_mid_drift << "\n"
         << "max endpoint drift " << s.max_endpoint_drift << "\n"
         << "rejections         " << s.rejections << "\n"
         << "robust failures    " << s.robust_failures << "\n";
      out << os.str();
      if (!json_path.empty()) {
        const nlohmann::json js{{"eta", eta},
                                {"seed", seed},
                                {"samples", s.samples.size()},
                                {"base_thickness", {s.base.thickness.lo, s.base.thickness.hi}},
                                {"max_mid_drift", s.max_mid_drift},
                                {"max_endpoint_drift", s.max_endpoint_drift},
                                {"rejections", s.rejections},
                                {"robust_failures", s.robust_failures}};
        write_file(json_path, js.dump(2) + "\n");
      }
      return 0;
    }
    if (*render_cmd) {
      emit(render_svg(load_spec(spec_path), common.depth), out_path, out);
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_of(e.code());
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace cantorgap::tools
