// vsl: command-line front end for the rearrangement/stability laboratory.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsl/bounds.hpp"
#include "vsl/euler.hpp"
#include "vsl/field.hpp"
#include "vsl/field_io.hpp"
#include "vsl/harness.hpp"
#include "vsl/profiles.hpp"
#include "vsl/rearrange.hpp"
#include "vsl/verify.hpp"

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vsl::ExperimentError("config", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw vsl::ExperimentError("config", std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(vsl::kInf);
    } else {
      out.push_back(std::stod(item));
    }
  }
  return out;
}

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream s;
  s << p;
  return s.str();
}

json error_report(const vsl::ExperimentError& e) {
  return {{"schema", vsl::kReportSchema}, {"status", "error"}, {"error", {{"stage", e.stage()}, {"message", e.what()}}}};
}

int cmd_rearrange(const std::string& in, const std::string& out, const std::string& dist_csv) {
  const vsl::ScalarField f = vsl::read_vsf(in);
  const vsl::ScalarField s = vsl::symmetric_rearrangement(f);
  vsl::write_vsf(out, s);
  if (!dist_csv.empty()) {
    std::ofstream csv(dist_csv);
    if (!csv) throw std::runtime_error("cannot open " + dist_csv);
    vsl::write_distribution_csv(csv, vsl::distribution(f));
  }
  const vsl::InequalityCheck c = vsl::rearrangement_deficit_check(f);
  json r = {{"n", f.spec().n},
            {"L", f.spec().L},
            {"J", vsl::angular_impulse(f)},
            {"J_star", vsl::angular_impulse(s)},
            {"deficit_check", {{"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}, {"refused", c.refused}}}};
  std::cout << r.dump(2) << '\n';
  return 0;
}

int cmd_functionals(const std::string& in, const std::string& p_text) {
  const vsl::ScalarField f = vsl::read_vsf(in);
  json norms = json::object();
  json jp = json::object();
  for (double p : parse_p_list(p_text)) {
    norms[p_label(p)] = vsl::lp_norm(f, p);
    if (!std::isinf(p)) jp[p_label(p)] = vsl::jp_norm(f, p);
  }
  json r = {{"n", f.spec().n},
            {"L", f.spec().L},
            {"integral", vsl::quadrature(f)},
            {"lp_norm", norms},
            {"jp_norm", jp},
            {"J", vsl::angular_impulse(f)},
            {"moment6", vsl::higher_moment(f, 6)},
            {"sup", vsl::sup_norm(f)},
            {"patch_q", vsl::patch_conserved_quantity(f)},
            {"boundary_mass", vsl::boundary_mass_fraction(f)}};
  std::cout << r.dump(2) << '\n';
  return 0;
}

struct BoundArgs {
  std::string profile = "sharp-patch";
  double radius = 1.0;
  double width = 1.0;
  bool sharp = true;
  int n = 512;
  double L = 4.0;
  double tail_eps = 1e-2;
  double eps1 = -1.0;
  double epsJ = 0.0;
  double epsP = 0.0;
  double p = 2.0;
  std::optional<double> M, alpha, R, T;
};

int cmd_bound(const BoundArgs& a) {
  vsl::ProfileConfig pc;
  pc.kind = vsl::profile_kind_from_string(a.profile);
  pc.radius = a.radius;
  pc.width = a.width;
  pc.sharp = a.sharp;
  pc.tail_eps = a.tail_eps;
  pc.tail_p = a.p;
  if (pc.kind == vsl::ProfileKind::piecewise_linear) pc.knots = {{0.0, 1.0}, {a.radius, 0.0}};
  vsl::ProfileParams pp;
  if (!(a.M && a.alpha && a.R && a.T)) pp = vsl::make_profile(pc, vsl::GridSpec(a.n, a.L)).params;
  if (a.M) pp.M = *a.M;
  if (a.alpha) pp.alpha = *a.alpha;
  if (a.R) pp.R = *a.R;
  if (a.T) pp.T = *a.T;
  vsl::PerturbationSize sz;
  if (a.eps1 >= 0.0) sz.eps1 = a.eps1;
  sz.epsJ = a.epsJ;
  sz.epsP = a.epsP;
  sz.p = a.p;
  const vsl::BoundSet b = vsl::evaluate_bounds(pp, sz);
  json r = {{"profile_params", {{"M", pp.M}, {"alpha", pp.alpha}, {"R", pp.R}, {"T", pp.T}, {"T6", pp.T6}}},
            {"perturbation", {{"eps1", sz.eps1_or_majorant()}, {"epsJ", sz.epsJ}, {"epsP", sz.epsP}, {"p", sz.p}}},
            {"bound_L1", b.L1},
            {"bound_J", b.J},
            {"bound_Lp", b.Lp},
            {"bound_Jp_total", b.Jp_total}};
  std::cout << r.dump(2) << '\n';
  return 0;
}

int cmd_evolve(const std::string& config_path) {
  const vsl::ExperimentConfig cfg = vsl::parse_config(read_json(config_path));
  const vsl::Profile base = vsl::make_profile(cfg.profile, cfg.grid);
  vsl::Perturbed pert = vsl::perturb(base, cfg.perturbation, cfg.p_list);
  std::ofstream csv;
  if (!cfg.csv_path.empty()) {
    csv.open(cfg.csv_path);
    if (!csv) throw std::runtime_error("cannot open " + cfg.csv_path);
    vsl::write_conservation_csv_header(csv);
  }
  vsl::FlowState state = vsl::FlowState::initial(std::move(pert.omega0));
  int index = 0;
  vsl::evolve(state, cfg.solver, [&](const vsl::FlowState& s, const vsl::StepInfo& info) {
    if (!info.snapshot) return;
    const vsl::ConservationRecord rec = vsl::conservation_report(s);
    if (csv.is_open()) vsl::append_conservation_csv(csv, rec);
    if (!cfg.snapshot_dir.empty()) {
      std::filesystem::create_directories(cfg.snapshot_dir);
      std::ostringstream name;
      name << "snap_" << std::setw(5) << std::setfill('0') << index << ".vsf";
      vsl::write_vsf(std::filesystem::path(cfg.snapshot_dir) / name.str(), s.omega);
    }
    ++index;
  });
  const vsl::ConservationRecord r = vsl::conservation_report(state);
  json out = {{"t", r.t},
              {"steps", state.steps},
              {"drift_L1", r.drift_L1},
              {"drift_L2", r.drift_L2},
              {"drift_J", r.drift_J},
              {"dist_drift", r.dist_drift},
              {"patch_q_drift", r.patch_q_drift},
              {"boundary_mass", r.boundary_mass}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path) {
  const json doc = read_json(config_path);
  json result;
  bool ok = true;
  if (doc.is_array()) {
    std::vector<vsl::ExperimentConfig> configs;
    for (const auto& d : doc) configs.push_back(vsl::parse_config(d));
    const auto results = vsl::run_sweep(configs, vsl::threads_from_env());
    result = json::array();
    for (const auto& r : results) {
      if (r.report) {
        result.push_back(r.report->to_json());
        ok = ok && r.report->all_pass();
      } else {
        result.push_back(error_report(vsl::ExperimentError(r.error_stage, r.error_message)));
        ok = false;
      }
    }
  } else {
    try {
      const vsl::StabilityReport report = vsl::run_experiment(vsl::parse_config(doc));
      result = report.to_json();
      ok = report.all_pass();
    } catch (const vsl::ExperimentError& e) {
      result = error_report(e);
      ok = false;
      std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    }
  }
  if (out_path.empty()) {
    std::cout << result.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << result.dump(2) << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vsl: rearrangement inequalities, stability bounds and 2D Euler experiments"};
  app.require_subcommand(1);

  std::string in_path, out_path, dist_csv;
  auto* rearrange = app.add_subcommand("rearrange", "Symmetric-decreasing rearrangement of a VSF1 field");
  rearrange->add_option("input", in_path, "Input .vsf")->required();
  rearrange->add_option("output", out_path, "Output .vsf")->required();
  rearrange->add_option("--distribution-csv", dist_csv, "Write the input's distribution function as CSV");

  std::string p_text = "1,2";
  auto* functionals = app.add_subcommand("functionals", "Norms and functionals of a VSF1 field");
  functionals->add_option("input", in_path, "Input .vsf")->required();
  functionals->add_option("--p", p_text, "Comma-separated exponents (inf allowed)");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "Evaluate the stability bounds for a profile and perturbation size");
  bound->add_option("--profile", ba.profile, "sharp-patch | mollified-patch | gaussian | piecewise-linear");
  bound->add_option("--radius", ba.radius, "Patch radius or cone support radius");
  bound->add_option("--width", ba.width, "Gaussian width");
  bound->add_option("--sharp", ba.sharp, "Sample sharp patches without a ramp (true/false)");
  bound->add_option("--n", ba.n, "Grid cells per side used to measure the profile");
  bound->add_option("--L", ba.L, "Domain half-width");
  bound->add_option("--tail-eps", ba.tail_eps, "Tail tolerance for non-compact profiles");
  bound->add_option("--eps1", ba.eps1, "||w0 - zeta||_1 (omit to majorize by pi epsP + epsJ)");
  bound->add_option("--epsJ", ba.epsJ, "J(|w0 - zeta|)");
  bound->add_option("--epsP", ba.epsP, "||w0 - zeta||_p");
  bound->add_option("--p", ba.p, "Exponent p");
  bound->add_option("--M", ba.M, "Override the measured sup norm");
  bound->add_option("--alpha", ba.alpha, "Override the measured L1 norm");
  bound->add_option("--R", ba.R, "Override the truncation radius");
  bound->add_option("--T", ba.T, "Override the tail impulse beyond R");

  std::string config_path;
  auto* evolve = app.add_subcommand("evolve", "Evolve the configured initial data and report conservation");
  evolve->add_option("config", config_path, "Experiment config JSON")->required();

  std::string report_path;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment (or an array of them) and emit the report");
  experiment->add_option("config", config_path, "Experiment config JSON (object or array)")->required();
  experiment->add_option("--out", report_path, "Report path (default stdout)");

  std::string level = "fast";
  auto* verify = app.add_subcommand("verify", "Run the self-check suite");
  verify->add_option("--level", level, "fast | full")->check(CLI::IsMember({"fast", "full"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rearrange) return cmd_rearrange(in_path, out_path, dist_csv);
    if (*functionals) return cmd_functionals(in_path, p_text);
    if (*bound) return cmd_bound(ba);
    if (*evolve) return cmd_evolve(config_path);
    if (*experiment) return cmd_experiment(config_path, report_path);
    if (*verify) {
      const vsl::VerifySummary s = vsl::verify_suite(vsl::verify_level_from_string(level), &std::cout);
      std::cout << (s.all_pass() ? "verify: all checks passed\n" : "verify: FAILED\n");
      return s.all_pass() ? 0 : 1;
    }
  } catch (const vsl::ExperimentError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
