#include "vsl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "vsl/field_io.hpp"

namespace vsl {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  return obj.at(key).get<T>();
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  const json& s = doc.at(key);
  if (!s.is_object()) throw std::invalid_argument(std::string("'") + key + "' must be an object");
  return s;
}

std::string p_key(double p) {
  std::ostringstream s;
  s << p;
  return s.str();
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  try {
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig cfg;

    const json& run = section(doc, "run");
    cfg.name = get_or<std::string>(run, "name", "");
    cfg.solver.t_end = get_or<double>(run, "t_end", cfg.solver.t_end);
    cfg.solver.snapshot_stride = get_or<int>(run, "snapshot_stride", cfg.solver.snapshot_stride);
    cfg.csv_path = get_or<std::string>(run, "csv", "");
    cfg.snapshot_dir = get_or<std::string>(run, "snapshot_dir", "");

    const json& grid = section(doc, "grid");
    cfg.grid = GridSpec(get_or<int>(grid, "n", cfg.grid.n), get_or<double>(grid, "L", cfg.grid.L));

    const json& prof = section(doc, "profile");
    ProfileConfig& pc = cfg.profile;
    pc.kind = profile_kind_from_string(get_or<std::string>(prof, "kind", to_string(pc.kind)));
    pc.radius = get_or<double>(prof, "radius", pc.radius);
    pc.amplitude = get_or<double>(prof, "amplitude", pc.amplitude);
    pc.width = get_or<double>(prof, "width", pc.width);
    if (prof.contains("ramp_width") && !prof.at("ramp_width").is_null()) pc.ramp_width = prof.at("ramp_width").get<double>();
    if (prof.contains("knots")) {
      pc.knots.clear();
      for (const auto& k : prof.at("knots")) pc.knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
    }
    pc.sharp = get_or<bool>(prof, "sharp", pc.sharp);
    pc.tail_eps = get_or<double>(prof, "tail_eps", pc.tail_eps);

    const json& pert = section(doc, "perturbation");
    PerturbationSpec& ps = cfg.perturbation;
    ps.kind = perturbation_kind_from_string(get_or<std::string>(pert, "kind", to_string(ps.kind)));
    ps.dx = get_or<double>(pert, "dx", ps.dx);
    ps.dy = get_or<double>(pert, "dy", ps.dy);
    ps.mode = get_or<int>(pert, "m", ps.mode);
    ps.amplitude = get_or<double>(pert, "a", ps.amplitude);
    if (pert.contains("center")) {
      ps.bump_x = pert.at("center").at(0).get<double>();
      ps.bump_y = pert.at("center").at(1).get<double>();
    }
    ps.bump_radius = get_or<double>(pert, "radius", ps.bump_radius);
    ps.bump_height = get_or<double>(pert, "height", ps.bump_height);
    ps.factor = get_or<double>(pert, "factor", ps.factor);
    ps.seed = get_or<std::uint64_t>(pert, "seed", ps.seed);

    const json& solver = section(doc, "solver");
    cfg.solver.cfl = get_or<double>(solver, "cfl", cfg.solver.cfl);
    cfg.solver.dealias = get_or<bool>(solver, "dealias", cfg.solver.dealias);
    cfg.solver.filter = get_or<bool>(solver, "filter", cfg.solver.filter);
    cfg.solver.poisson = poisson_mode_from_string(get_or<std::string>(solver, "poisson", to_string(cfg.solver.poisson)));
    cfg.solver.validate();

    const json& norms = section(doc, "norms");
    if (norms.contains("p_list")) cfg.p_list = norms.at("p_list").get<std::vector<double>>();
    if (cfg.p_list.empty()) throw std::invalid_argument("norms.p_list must not be empty");
    for (double p : cfg.p_list) {
      if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("norms.p_list entries must be finite and >= 1");
    }
    pc.tail_p = *std::max_element(cfg.p_list.begin(), cfg.p_list.end());

    const json& bounds = section(doc, "bounds");
    cfg.bounds_enabled = get_or<bool>(bounds, "enabled", cfg.bounds_enabled);
    cfg.bounds_slack = get_or<double>(bounds, "slack", cfg.bounds_slack);
    if (!(cfg.bounds_slack >= 0.0)) throw std::invalid_argument("bounds.slack must be >= 0");
    return cfg;
  } catch (const ExperimentError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExperimentError("config", e.what());
  }
}

json to_json(const ExperimentConfig& cfg) {
  json knots = json::array();
  for (const auto& [r, v] : cfg.profile.knots) knots.push_back({r, v});
  json profile = {{"kind", to_string(cfg.profile.kind)},
                  {"radius", cfg.profile.radius},
                  {"amplitude", cfg.profile.amplitude},
                  {"width", cfg.profile.width},
                  {"ramp_width", cfg.profile.ramp_width ? json(*cfg.profile.ramp_width) : json(nullptr)},
                  {"knots", knots},
                  {"sharp", cfg.profile.sharp},
                  {"tail_eps", cfg.profile.tail_eps}};
  const PerturbationSpec& ps = cfg.perturbation;
  json perturbation = {{"kind", to_string(ps.kind)}, {"dx", ps.dx},
                       {"dy", ps.dy},                {"m", ps.mode},
                       {"a", ps.amplitude},          {"center", {ps.bump_x, ps.bump_y}},
                       {"radius", ps.bump_radius},   {"height", ps.bump_height},
                       {"factor", ps.factor},        {"seed", ps.seed}};
  return {{"grid", {{"n", cfg.grid.n}, {"L", cfg.grid.L}}},
          {"profile", profile},
          {"perturbation", perturbation},
          {"solver",
           {{"cfl", cfg.solver.cfl},
            {"dealias", cfg.solver.dealias},
            {"filter", cfg.solver.filter},
            {"poisson", to_string(cfg.solver.poisson)}}},
          {"run",
           {{"name", cfg.name},
            {"t_end", cfg.solver.t_end},
            {"snapshot_stride", cfg.solver.snapshot_stride},
            {"csv", cfg.csv_path},
            {"snapshot_dir", cfg.snapshot_dir}}},
          {"norms", {{"p_list", cfg.p_list}}},
          {"bounds", {{"enabled", cfg.bounds_enabled}, {"slack", cfg.bounds_slack}}}};
}

// ---------------------------------------------------------------------------

void Deviations::take_max(const Deviations& other) {
  L1 = std::max(L1, other.L1);
  L2 = std::max(L2, other.L2);
  J = std::max(J, other.J);
  if (Lp.size() < other.Lp.size()) Lp.resize(other.Lp.size(), 0.0);
  if (Jp.size() < other.Jp.size()) Jp.resize(other.Jp.size(), 0.0);
  for (std::size_t k = 0; k < other.Lp.size(); ++k) Lp[k] = std::max(Lp[k], other.Lp[k]);
  for (std::size_t k = 0; k < other.Jp.size(); ++k) Jp[k] = std::max(Jp[k], other.Jp[k]);
}

Deviations measure_deviations(const ScalarField& omega, const ScalarField& zeta, const std::vector<double>& p_list) {
  const ScalarField d = omega - zeta;
  Deviations dev;
  dev.L1 = lp_norm(d, 1.0);
  dev.L2 = lp_norm(d, 2.0);
  dev.J = angular_impulse(abs(d));
  for (double p : p_list) {
    const double lp = p == 1.0 ? dev.L1 : (p == 2.0 ? dev.L2 : lp_norm(d, p));
    dev.Lp.push_back(lp);
    dev.Jp.push_back(lp + dev.J);
  }
  return dev;
}

std::vector<Verdict> derive_verdicts(const ProfileParams& params, const std::vector<PerturbationSize>& sizes,
                                     const Deviations& running_max, double slack, std::vector<BoundSet>* bounds_out) {
  std::vector<Verdict> out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const BoundSet b = evaluate_bounds(params, sizes[k]);
    if (bounds_out) bounds_out->push_back(b);
    const double p = sizes[k].p;
    auto add = [&](const char* q, double measured, double bound) {
      out.push_back(Verdict{q, p, measured, bound, slack, measured <= bound + slack});
    };
    if (k == 0) {
      add("L1", running_max.L1, b.L1);
      add("J", running_max.J, b.J);
    }
    add("Lp", running_max.Lp.at(k), b.Lp);
    add("Jp", running_max.Jp.at(k), b.Jp_total);
  }
  return out;
}

bool StabilityReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

json StabilityReport::to_json() const {
  auto dev_json = [&](const Deviations& d) {
    json lp = json::object();
    json jp = json::object();
    for (std::size_t k = 0; k < config.p_list.size() && k < d.Lp.size(); ++k) {
      lp[p_key(config.p_list[k])] = d.Lp[k];
      jp[p_key(config.p_list[k])] = d.Jp[k];
    }
    return json{{"L1_dev", d.L1}, {"L2_dev", d.L2}, {"J_dev", d.J}, {"Lp_dev", lp}, {"Jp_dev", jp}};
  };

  json snaps = json::array();
  for (const auto& s : snapshots) {
    json rec = dev_json(s.dev);
    const ConservationRecord& c = s.conservation;
    rec["t"] = s.t;
    rec["drifts"] = {{"L1", c.drift_L1},
                     {"L2", c.drift_L2},
                     {"J", c.drift_J},
                     {"distribution", c.dist_drift},
                     {"patch_q", c.patch_q_drift},
                     {"patch_q_linear", c.patch_q_linear_drift}};
    rec["patch_q"] = c.patch_q;
    rec["min_value"] = c.min_value;
    rec["boundary_mass"] = c.boundary_mass;
    snaps.push_back(std::move(rec));
  }

  json sizes_json = json::array();
  for (const auto& s : sizes) {
    sizes_json.push_back({{"p", s.p}, {"eps1", s.eps1_or_majorant()}, {"epsJ", s.epsJ}, {"epsP", s.epsP}});
  }
  json bounds_json = json::array();
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    bounds_json.push_back({{"p", sizes.at(k).p},
                           {"bound_L1", bounds[k].L1},
                           {"bound_J", bounds[k].J},
                           {"bound_Lp", bounds[k].Lp},
                           {"bound_Jp_total", bounds[k].Jp_total}});
  }
  json verdicts_json = json::array();
  for (const auto& v : verdicts) {
    verdicts_json.push_back({{"quantity", v.quantity},
                             {"p", v.p},
                             {"measured_sup", v.measured},
                             {"bound", v.bound},
                             {"slack", v.slack},
                             {"pass", v.pass}});
  }

  return {{"schema", kReportSchema},
          {"status", "ok"},
          {"config", vsl::to_json(config)},
          {"horizon", horizon},
          {"profile_params", {{"M", params.M}, {"alpha", params.alpha}, {"R", params.R}, {"T", params.T}, {"T6", params.T6}}},
          {"perturbation", {{"sizes", sizes_json}, {"clipped_mass", clipped_mass}, {"phase", wobble_phase}}},
          {"snapshots", snaps},
          {"running_max", dev_json(running_max)},
          {"bounds", bounds_json},
          {"verdicts", verdicts_json},
          {"all_pass", all_pass()},
          {"provenance",
           {{"version", kVersion},
            {"n", config.grid.n},
            {"L", config.grid.L},
            {"h", config.grid.h()},
            {"seed", config.perturbation.seed},
            {"steps", steps},
            {"poisson", to_string(config.solver.poisson)}}}};
}

// ---------------------------------------------------------------------------

StabilityReport run_experiment(const ExperimentConfig& cfg) {
  StabilityReport report;
  report.config = cfg;
  report.horizon = cfg.solver.t_end;

  std::optional<Profile> made;
  try {
    made = make_profile(cfg.profile, cfg.grid);
  } catch (const TailRadiusError& e) {
    throw ExperimentError("tail-radius", e.what());
  } catch (const std::exception& e) {
    throw ExperimentError("profile", e.what());
  }
  const Profile& base = *made;
  report.params = base.params;

  Perturbed perturbed;
  try {
    perturbed = perturb(base, cfg.perturbation, cfg.p_list);
  } catch (const std::exception& e) {
    throw ExperimentError("perturbation", e.what());
  }
  report.sizes = perturbed.sizes;
  report.clipped_mass = perturbed.clipped_mass;
  report.wobble_phase = perturbed.phase;

  std::ofstream csv;
  try {
    if (!cfg.csv_path.empty()) {
      csv.open(cfg.csv_path);
      if (!csv) throw std::runtime_error("cannot open " + cfg.csv_path);
      write_conservation_csv_header(csv);
    }
    if (!cfg.snapshot_dir.empty()) std::filesystem::create_directories(cfg.snapshot_dir);
  } catch (const std::exception& e) {
    throw ExperimentError("output", e.what());
  }

  FlowState state = FlowState::initial(std::move(perturbed.omega0));
  int snapshot_index = 0;
  auto observer = [&](const FlowState& s, const StepInfo& info) {
    const Deviations dev = measure_deviations(s.omega, base.field, cfg.p_list);
    report.running_max.take_max(dev);
    if (!info.snapshot) return;
    SnapshotRecord rec{s.t, dev, conservation_report(s)};
    if (csv.is_open()) append_conservation_csv(csv, rec.conservation);
    if (!cfg.snapshot_dir.empty()) {
      std::ostringstream name;
      name << "snap_" << std::setw(5) << std::setfill('0') << snapshot_index << ".vsf";
      write_vsf(std::filesystem::path(cfg.snapshot_dir) / name.str(), s.omega);
    }
    ++snapshot_index;
    report.snapshots.push_back(std::move(rec));
  };

  try {
    SpectralSolver solver(cfg.grid, cfg.solver);
    solver.evolve(state, observer);
  } catch (const std::exception& e) {
    throw ExperimentError("solver", e.what());
  }
  report.steps = state.steps;

  if (cfg.bounds_enabled) {
    try {
      report.verdicts = derive_verdicts(report.params, report.sizes, report.running_max, cfg.bounds_slack, &report.bounds);
    } catch (const std::exception& e) {
      throw ExperimentError("bounds", e.what());
    }
  }
  return report;
}

std::vector<SweepResult> run_sweep(const std::vector<ExperimentConfig>& configs, unsigned threads) {
  std::vector<SweepResult> results(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      SweepResult r;
      try {
        r.report = run_experiment(configs[k]);
      } catch (const ExperimentError& e) {
        r.error_stage = e.stage();
        r.error_message = e.what();
      } catch (const std::exception& e) {
        r.error_stage = "unknown";
        r.error_message = e.what();
      }
      results[k] = std::move(r);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

unsigned threads_from_env() {
  if (const char* env = std::getenv("VSL_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace vsl
