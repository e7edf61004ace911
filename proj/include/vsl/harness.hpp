#pragma once

// Experiment orchestration: build a profile and its perturbation, evolve,
// track ‖ω(t) - ζ‖ in every requested norm, evaluate the stability bounds and
// emit a versioned JSON report.
//
// Config document (all keys optional except where noted):
//
//   grid.n, grid.L
//   profile.kind (sharp-patch | mollified-patch | gaussian | piecewise-linear),
//     profile.radius, profile.amplitude, profile.width, profile.ramp_width,
//     profile.knots [[r, f], ...], profile.sharp, profile.tail_eps
//   perturbation.kind (none | translate | boundary-wobble | additive-bump |
//     amplitude-scale), perturbation.{dx, dy, m, a, center, radius, height,
//     factor, seed}
//   solver.cfl, solver.dealias, solver.filter, solver.poisson (periodic | free_space)
//   run.t_end, run.snapshot_stride, run.csv, run.snapshot_dir, run.name
//   norms.p_list
//   bounds.enabled, bounds.slack

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsl/bounds.hpp"
#include "vsl/euler.hpp"
#include "vsl/profiles.hpp"

namespace vsl {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "vsl.report/1";

struct ExperimentConfig {
  std::string name;
  GridSpec grid{256, 4.0};
  ProfileConfig profile;
  PerturbationSpec perturbation;
  SolverConfig solver;
  std::vector<double> p_list{2.0};
  bool bounds_enabled = true;
  double bounds_slack = 0.0;
  std::string csv_path;
  std::string snapshot_dir;
};

/// Throws ExperimentError with stage "config" on malformed documents.
ExperimentConfig parse_config(const nlohmann::json& doc);
/// Full config with defaults filled in.
nlohmann::json to_json(const ExperimentConfig& cfg);

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// ‖ω - ζ‖ measured in every norm the report tracks.
struct Deviations {
  double L1 = 0.0;
  double L2 = 0.0;
  double J = 0.0;                // J(|ω - ζ|)
  std::vector<double> Lp;        // per p in p_list
  std::vector<double> Jp;        // ‖ω - ζ‖_{J_p}

  void take_max(const Deviations& other);
};

Deviations measure_deviations(const ScalarField& omega, const ScalarField& zeta, const std::vector<double>& p_list);

struct SnapshotRecord {
  double t = 0.0;
  Deviations dev;
  ConservationRecord conservation;
};

struct Verdict {
  std::string quantity;  // L1, J, Lp, Jp
  double p = 0.0;
  double measured = 0.0;  // running max over every step
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct StabilityReport {
  ExperimentConfig config;
  ProfileParams params;
  std::vector<PerturbationSize> sizes;
  double clipped_mass = 0.0;
  double wobble_phase = 0.0;
  std::vector<SnapshotRecord> snapshots;
  Deviations running_max;
  std::vector<BoundSet> bounds;  // per p
  std::vector<Verdict> verdicts;
  long steps = 0;
  double horizon = 0.0;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Verdicts recomputed from stored sizes, params and running maxima.
std::vector<Verdict> derive_verdicts(const ProfileParams& params, const std::vector<PerturbationSize>& sizes,
                                     const Deviations& running_max, double slack, std::vector<BoundSet>* bounds_out);

/// Runs one experiment. Failures raise ExperimentError labelled with the
/// stage (config, profile, tail-radius, perturbation, solver, bounds, output).
StabilityReport run_experiment(const ExperimentConfig& cfg);

struct SweepResult {
  std::optional<StabilityReport> report;
  std::string error_stage;
  std::string error_message;
};

/// Runs experiments on up to `threads` worker threads; results keep input order.
std::vector<SweepResult> run_sweep(const std::vector<ExperimentConfig>& configs, unsigned threads);

/// VSL_THREADS if set and positive, else the hardware concurrency (at least 1).
unsigned threads_from_env();

}  // namespace vsl
