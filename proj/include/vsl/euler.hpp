#pragma once

// Pseudo-spectral solver for the 2D incompressible Euler equations in
// vorticity form, ∂_t ω + u·∇ω = 0 with u = ∇⊥Δ⁻¹ω, on the box [-L, L)².
//
// Two Poisson closures are available:
//   periodic    u from the periodic stream function (zero mean mode removed)
//   free_space  u from the whole-plane Biot-Savart kernel via a truncated
//               Green's function convolution on a zero-padded 2n grid; the
//               vorticity must vanish near the box edges
//
// Time stepping is classical RK4 with dt = cfl * h / max|u|. With dealiasing
// on, every nonlinear term is evaluated from the 2/3-truncated vorticity and
// the tendency is truncated again, so modes outside the 2/3 band never change.

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vsl/field.hpp"

namespace vsl {

enum class PoissonMode { periodic, free_space };

std::string to_string(PoissonMode mode);
PoissonMode poisson_mode_from_string(const std::string& name);

struct SolverConfig {
  double cfl = 0.5;
  bool dealias = true;
  /// Multiply the spectrum by exp(-36 (|k|/k_max)^36) per axis after each step.
  bool filter = false;
  double t_end = 10.0;
  int snapshot_stride = 50;
  PoissonMode poisson = PoissonMode::periodic;
  /// +1 evolves forward; -1 flips the velocity (time reversal).
  int time_direction = 1;

  void validate() const;
};

struct Velocity {
  ScalarField u1;
  ScalarField u2;
  /// Mean vorticity removed by the periodic closure (0 for free_space).
  double mean_vorticity = 0.0;
};

/// Full-band velocity of omega.
Velocity velocity_from_vorticity(const ScalarField& omega, PoissonMode mode = PoissonMode::periodic);

/// max |∇·u| / (k_max max|u|) with spectral derivatives; 0 for u = 0.
double spectral_divergence(const ScalarField& u1, const ScalarField& u2);

struct Baselines {
  double L1 = 0.0;
  double L2 = 0.0;
  double J = 0.0;
  double sup = 0.0;
  std::vector<double> ladder_alpha;        // 16 thresholds sup * k / 17
  std::vector<std::size_t> ladder_counts;  // cells above each threshold
  double patch_q = 0.0;
  double patch_q_linear = 0.0;
};

struct FlowState {
  ScalarField omega;
  double t = 0.0;
  long steps = 0;
  Baselines baselines;

  /// t = 0 state with baselines measured from omega0.
  static FlowState initial(ScalarField omega0);
};

Baselines measure_baselines(const ScalarField& omega);

struct ConservationRecord {
  double t = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double J = 0.0;
  double drift_L1 = 0.0;  // relative
  double drift_L2 = 0.0;
  double drift_J = 0.0;
  /// max over the threshold ladder of |Δ count| / count at the lowest threshold.
  double dist_drift = 0.0;
  double patch_q = 0.0;
  double patch_q_drift = 0.0;  // relative when the baseline is nonzero
  double patch_q_linear = 0.0;
  double patch_q_linear_drift = 0.0;
  double boundary_mass = 0.0;
  double min_value = 0.0;
};

ConservationRecord conservation_report(const FlowState& state);

/// Columns: t,L1,L2,J,dist_drift,patch_q,boundary_mass
void write_conservation_csv_header(std::ostream& out);
void append_conservation_csv(std::ostream& out, const ConservationRecord& rec);

struct StepInfo {
  double dt = 0.0;
  double max_velocity = 0.0;
  bool snapshot = false;
};

/// Called after every accepted step (and once for the initial state).
using Observer = std::function<void(const FlowState&, const StepInfo&)>;

class SpectralSolver {
 public:
  SpectralSolver(const GridSpec& spec, const SolverConfig& cfg);
  ~SpectralSolver();
  SpectralSolver(const SpectralSolver&) = delete;
  SpectralSolver& operator=(const SpectralSolver&) = delete;

  const SolverConfig& config() const { return cfg_; }
  SolverConfig& config() { return cfg_; }

  /// One RK4 step of at most dt_max. Returns the step taken.
  /// Throws std::runtime_error on non-finite values.
  StepInfo step(FlowState& state, double dt_max = kInf);

  /// Steps until state.t reaches config().t_end.
  void evolve(FlowState& state, const Observer& observer = {});

  /// Tendency -dir * u·∇ω (after truncation when dealiasing is on).
  ScalarField tendency(const ScalarField& omega);

 private:
  struct Impl;
  SolverConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

/// Convenience single step with a temporary solver.
FlowState step(const FlowState& state, const SolverConfig& cfg);

/// Convenience evolve with a temporary solver.
void evolve(FlowState& state, const SolverConfig& cfg, const Observer& observer = {});

}  // namespace vsl
