#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "vsl/euler.hpp"

using namespace vsl;

namespace {

// Whole-plane Biot-Savart sum u(x) = Σ K(x - y) ω(y) h², K(z) = (-z₂, z₁) / (2π|z|²).
std::pair<double, double> biot_savart(const ScalarField& omega, double x1, double x2) {
  const GridSpec& g = omega.spec();
  long double u1 = 0.0L, u2 = 0.0L;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double w = omega(i, j);
      if (w == 0.0) continue;
      const double z1 = x1 - g.center(i);
      const double z2 = x2 - g.center(j);
      const double r2 = z1 * z1 + z2 * z2;
      u1 += -z2 / r2 * w;
      u2 += z1 / r2 * w;
    }
  }
  const double c = g.cell_area() / (2.0 * kPi);
  return {static_cast<double>(u1) * c, static_cast<double>(u2) * c};
}

ScalarField two_bumps(const GridSpec& g) {
  ScalarField w(g);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double x = g.center(i) - 1.0, y = g.center(j);
      w(i, j) = std::exp(-(x * x + y * y) / 0.25) + 0.5 * std::exp(-((x + 2) * (x + 2) + (y - 0.5) * (y - 0.5)) / 0.3);
    }
  }
  return w;
}

double forward_drift(const ConservationRecord& r) { return std::max({r.drift_L1, r.drift_L2, r.drift_J}); }

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.cfl = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.cfl = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.t_end = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.snapshot_stride = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.time_direction = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(PoissonModeNames, RoundTrip) {
  for (auto m : {PoissonMode::periodic, PoissonMode::free_space}) EXPECT_EQ(poisson_mode_from_string(to_string(m)), m);
  EXPECT_EQ(poisson_mode_from_string("free-space"), PoissonMode::free_space);
  EXPECT_THROW(poisson_mode_from_string("neumann"), std::invalid_argument);
}

TEST(Velocity, ZeroVorticity) {
  for (auto mode : {PoissonMode::periodic, PoissonMode::free_space}) {
    const Velocity v = velocity_from_vorticity(ScalarField(GridSpec(32, 2.0)), mode);
    EXPECT_EQ(sup_norm(v.u1), 0.0);
    EXPECT_EQ(sup_norm(v.u2), 0.0);
    EXPECT_EQ(spectral_divergence(v.u1, v.u2), 0.0);
  }
}

TEST(Velocity, GaussianClosedForm) {
  const GridSpec g(256, 6.0);
  const ScalarField omega = sample_profile(RadialProfile::gaussian(), g);
  const Velocity v = velocity_from_vorticity(omega, PoissonMode::free_space);
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double x = g.center(i), y = g.center(j);
      const double r = std::hypot(x, y);
      if (r > 4.0) continue;
      const double ut = (1.0 - std::exp(-r * r)) / (2.0 * r);
      worst = std::max({worst, std::abs(v.u1(i, j) + ut * y / r), std::abs(v.u2(i, j) - ut * x / r)});
    }
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Velocity, UnitPatchMatchesDirectQuadrature) {
  const GridSpec g(128, 4.0);
  const ScalarField omega = disk_indicator(g, 1.0);
  const Velocity v = velocity_from_vorticity(omega, PoissonMode::free_space);
  // probe cells at |x| ≈ 2 around the circle
  const int probes[8][2] = {{96, 64}, {32, 64}, {64, 96}, {64, 32}, {87, 87}, {41, 41}, {87, 41}, {41, 87}};
  for (const auto& p : probes) {
    const double x = g.center(p[0]), y = g.center(p[1]);
    const double r = std::hypot(x, y);
    const auto [b1, b2] = biot_savart(omega, x, y);
    EXPECT_NEAR(v.u1(p[0], p[1]), b1, 1e-3 * std::hypot(b1, b2));
    EXPECT_NEAR(v.u2(p[0], p[1]), b2, 1e-3 * std::hypot(b1, b2));
    const double speed = std::hypot(v.u1(p[0], p[1]), v.u2(p[0], p[1]));
    // the staircase disk is radial only up to O(h) multipoles
    EXPECT_NEAR(speed, quadrature(omega) / (2.0 * kPi * r), 1e-3 * speed);
    if (std::abs(r - 2.0) < 0.05) EXPECT_NEAR(speed, 0.25, 0.0125);
    // counter-clockwise rotation for positive vorticity
    EXPECT_GT(-y * v.u1(p[0], p[1]) + x * v.u2(p[0], p[1]), 0.0);
  }
}

TEST(Velocity, PeriodicIsDivergenceFree) {
  const GridSpec g(128, 4.0);
  const Velocity v = velocity_from_vorticity(two_bumps(g), PoissonMode::periodic);
  EXPECT_LE(spectral_divergence(v.u1, v.u2), 1e-12);
  EXPECT_NEAR(v.mean_vorticity, quadrature(two_bumps(g)) / (4.0 * g.L * g.L), 1e-15);
  const Velocity f = velocity_from_vorticity(two_bumps(g), PoissonMode::free_space);
  EXPECT_EQ(f.mean_vorticity, 0.0);
}

TEST(Step, ZeroFieldStaysZero) {
  SolverConfig cfg;
  cfg.t_end = 1.0;
  FlowState s = FlowState::initial(ScalarField(GridSpec(32, 2.0)));
  evolve(s, cfg);
  EXPECT_EQ(sup_norm(s.omega), 0.0);
  EXPECT_DOUBLE_EQ(s.t, 1.0);
}

TEST(Step, SingleStepAdvancesTime) {
  const GridSpec g(64, 6.0);
  SolverConfig cfg;
  const FlowState s0 = FlowState::initial(two_bumps(g));
  const FlowState s1 = step(s0, cfg);
  EXPECT_GT(s1.t, 0.0);
  EXPECT_EQ(s1.steps, 1);
  const double umax = std::max(sup_norm(velocity_from_vorticity(s0.omega).u1), sup_norm(velocity_from_vorticity(s0.omega).u2));
  EXPECT_LE(s1.t, cfg.cfl * g.h() / umax * (1.0 + 1e-12));
}

TEST(Step, NonFiniteStateThrows) {
  const GridSpec g(32, 2.0);
  ScalarField w = disk_indicator(g, 0.5);
  w(3, 3) = std::numeric_limits<double>::quiet_NaN();
  FlowState s = FlowState::initial(w);
  SpectralSolver solver(g, SolverConfig{});
  EXPECT_THROW(solver.step(s), std::runtime_error);
}

TEST(Step, GridMismatchThrows) {
  SpectralSolver solver(GridSpec(32, 2.0), SolverConfig{});
  FlowState s = FlowState::initial(ScalarField(GridSpec(64, 2.0)));
  EXPECT_THROW(solver.step(s), std::invalid_argument);
}

TEST(Conservation, InitialDriftsAreZero) {
  const FlowState s = FlowState::initial(two_bumps(GridSpec(64, 6.0)));
  const ConservationRecord r = conservation_report(s);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.drift_L1, 0.0);
  EXPECT_EQ(r.drift_L2, 0.0);
  EXPECT_EQ(r.drift_J, 0.0);
  EXPECT_EQ(r.dist_drift, 0.0);
  EXPECT_EQ(r.patch_q_drift, 0.0);
  EXPECT_EQ(r.patch_q_linear_drift, 0.0);
}

TEST(Conservation, BaselineLadder) {
  const Baselines b = measure_baselines(sample_profile(RadialProfile::gaussian(), GridSpec(64, 6.0)));
  ASSERT_EQ(b.ladder_alpha.size(), 16u);
  EXPECT_DOUBLE_EQ(b.ladder_alpha.back(), b.sup * 16.0 / 17.0);
  for (std::size_t k = 1; k < 16; ++k) EXPECT_LE(b.ladder_counts[k], b.ladder_counts[k - 1]);
}

TEST(Conservation, TranslatedBumpKeepsImpulse) {
  const GridSpec g(256, 6.0);
  SolverConfig cfg;
  cfg.poisson = PoissonMode::free_space;
  cfg.t_end = 10.0;
  FlowState s = FlowState::initial(two_bumps(g));
  double worst = 0.0;
  evolve(s, cfg, [&](const FlowState& st, const StepInfo&) { worst = std::max(worst, conservation_report(st).drift_J); });
  EXPECT_LE(worst, 1e-4);
}

TEST(Conservation, CsvRows) {
  std::ostringstream out;
  write_conservation_csv_header(out);
  ConservationRecord r;
  r.t = 0.5;
  r.L1 = 1.0;
  r.L2 = 2.0;
  r.J = 3.0;
  r.dist_drift = 0.25;
  r.patch_q = 4.0;
  r.boundary_mass = 0.125;
  append_conservation_csv(out, r);
  EXPECT_EQ(out.str(), "t,L1,L2,J,dist_drift,patch_q,boundary_mass\n0.5,1,2,3,0.25,4,0.125\n");
}

TEST(Evolve, ZeroHorizonGivesInitialSnapshotOnly) {
  SolverConfig cfg;
  cfg.t_end = 0.0;
  FlowState s = FlowState::initial(two_bumps(GridSpec(32, 6.0)));
  int calls = 0, snapshots = 0;
  evolve(s, cfg, [&](const FlowState&, const StepInfo& info) {
    ++calls;
    snapshots += info.snapshot ? 1 : 0;
  });
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(snapshots, 1);
  EXPECT_EQ(s.steps, 0);
}

TEST(Evolve, LargeStrideGivesInitialAndFinal) {
  SolverConfig cfg;
  cfg.t_end = 2.0;
  cfg.snapshot_stride = 100000;
  FlowState s = FlowState::initial(two_bumps(GridSpec(64, 6.0)));
  std::vector<double> times;
  long calls = 0;
  evolve(s, cfg, [&](const FlowState& st, const StepInfo& info) {
    ++calls;
    if (info.snapshot) times.push_back(st.t);
  });
  ASSERT_EQ(times.size(), 2u);
  EXPECT_EQ(times[0], 0.0);
  EXPECT_EQ(times[1], 2.0);
  EXPECT_EQ(calls, s.steps + 1);
}

TEST(Evolve, StrideSnapshots) {
  SolverConfig cfg;
  cfg.t_end = 3.0;
  cfg.snapshot_stride = 2;
  FlowState s = FlowState::initial(two_bumps(GridSpec(64, 6.0)));
  std::vector<long> steps;
  evolve(s, cfg, [&](const FlowState& st, const StepInfo& info) {
    if (info.snapshot) steps.push_back(st.steps);
  });
  for (std::size_t k = 0; k + 1 < steps.size(); ++k) EXPECT_EQ(steps[k], static_cast<long>(2 * k));
  EXPECT_EQ(steps.back(), s.steps);
}

TEST(Evolve, RadialGaussianIsStationary) {
  const GridSpec g(128, 6.0);
  const ScalarField zeta = sample_profile(RadialProfile::gaussian(), g);
  SolverConfig cfg;
  cfg.t_end = 5.0;
  cfg.poisson = PoissonMode::free_space;
  FlowState s = FlowState::initial(zeta);
  evolve(s, cfg);
  EXPECT_LE(lp_norm(s.omega - zeta, 1.0), 1e-3 * lp_norm(zeta, 1.0));
}

TEST(Evolve, TimeReversalRecoversInitialData) {
  const GridSpec g(128, 6.0);
  const ScalarField w0 = two_bumps(g);
  for (auto mode : {PoissonMode::periodic, PoissonMode::free_space}) {
    SolverConfig cfg;
    cfg.t_end = 5.0;
    cfg.poisson = mode;
    FlowState s = FlowState::initial(w0);
    evolve(s, cfg);
    const ConservationRecord r = conservation_report(s);
    ASSERT_GT(lp_norm(s.omega - w0, 1.0), 0.1);  // the flow moved
    FlowState back = FlowState::initial(s.omega);
    cfg.time_direction = -1;
    evolve(back, cfg);
    EXPECT_LE(lp_norm(back.omega - w0, 1.0), 10.0 * forward_drift(r) * r.L1) << to_string(mode);
  }
}

TEST(Evolve, DealiasedModesStayZero) {
  const GridSpec g(32, 6.0);
  SpectralSolver solver(g, SolverConfig{});
  const ScalarField t = solver.tendency(two_bumps(g));
  EXPECT_GT(sup_norm(t), 0.0);
  // the tendency is band-limited to the 2/3 band: a second truncation is a no-op
  SolverConfig off;
  off.dealias = false;
  SpectralSolver raw(g, off);
  EXPECT_GT(lp_norm(raw.tendency(two_bumps(g)) - t, 1.0), 0.0);
}

TEST(Evolve, DeterministicAndThreadIndependent) {
  const GridSpec g(64, 6.0);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  FlowState serial = FlowState::initial(two_bumps(g));
  evolve(serial, cfg);
  std::vector<FlowState> states(3, FlowState::initial(two_bumps(g)));
  std::vector<std::thread> pool;
  for (auto& st : states) pool.emplace_back([&st, &cfg] { evolve(st, cfg); });
  for (auto& t : pool) t.join();
  for (const auto& st : states) {
    EXPECT_EQ(st.omega, serial.omega);
    EXPECT_EQ(st.steps, serial.steps);
  }
}

TEST(Evolve, FilterDampsOnlyHighModes) {
  const GridSpec g(64, 6.0);
  SolverConfig cfg;
  cfg.t_end = 1.0;
  FlowState plain = FlowState::initial(two_bumps(g));
  evolve(plain, cfg);
  cfg.filter = true;
  FlowState filtered = FlowState::initial(two_bumps(g));
  evolve(filtered, cfg);
  EXPECT_LE(lp_norm(filtered.omega - plain.omega, 1.0), 1e-3 * lp_norm(plain.omega, 1.0));
}
