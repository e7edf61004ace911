#include <cmath>

#include <gtest/gtest.h>

#include "vsl/profiles.hpp"

using namespace vsl;

namespace {

// ∫₀^{2π} |s(θ)^k - 1| dθ with s = 1 + a cos(mθ), by a fine periodic rule.
double wobble_angle_integral(double a, int m, int k) {
  const int N = 1 << 20;
  long double sum = 0.0L;
  for (int q = 0; q < N; ++q) {
    const double s = 1.0 + a * std::cos(m * (2.0 * kPi * (q + 0.5) / N));
    sum += std::abs(std::pow(s, k) - 1.0);
  }
  return static_cast<double>(sum) * 2.0 * kPi / N;
}

ProfileConfig sharp_config(bool sharp) {
  ProfileConfig c;
  c.kind = ProfileKind::sharp_patch;
  c.sharp = sharp;
  return c;
}

}  // namespace

TEST(MakeProfile, SharpPatchParams) {
  const GridSpec g(512, 4.0);
  const Profile p = make_profile(sharp_config(true), g);
  EXPECT_EQ(p.params.M, 1.0);
  EXPECT_NEAR(p.params.alpha, kPi, 8.0 * g.h());
  EXPECT_EQ(p.params.R, 1.0);
  EXPECT_EQ(p.params.T, 0.0);
  EXPECT_NEAR(p.params.T6, kPi / 4.0, 16.0 * g.h());
  EXPECT_EQ(p.radial.kind(), ProfileKind::sharp_patch);
}

TEST(MakeProfile, DefaultPatchIsMollified) {
  const GridSpec g(256, 4.0);
  const Profile p = make_profile(sharp_config(false), g);
  EXPECT_EQ(p.radial.kind(), ProfileKind::mollified_patch);
  EXPECT_DOUBLE_EQ(p.radial.width(), 3.0 * g.h());
  // ∫ 2πr (1 - tanh((r - 1)/w)) / 2 dr = π (1 + π² w² / 12) up to exponentially small terms
  const double w = 3.0 * g.h();
  EXPECT_NEAR(p.params.alpha, kPi * (1.0 + kPi * kPi * w * w / 12.0), 1e-4);
  ProfileConfig c = sharp_config(false);
  c.ramp_width = 0.1;
  EXPECT_DOUBLE_EQ(make_profile(c, g).radial.width(), 0.1);
}

TEST(MakeProfile, GaussianParams) {
  const GridSpec g(256, 6.0);
  ProfileConfig c;
  c.kind = ProfileKind::gaussian;
  const Profile p = make_profile(c, g);
  EXPECT_NEAR(p.params.M, std::exp(-g.h() * g.h() / 2.0), 1e-15);
  EXPECT_NEAR(p.params.alpha, kPi, 1e-10);
  EXPECT_NEAR(p.params.T6, 6.0 * kPi, 1e-8);
  const TailRadius t = tail_radius_for(RadialProfile::gaussian(), c.tail_eps, c.tail_p, 0.8 * g.L);
  EXPECT_EQ(p.params.R, t.R);
  EXPECT_NEAR(p.params.T, t.tail, 1e-2 * t.tail);
}

TEST(MakeProfile, PiecewiseLinearCone) {
  const GridSpec g(512, 4.0);
  ProfileConfig c;
  c.kind = ProfileKind::piecewise_linear;
  c.knots = {{0.0, 1.0}, {1.0, 0.0}};
  const Profile p = make_profile(c, g);
  EXPECT_NEAR(p.params.alpha, kPi / 3.0, 1e-4);
  EXPECT_EQ(p.params.R, 1.0);
}

TEST(MakeProfile, Failures) {
  ProfileConfig wide;
  wide.kind = ProfileKind::gaussian;
  wide.width = 3.0;
  EXPECT_THROW(make_profile(wide, GridSpec(128, 4.0)), std::runtime_error);
  ProfileConfig tail;
  tail.kind = ProfileKind::gaussian;
  tail.tail_eps = 1e-12;
  EXPECT_THROW(make_profile(tail, GridSpec(128, 6.0)), TailRadiusError);
  ProfileConfig rising;
  rising.kind = ProfileKind::piecewise_linear;
  rising.knots = {{0.0, 0.5}, {0.5, 1.0}, {1.0, 0.0}};
  EXPECT_THROW(make_profile(rising, GridSpec(128, 4.0)), std::invalid_argument);
}

TEST(Monotonicity, Kinds) {
  EXPECT_TRUE(is_monotone(RadialProfile::gaussian(), 6.0));
  EXPECT_TRUE(is_monotone(RadialProfile::sharp_patch(1.0), 6.0));
  EXPECT_TRUE(is_monotone(RadialProfile::mollified_patch(1.0, 0.1), 6.0));
  EXPECT_TRUE(is_monotone(RadialProfile::cone(), 6.0));
  EXPECT_THROW(RadialProfile::piecewise_linear({{0.0, 0.2}, {1.0, 1.0}, {2.0, 0.0}}), std::invalid_argument);
}

TEST(Perturbation, KindNames) {
  for (auto k : {PerturbationKind::none, PerturbationKind::translate, PerturbationKind::boundary_wobble,
                 PerturbationKind::additive_bump, PerturbationKind::amplitude_scale}) {
    EXPECT_EQ(perturbation_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(perturbation_kind_from_string("shear"), std::invalid_argument);
}

TEST(Perturbation, IdentityHasZeroSize) {
  const Profile base = make_profile(sharp_config(true), GridSpec(128, 4.0));
  const Perturbed p = perturb(base, PerturbationSpec{}, {1.0, 2.0});
  EXPECT_EQ(p.omega0, base.field);
  ASSERT_EQ(p.sizes.size(), 2u);
  for (const auto& s : p.sizes) {
    EXPECT_EQ(*s.eps1, 0.0);
    EXPECT_EQ(s.epsJ, 0.0);
    EXPECT_EQ(s.epsP, 0.0);
  }
  EXPECT_EQ(p.sizes[1].p, 2.0);
}

TEST(Perturbation, WobbleSizesMatchAngularIntegrals) {
  // For monotone ζ the difference ζ(r/s) - ζ(r) keeps one sign along each ray,
  // so ‖ω₀ - ζ‖₁ = α/(2π) ∫|s² - 1| dθ and J(|ω₀ - ζ|) = J(ζ)/(2π) ∫|s⁴ - 1| dθ.
  const GridSpec g(512, 4.0);
  const Profile base = make_profile(sharp_config(false), g);
  const double J = angular_impulse(base.field);
  for (double a : {0.01, 0.02, 0.04, 0.08}) {
    PerturbationSpec s;
    s.kind = PerturbationKind::boundary_wobble;
    s.amplitude = a;
    s.mode = 3;
    const Perturbed p = perturb(base, s, {1.0});
    const double eps1 = base.params.alpha / (2.0 * kPi) * wobble_angle_integral(a, 3, 2);
    const double epsJ = J / (2.0 * kPi) * wobble_angle_integral(a, 3, 4);
    EXPECT_NEAR(*p.sizes[0].eps1, eps1, 5e-3 * eps1) << "a = " << a;
    EXPECT_NEAR(p.sizes[0].epsJ, epsJ, 5e-3 * epsJ) << "a = " << a;
    EXPECT_DOUBLE_EQ(p.sizes[0].epsP, *p.sizes[0].eps1);
  }
}

TEST(Perturbation, SharpWobbleSize) {
  const GridSpec g(512, 4.0);
  const Profile base = make_profile(sharp_config(true), g);
  PerturbationSpec s;
  s.kind = PerturbationKind::boundary_wobble;
  s.amplitude = 0.04;
  const Perturbed p = perturb(base, s, {1.0});
  const double eps1 = 0.5 * wobble_angle_integral(0.04, 3, 2);
  EXPECT_NEAR(*p.sizes[0].eps1, eps1, 0.1 * eps1);
}

TEST(Perturbation, AdditiveBump) {
  const GridSpec g(512, 4.0);
  const Profile base = make_profile(sharp_config(true), g);
  PerturbationSpec s;
  s.kind = PerturbationKind::additive_bump;
  s.bump_x = 2.0;
  const Perturbed p = perturb(base, s, {1.0, 2.0});
  const double area = quadrature(disk_indicator(g, 0.3, 2.0, 0.0));
  EXPECT_NEAR(*p.sizes[0].eps1, 0.1 * kPi * 0.09, 0.1 * 8.0 * g.h() * 2.0 * kPi * 0.3);
  EXPECT_NEAR(*p.sizes[0].eps1, 0.1 * area, 1e-12);
  EXPECT_NEAR(p.sizes[1].epsP, std::sqrt(0.01 * area), 1e-12);
  // J(1_{B_r(x0)}) = π r⁴/2 + π r² |x0|²
  EXPECT_NEAR(p.sizes[0].epsJ, 0.1 * (kPi * 0.0081 / 2.0 + kPi * 0.09 * 4.0), 0.01);
}

TEST(Perturbation, TranslateAndScale) {
  const GridSpec g(256, 4.0);
  const Profile base = make_profile(sharp_config(true), g);
  PerturbationSpec t;
  t.kind = PerturbationKind::translate;
  t.dx = 3.0 * g.h();
  const Perturbed moved = perturb(base, t, {1.0});
  EXPECT_NEAR(quadrature(moved.omega0), quadrature(base.field), 8.0 * g.h());
  PerturbationSpec a;
  a.kind = PerturbationKind::amplitude_scale;
  a.factor = 1.1;
  const Perturbed scaled = perturb(base, a, {2.0});
  EXPECT_NEAR(*scaled.sizes[0].eps1, 0.1 * base.params.alpha, 1e-12);
  EXPECT_NEAR(scaled.sizes[0].epsJ, 0.1 * angular_impulse(base.field), 1e-12);
}

TEST(Perturbation, NegativeValuesAreClipped) {
  const GridSpec g(128, 4.0);
  const Profile base = make_profile(sharp_config(true), g);
  PerturbationSpec s;
  s.kind = PerturbationKind::amplitude_scale;
  s.factor = -0.5;
  const Perturbed p = perturb(base, s, {1.0});
  EXPECT_EQ(sup_norm(p.omega0), 0.0);
  EXPECT_NEAR(p.clipped_mass, 0.5 * base.params.alpha, 1e-12);
}

TEST(Perturbation, SafeZoneViolationThrows) {
  const Profile base = make_profile(sharp_config(true), GridSpec(128, 4.0));
  PerturbationSpec s;
  s.kind = PerturbationKind::translate;
  s.dx = 3.0;
  EXPECT_THROW(perturb(base, s, {1.0}), std::runtime_error);
  PerturbationSpec w;
  w.kind = PerturbationKind::boundary_wobble;
  w.amplitude = 1.2;
  EXPECT_THROW(perturb(base, w, {1.0}), std::invalid_argument);
}

TEST(Perturbation, SeededPhaseIsReproducible) {
  const Profile base = make_profile(sharp_config(false), GridSpec(128, 4.0));
  PerturbationSpec s;
  s.kind = PerturbationKind::boundary_wobble;
  s.amplitude = 0.05;
  s.seed = 42;
  const Perturbed a = perturb(base, s, {1.0});
  const Perturbed b = perturb(base, s, {1.0});
  EXPECT_EQ(a.omega0, b.omega0);
  EXPECT_EQ(a.phase, b.phase);
  EXPECT_GT(a.phase, 0.0);
  s.seed = 43;
  EXPECT_NE(perturb(base, s, {1.0}).phase, a.phase);
  s.seed = 0;
  EXPECT_EQ(perturb(base, s, {1.0}).phase, 0.0);
}

TEST(Perturbation, MeasureMatchesFunctionals) {
  const GridSpec g(128, 4.0);
  const ScalarField zeta = disk_indicator(g, 1.0);
  const ScalarField w = disk_indicator(g, 1.0, 0.2, 0.1);
  const PerturbationSize s = measure_perturbation(w, zeta, 3.0);
  EXPECT_DOUBLE_EQ(*s.eps1, lp_norm(w - zeta, 1.0));
  EXPECT_DOUBLE_EQ(s.epsJ, angular_impulse(abs(w - zeta)));
  EXPECT_DOUBLE_EQ(s.epsP, lp_norm(w - zeta, 3.0));
  EXPECT_EQ(s.p, 3.0);
}
