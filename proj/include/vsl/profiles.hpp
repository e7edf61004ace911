#pragma once

// Radial monotone base states and the perturbation families applied to them.
// Every generator also measures what it produced: make_profile returns the
// ProfileParams of the sampled field and perturb returns the perturbation
// sizes ‖ω₀ - ζ‖₁, J(|ω₀ - ζ|), ‖ω₀ - ζ‖_p.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsl/bounds.hpp"
#include "vsl/field.hpp"

namespace vsl {

struct ProfileConfig {
  ProfileKind kind = ProfileKind::sharp_patch;
  double radius = 1.0;
  double amplitude = 1.0;
  double width = 1.0;                      // gaussian σ
  std::optional<double> ramp_width;        // mollified patch; default 3h
  std::vector<std::pair<double, double>> knots{{0.0, 1.0}, {1.0, 0.0}};
  /// sharp-patch only: sample the indicator itself instead of a 3h tanh ramp.
  bool sharp = false;
  /// Tail tolerance handed to tail_radius_for for non-compact profiles.
  double tail_eps = 1e-2;
  double tail_p = 1.0;
};

struct Profile {
  RadialProfile radial;  // what was actually sampled
  ScalarField field;
  ProfileParams params;
};

/// The radial profile a config describes on the given grid.
RadialProfile radial_profile_for(const ProfileConfig& cfg, const GridSpec& spec);

/// Samples the profile and measures M, α, R, T(R), T₆ from the grid.
/// R is the support radius for compact profiles and tail_radius_for(ε) up to
/// 0.8 L otherwise. Throws std::runtime_error when the profile overflows.
Profile make_profile(const ProfileConfig& cfg, const GridSpec& spec);

/// f(r_{k}) >= f(r_{k+1}) on `points` equally spaced radii in [0, r_max].
bool is_monotone(const RadialProfile& profile, double r_max, int points = 1024);

enum class PerturbationKind { none, translate, boundary_wobble, additive_bump, amplitude_scale };

std::string to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(const std::string& name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::none;
  double dx = 0.0;  // translate
  double dy = 0.0;
  int mode = 3;          // wobble: r -> r / (1 + a cos(m (θ - φ)))
  double amplitude = 0.0;
  double bump_x = 0.0;  // additive bump: height * 1{|x - c| < radius}
  double bump_y = 0.0;
  double bump_radius = 0.3;
  double bump_height = 0.1;
  double factor = 1.0;  // amplitude scale
  /// Nonzero seeds draw the wobble phase φ uniformly; 0 keeps φ = 0.
  std::uint64_t seed = 0;
};

struct Perturbed {
  ScalarField omega0;
  std::vector<PerturbationSize> sizes;  // one per requested p
  double clipped_mass = 0.0;            // mass removed by clipping negatives
  double phase = 0.0;
};

/// Builds ω₀ from the profile and measures the perturbation sizes against
/// base.field. Negative values are clipped to 0. Throws std::runtime_error
/// when ω₀ leaves the safe zone (boundary mass above 1e-4).
Perturbed perturb(const Profile& base, const PerturbationSpec& spec, const std::vector<double>& p_list);

/// Perturbation sizes of omega0 against zeta for one p.
PerturbationSize measure_perturbation(const ScalarField& omega0, const ScalarField& zeta, double p);

}  // namespace vsl
