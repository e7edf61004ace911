#include "vsl/profiles.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vsl/rearrange.hpp"

namespace vsl {

RadialProfile radial_profile_for(const ProfileConfig& cfg, const GridSpec& spec) {
  switch (cfg.kind) {
    case ProfileKind::sharp_patch:
      if (cfg.sharp) return RadialProfile::sharp_patch(cfg.radius, cfg.amplitude);
      return RadialProfile::mollified_patch(cfg.radius, cfg.ramp_width.value_or(3.0 * spec.h()), cfg.amplitude);
    case ProfileKind::mollified_patch:
      return RadialProfile::mollified_patch(cfg.radius, cfg.ramp_width.value_or(3.0 * spec.h()), cfg.amplitude);
    case ProfileKind::gaussian:
      return RadialProfile::gaussian(cfg.amplitude, cfg.width);
    case ProfileKind::piecewise_linear:
      return RadialProfile::piecewise_linear(cfg.knots);
  }
  throw std::invalid_argument("unhandled profile kind");
}

bool is_monotone(const RadialProfile& profile, double r_max, int points) {
  double prev = profile(0.0);
  for (int k = 1; k < points; ++k) {
    const double v = profile(r_max * k / (points - 1));
    if (v > prev) return false;
    prev = v;
  }
  return true;
}

Profile make_profile(const ProfileConfig& cfg, const GridSpec& spec) {
  RadialProfile radial = radial_profile_for(cfg, spec);
  if (!is_monotone(radial, spec.L * std::sqrt(2.0))) {
    throw std::invalid_argument("profile is not radially non-increasing");
  }
  if (support_overflows(radial, spec)) {
    std::ostringstream msg;
    msg << to_string(radial.kind()) << " profile overflows the domain: f(0.9L) = " << radial(0.9 * spec.L);
    throw std::runtime_error(msg.str());
  }
  Profile out{radial, sample_profile(radial, spec), {}};
  ProfileParams& pp = out.params;
  pp.M = sup_norm(out.field);
  pp.alpha = lp_norm(out.field, 1.0);
  if (auto s = radial.support_radius()) {
    pp.R = *s;
  } else {
    pp.R = tail_radius_for(radial, cfg.tail_eps, cfg.tail_p, 0.8 * spec.L).R;
  }
  pp.T = tail_impulse(out.field, pp.R);
  pp.T6 = higher_moment(out.field, 6);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::none: return "none";
    case PerturbationKind::translate: return "translate";
    case PerturbationKind::boundary_wobble: return "boundary-wobble";
    case PerturbationKind::additive_bump: return "additive-bump";
    case PerturbationKind::amplitude_scale: return "amplitude-scale";
  }
  return "unknown";
}

PerturbationKind perturbation_kind_from_string(const std::string& name) {
  if (name == "none") return PerturbationKind::none;
  if (name == "translate") return PerturbationKind::translate;
  if (name == "boundary-wobble") return PerturbationKind::boundary_wobble;
  if (name == "additive-bump") return PerturbationKind::additive_bump;
  if (name == "amplitude-scale") return PerturbationKind::amplitude_scale;
  throw std::invalid_argument("unknown perturbation kind '" + name + "'");
}

PerturbationSize measure_perturbation(const ScalarField& omega0, const ScalarField& zeta, double p) {
  const ScalarField diff = omega0 - zeta;
  PerturbationSize sz;
  sz.p = p;
  sz.eps1 = lp_norm(diff, 1.0);
  sz.epsJ = angular_impulse(abs(diff));
  sz.epsP = lp_norm(diff, p);
  return sz;
}

Perturbed perturb(const Profile& base, const PerturbationSpec& spec, const std::vector<double>& p_list) {
  const GridSpec& g = base.field.spec();
  const RadialProfile& f = base.radial;
  Perturbed out;
  out.omega0 = ScalarField(g);

  switch (spec.kind) {
    case PerturbationKind::none:
      out.omega0 = base.field;
      break;
    case PerturbationKind::translate:
      for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
          out.omega0(i, j) = f(std::hypot(g.center(i) - spec.dx, g.center(j) - spec.dy));
        }
      }
      break;
    case PerturbationKind::boundary_wobble: {
      if (!(std::abs(spec.amplitude) < 1.0)) throw std::invalid_argument("wobble amplitude must satisfy |a| < 1");
      if (spec.seed != 0) {
        std::mt19937_64 rng(spec.seed);
        out.phase = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
      }
      for (int j = 0; j < g.n; ++j) {
        const double y = g.center(j);
        for (int i = 0; i < g.n; ++i) {
          const double x = g.center(i);
          const double theta = std::atan2(y, x);
          const double scale = 1.0 + spec.amplitude * std::cos(spec.mode * (theta - out.phase));
          out.omega0(i, j) = f(std::hypot(x, y) / scale);
        }
      }
      break;
    }
    case PerturbationKind::additive_bump: {
      out.omega0 = base.field;
      const ScalarField bump = disk_indicator(g, spec.bump_radius, spec.bump_x, spec.bump_y);
      out.omega0 += spec.bump_height * bump;
      break;
    }
    case PerturbationKind::amplitude_scale:
      out.omega0 = spec.factor * base.field;
      break;
  }

  double clipped = 0.0;
  for (double& v : out.omega0.values()) {
    if (v < 0.0) {
      clipped -= v;
      v = 0.0;
    } else if (v < kZeroClamp) {
      v = 0.0;
    }
  }
  out.clipped_mass = clipped * g.cell_area();

  const double J = angular_impulse(out.omega0);
  if (!std::isfinite(J)) throw std::runtime_error("perturbation produced non-finite angular impulse");
  const double bm = boundary_mass_fraction(out.omega0);
  if (bm > kBoundaryRefusal) {
    std::ostringstream msg;
    msg << "perturbation pushes mass outside the safe zone (boundary mass fraction " << bm << ")";
    throw std::runtime_error(msg.str());
  }
  for (double p : p_list) out.sizes.push_back(measure_perturbation(out.omega0, base.field, p));
  return out;
}

}  // namespace vsl
