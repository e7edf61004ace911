#include "vsl/field.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vsl/detail/sum.hpp"

namespace vsl {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

template <typename Weight>
double weighted_sum(const ScalarField& f, Weight&& weight) {
  const GridSpec& g = f.spec();
  detail::CompensatedSum acc;
  const auto v = f.values();
  for (int j = 0; j < g.n; ++j) {
    const double y = g.center(j);
    for (int i = 0; i < g.n; ++i) {
      const double x = g.center(i);
      acc += weight(v[static_cast<std::size_t>(j) * g.n + i], x, y);
    }
  }
  return acc.value() * g.cell_area();
}

}  // namespace

GridSpec::GridSpec(int cells_per_side, double half_width) : n(cells_per_side), L(half_width) {
  if (n < 16 || !is_power_of_two(n)) {
    throw std::invalid_argument("GridSpec: n must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("GridSpec: L must be positive and finite");
  }
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const GridSpec& spec, double fill) : spec_(spec), values_(spec.size(), fill) {}

ScalarField::ScalarField(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) {
    throw std::invalid_argument("ScalarField: value count does not match grid");
  }
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.spec() == b.spec())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

ScalarField abs(const ScalarField& f) {
  ScalarField out = f;
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::sharp_patch: return "sharp-patch";
    case ProfileKind::mollified_patch: return "mollified-patch";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::piecewise_linear: return "piecewise-linear";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "sharp-patch") return ProfileKind::sharp_patch;
  if (name == "mollified-patch") return ProfileKind::mollified_patch;
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "piecewise-linear") return ProfileKind::piecewise_linear;
  throw std::invalid_argument("unknown profile kind '" + name + "'");
}

RadialProfile RadialProfile::sharp_patch(double radius, double amplitude) {
  if (!(radius > 0.0) || !(amplitude >= 0.0)) throw std::invalid_argument("sharp_patch: need radius > 0, amplitude >= 0");
  RadialProfile p;
  p.kind_ = ProfileKind::sharp_patch;
  p.radius_ = radius;
  p.amplitude_ = amplitude;
  return p;
}

RadialProfile RadialProfile::mollified_patch(double radius, double ramp_width, double amplitude) {
  if (!(radius > 0.0) || !(ramp_width > 0.0) || !(amplitude >= 0.0)) {
    throw std::invalid_argument("mollified_patch: need radius > 0, ramp width > 0, amplitude >= 0");
  }
  RadialProfile p;
  p.kind_ = ProfileKind::mollified_patch;
  p.radius_ = radius;
  p.width_ = ramp_width;
  p.amplitude_ = amplitude;
  return p;
}

RadialProfile RadialProfile::gaussian(double amplitude, double width) {
  if (!(width > 0.0) || !(amplitude >= 0.0)) throw std::invalid_argument("gaussian: need width > 0, amplitude >= 0");
  RadialProfile p;
  p.kind_ = ProfileKind::gaussian;
  p.amplitude_ = amplitude;
  p.width_ = width;
  return p;
}

RadialProfile RadialProfile::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("piecewise_linear: need at least two knots");
  if (knots.back().second != 0.0) throw std::invalid_argument("piecewise_linear: last knot value must be 0");
  if (knots.front().first != 0.0) throw std::invalid_argument("piecewise_linear: first knot must sit at r = 0");
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!(knots[k].second >= 0.0)) throw std::invalid_argument("piecewise_linear: values must be nonnegative");
    if (k > 0) {
      if (!(knots[k].first > knots[k - 1].first)) throw std::invalid_argument("piecewise_linear: radii must increase");
      if (knots[k].second > knots[k - 1].second) throw std::invalid_argument("piecewise_linear: values must not increase");
    }
  }
  RadialProfile p;
  p.kind_ = ProfileKind::piecewise_linear;
  p.amplitude_ = knots.front().second;
  p.radius_ = knots.back().first;
  p.knots_ = std::move(knots);
  return p;
}

RadialProfile RadialProfile::cone(double radius, double amplitude) {
  return piecewise_linear({{0.0, amplitude}, {radius, 0.0}});
}

double RadialProfile::operator()(double r) const {
  switch (kind_) {
    case ProfileKind::sharp_patch:
      return r < radius_ ? amplitude_ : 0.0;
    case ProfileKind::mollified_patch:
      return amplitude_ * 0.5 * (1.0 - std::tanh((r - radius_) / width_));
    case ProfileKind::gaussian: {
      const double s = r / width_;
      return amplitude_ * std::exp(-s * s);
    }
    case ProfileKind::piecewise_linear: {
      if (r >= knots_.back().first) return 0.0;
      auto it = std::upper_bound(knots_.begin(), knots_.end(), r,
                                 [](double value, const auto& knot) { return value < knot.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double t = (r - lo.first) / (hi.first - lo.first);
      return lo.second + t * (hi.second - lo.second);
    }
  }
  return 0.0;
}

std::optional<double> RadialProfile::support_radius() const {
  switch (kind_) {
    case ProfileKind::sharp_patch:
      return radius_;
    case ProfileKind::piecewise_linear: {
      // first knot where the profile reaches zero
      for (const auto& [r, v] : knots_) {
        if (v == 0.0) return r;
      }
      return knots_.back().first;
    }
    default:
      return std::nullopt;
  }
}

double RadialProfile::effective_extent() const {
  switch (kind_) {
    case ProfileKind::sharp_patch: return radius_;
    case ProfileKind::mollified_patch: return radius_ + 360.0 * width_;
    case ProfileKind::gaussian: return 27.0 * width_;
    case ProfileKind::piecewise_linear: return knots_.back().first;
  }
  return 0.0;
}

double RadialProfile::radial_moment(int k, double r_from, double r_to) const {
  if (k < 0) throw std::invalid_argument("radial_moment: k must be nonnegative");
  const double a = std::max(0.0, r_from);
  const double b = std::min(r_to, effective_extent());
  if (!(b > a)) return 0.0;

  std::vector<double> cuts{a, b};
  auto add_cut = [&](double c) {
    if (c > a && c < b) cuts.push_back(c);
  };
  switch (kind_) {
    case ProfileKind::piecewise_linear:
      for (const auto& knot : knots_) add_cut(knot.first);
      break;
    case ProfileKind::mollified_patch:
      for (double z : {-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0, 60.0}) add_cut(radius_ + z * width_);
      break;
    case ProfileKind::gaussian:
      for (double z = 0.5; z < 27.0; z += 0.5) add_cut(z * width_);
      break;
    case ProfileKind::sharp_patch:
      break;
  }
  std::sort(cuts.begin(), cuts.end());

  auto integrand = [&](double r) { return std::pow(r, k + 1) * (*this)(r); };
  detail::CompensatedSum acc;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[s], cuts[s + 1], 8, 1e-12);
  }
  return 2.0 * kPi * acc.value();
}

// ---------------------------------------------------------------------------

double quadrature(const ScalarField& f) {
  return weighted_sum(f, [](double v, double, double) { return v; });
}

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return sup_norm(f);
  if (p == 1.0) return weighted_sum(f, [](double v, double, double) { return std::abs(v); });
  if (p == 2.0) return std::sqrt(weighted_sum(f, [](double v, double, double) { return v * v; }));
  // scale by the sup so large p does not overflow
  const double m = sup_norm(f);
  if (m == 0.0) return 0.0;
  const double s = weighted_sum(f, [&](double v, double, double) { return std::pow(std::abs(v) / m, p); });
  return m * std::pow(s, 1.0 / p);
}

double angular_impulse(const ScalarField& f) {
  return weighted_sum(f, [](double v, double x, double y) { return v * (x * x + y * y); });
}

double jp_norm(const ScalarField& g, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("jp_norm: p must lie in [1, inf)");
  return lp_norm(g, p) + weighted_sum(g, [](double v, double x, double y) { return std::abs(v) * (x * x + y * y); });
}

double higher_moment(const ScalarField& f, int k) {
  if (k <= 0 || k % 2 != 0) throw std::invalid_argument("higher_moment: k must be a positive even integer");
  const int half = k / 2;
  return weighted_sum(f, [half](double v, double x, double y) {
    const double r2 = x * x + y * y;
    double w = 1.0;
    for (int q = 0; q < half; ++q) w *= r2;
    return v * w;
  });
}

double tail_impulse(const ScalarField& f, double R) {
  const double R2 = R * R;
  return weighted_sum(f, [R2](double v, double x, double y) {
    const double r2 = x * x + y * y;
    return r2 > R2 ? std::abs(v) * r2 : 0.0;
  });
}

double patch_conserved_quantity(const ScalarField& f) {
  return weighted_sum(f, [](double v, double x, double y) {
    const double r2 = x * x + y * y;
    const bool in_patch = v > 0.5;
    const bool in_disk = r2 < 1.0;
    return in_patch != in_disk ? std::abs(r2 - 1.0) : 0.0;
  });
}

double patch_conserved_quantity_linear(const ScalarField& f) {
  return weighted_sum(f, [](double v, double x, double y) {
    const double r2 = x * x + y * y;
    const double disk = r2 < 1.0 ? 1.0 : 0.0;
    return (v - disk) * (r2 - 1.0);
  });
}

double boundary_mass_fraction(const ScalarField& f) {
  const double edge = 0.9 * f.spec().L;
  const double outer = weighted_sum(f, [edge](double v, double x, double y) {
    return (std::abs(x) > edge || std::abs(y) > edge) ? std::abs(v) : 0.0;
  });
  const double total = lp_norm(f, 1.0);
  return total > 0.0 ? outer / total : 0.0;
}

bool support_overflows(const RadialProfile& profile, const GridSpec& spec) {
  return profile(0.9 * spec.L) > 1e-8 * profile.sup();
}

ScalarField sample_profile(const RadialProfile& profile, const GridSpec& spec) {
  if (support_overflows(profile, spec)) {
    std::cerr << "warning: " << to_string(profile.kind()) << " profile overflows the domain (f(0.9L) = "
              << profile(0.9 * spec.L) << ")\n";
  }
  ScalarField out(spec);
  for (int j = 0; j < spec.n; ++j) {
    const double y = spec.center(j);
    for (int i = 0; i < spec.n; ++i) {
      const double x = spec.center(i);
      const double v = profile(std::sqrt(x * x + y * y));
      out(i, j) = v < kZeroClamp ? 0.0 : v;
    }
  }
  return out;
}

ScalarField disk_indicator(const GridSpec& spec, double radius, double cx, double cy) {
  ScalarField out(spec);
  const double r2 = radius * radius;
  for (int j = 0; j < spec.n; ++j) {
    const double dy = spec.center(j) - cy;
    for (int i = 0; i < spec.n; ++i) {
      const double dx = spec.center(i) - cx;
      out(i, j) = (dx * dx + dy * dy < r2) ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace vsl
