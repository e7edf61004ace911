#include "vsl/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace vsl {

namespace {

double clamp_small(double v) { return std::abs(v) < kZeroClamp ? 0.0 : v; }

}  // namespace

// ---------------------------------------------------------------------------

DistributionFunction::DistributionFunction(std::vector<double> descending_values, double cell_area)
    : sorted_(std::move(descending_values)), cell_area_(cell_area) {
  while (!sorted_.empty() && !(sorted_.back() > 0.0)) sorted_.pop_back();
  for (std::size_t k = 0; k < sorted_.size();) {
    const double v = sorted_[k];
    thresholds_.push_back(v);
    measures_.push_back(static_cast<double>(k) * cell_area_);  // cells strictly above v
    while (k < sorted_.size() && sorted_[k] == v) ++k;
  }
}

std::size_t DistributionFunction::count_above(double alpha) const {
  // sorted_ is descending: count of leading entries > alpha
  auto it = std::partition_point(sorted_.begin(), sorted_.end(), [alpha](double v) { return v > alpha; });
  return static_cast<std::size_t>(it - sorted_.begin());
}

double DistributionFunction::measure_above(double alpha) const {
  return static_cast<double>(count_above(alpha)) * cell_area_;
}

DistributionFunction distribution(const ScalarField& f) {
  std::vector<double> values;
  values.reserve(f.spec().size());
  for (double v : f.values()) {
    const double c = clamp_small(v);
    if (c > 0.0) values.push_back(c);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return DistributionFunction(std::move(values), f.spec().cell_area());
}

void write_distribution_csv(std::ostream& out, const DistributionFunction& d) {
  out << "alpha,measure\n" << std::setprecision(17);
  for (std::size_t k = 0; k < d.thresholds().size(); ++k) {
    out << d.thresholds()[k] << ',' << d.measures()[k] << '\n';
  }
}

// ---------------------------------------------------------------------------

std::shared_ptr<const std::vector<std::uint32_t>> radial_order(const GridSpec& spec) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const std::vector<std::uint32_t>>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(spec.n); it != cache.end()) return it->second;
  }
  const int n = spec.n;
  struct Key {
    std::int64_t r2;
    double angle;
    std::uint32_t index;
  };
  std::vector<Key> keys;
  keys.reserve(spec.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // angle from the integer offsets so the order does not depend on L
      const double a = static_cast<double>(2 * i - n + 1);
      const double b = static_cast<double>(2 * j - n + 1);
      keys.push_back({spec.radius_key(i, j), std::atan2(b, a), static_cast<std::uint32_t>(j * n + i)});
    }
  }
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    if (x.r2 != y.r2) return x.r2 < y.r2;
    if (x.angle != y.angle) return x.angle < y.angle;
    return x.index < y.index;
  });
  auto order = std::make_shared<std::vector<std::uint32_t>>(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) (*order)[k] = keys[k].index;

  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(n, std::move(order));
  return it->second;
}

ScalarField rearrange_with_order(const ScalarField& f, std::span<const std::uint32_t> order) {
  if (order.size() != f.spec().size()) throw std::invalid_argument("rearrange_with_order: order size mismatch");
  std::vector<double> sorted(f.values().begin(), f.values().end());
  for (double& v : sorted) v = clamp_small(std::abs(v));
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  ScalarField out(f.spec());
  auto dst = out.values();
  for (std::size_t k = 0; k < sorted.size(); ++k) dst[order[k]] = sorted[k];
  return out;
}

ScalarField symmetric_rearrangement(const ScalarField& f) {
  const auto order = radial_order(f.spec());
  return rearrange_with_order(f, *order);
}

ScalarField cutoff(const ScalarField& f, double M) {
  if (!(M >= 0.0)) throw std::invalid_argument("cutoff: M must be nonnegative");
  const double cap = M + 1.0;
  ScalarField out = f;
  for (double& v : out.values()) v = std::min(v, cap);
  return out;
}

// ---------------------------------------------------------------------------

double AnnulusStack::l1() const {
  double s = 0.0;
  for (const auto& a : annuli) s += a.amplitude * kPi * (a.outer * a.outer - a.inner * a.inner);
  return s;
}

double AnnulusStack::impulse() const {
  double s = 0.0;
  for (const auto& a : annuli) {
    s += a.amplitude * 0.5 * kPi * (std::pow(a.outer, 4) - std::pow(a.inner, 4));
  }
  return s;
}

AnnulusStack levelset_simple_function(const ScalarField& f, int n) {
  if (n < 1) throw std::invalid_argument("levelset_simple_function: n must be >= 1");
  const double sup = sup_norm(f);
  if (sup > 1.0 + 1e-12) throw std::invalid_argument("levelset_simple_function: rescale so that ||f||_inf <= 1");
  for (double v : f.values()) {
    if (v < 0.0) throw std::invalid_argument("levelset_simple_function: f must be nonnegative");
  }
  const double tol = 8.0 * f.spec().h() * sup;
  if (lp_norm(f - symmetric_rearrangement(f), 1.0) > tol) {
    throw std::invalid_argument("levelset_simple_function: input is not radial non-increasing");
  }

  const DistributionFunction d = distribution(f);
  AnnulusStack stack;
  stack.levels = n;
  stack.radii.resize(n);
  for (int k = 1; k <= n; ++k) {
    stack.radii[k - 1] = std::sqrt(d.measure_above(static_cast<double>(k) / n) / kPi);
  }
  for (int k = 1; k <= n - 1; ++k) {
    const double outer = stack.radii[k - 1];
    const double inner = stack.radii[k];
    if (outer > inner) stack.annuli.push_back({inner, outer, static_cast<double>(k) / n});
  }
  return stack;
}

FlattenedAnnulus flatten_annulus(double s_in, double s_out, double amplitude) {
  if (!(s_in >= 0.0) || !(s_out >= s_in)) throw std::invalid_argument("flatten_annulus: need 0 <= s_in <= s_out");
  if (!(amplitude > 0.0) || amplitude > 1.0) throw std::invalid_argument("flatten_annulus: amplitude must lie in (0, 1]");
  const double width2 = (s_out - s_in) * (s_out + s_in);
  FlattenedAnnulus r;
  r.radius = std::sqrt(s_in * s_in + amplitude * width2);
  r.deficit = 0.5 * kPi * amplitude * (1.0 - amplitude) * width2 * width2;
  return r;
}

// ---------------------------------------------------------------------------

double discretization_slack(const ScalarField& f) {
  return 32.0 * f.spec().h() * (sup_norm(f) + angular_impulse(f));
}

InequalityCheck rearrangement_deficit_check(const ScalarField& f) {
  const ScalarField star = symmetric_rearrangement(f);
  const double l1 = lp_norm(f - star, 1.0);
  InequalityCheck c;
  c.lhs = l1 * l1;
  c.slack = discretization_slack(f);
  c.rhs = 4.0 * kPi * sup_norm(f) * (angular_impulse(f) - angular_impulse(star)) + c.slack;
  c.boundary_mass = boundary_mass_fraction(f);
  c.refused = c.boundary_mass > kBoundaryRefusal;
  c.ok = !c.refused && c.lhs <= c.rhs;
  return c;
}

InequalityCheck nonexpansivity_check(const ScalarField& g, const ScalarField& h) {
  require_same_grid(g, h);
  InequalityCheck c;
  c.lhs = lp_norm(symmetric_rearrangement(g) - symmetric_rearrangement(h), 1.0);
  c.slack = std::max(discretization_slack(g), discretization_slack(h));
  c.rhs = lp_norm(g - h, 1.0) + c.slack;
  c.boundary_mass = std::max(boundary_mass_fraction(g), boundary_mass_fraction(h));
  c.refused = c.boundary_mass > kBoundaryRefusal;
  c.ok = !c.refused && c.lhs <= c.rhs;
  return c;
}

}  // namespace vsl
