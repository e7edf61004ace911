#include "vsl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace vsl {

namespace {

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

}  // namespace

ScalarField random_field(const GridSpec& spec, Rng& rng) {
  const double reach = 0.7 * spec.L;
  ScalarField f(spec);
  const int features = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int q = 0; q < features; ++q) {
    const int type = std::uniform_int_distribution<int>(0, 3)(rng);
    const double size = uniform(rng, 0.15, 0.35) * reach;
    const double cr = uniform(rng, 0.0, reach - size);
    const double ca = uniform(rng, 0.0, 2.0 * kPi);
    const double cx = cr * std::cos(ca);
    const double cy = cr * std::sin(ca);
    const double amp = uniform(rng, 0.1, 2.0);
    const double inner = uniform(rng, 0.2, 0.8) * size;
    std::uniform_real_distribution<double> noise(0.0, amp);
    for (int j = 0; j < spec.n; ++j) {
      const double dy = spec.center(j) - cy;
      for (int i = 0; i < spec.n; ++i) {
        const double dx = spec.center(i) - cx;
        const double r = std::hypot(dx, dy);
        double v = 0.0;
        switch (type) {
          case 0: v = r < size ? amp : 0.0; break;
          case 1: v = (r < size && r >= inner) ? amp : 0.0; break;
          case 2: v = r < size ? amp * std::exp(-4.0 * (r / size) * (r / size)) : 0.0; break;
          default: v = (std::abs(dx) < size / 1.5 && std::abs(dy) < size / 1.5) ? noise(rng) : 0.0; break;
        }
        f(i, j) += v;
      }
    }
  }
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
    const double levels = std::uniform_int_distribution<int>(2, 6)(rng);
    for (double& v : f.values()) v = std::round(v * levels) / levels;
  }
  return f;
}

ScalarField clamp_to_mass(const ScalarField& g, double mass) {
  std::size_t support = 0;
  for (double v : g.values()) {
    if (v < 0.0) throw std::invalid_argument("clamp_to_mass: g must be nonnegative");
    support += v > 0.0 ? 1 : 0;
  }
  if (mass > static_cast<double>(support) * g.spec().cell_area()) {
    throw std::invalid_argument("clamp_to_mass: support too small for the requested mass");
  }
  // h² Σ min(1, λ v) is piecewise linear in λ: with the k largest values
  // saturated it equals h² (k + λ Σ_{rest} v).
  std::vector<double> v(g.values().begin(), g.values().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  std::vector<double> suffix(v.size() + 1, 0.0);
  for (std::size_t k = v.size(); k-- > 0;) suffix[k] = suffix[k + 1] + v[k];
  const double target = mass / g.spec().cell_area();
  double lambda = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0)) break;
    const double cand = (target - static_cast<double>(k)) / suffix[k];
    if (cand * v[k] <= 1.0 && (k == 0 || cand * v[k - 1] >= 1.0)) {
      lambda = cand;
      break;
    }
  }
  if (!(lambda > 0.0)) throw std::runtime_error("clamp_to_mass: no scale factor found");
  ScalarField out = g;
  for (double& x : out.values()) x = std::min(1.0, lambda * x);
  return out;
}

ScalarField random_unit_mass_field(const GridSpec& spec, Rng& rng) {
  for (;;) {
    ScalarField g = random_field(spec, rng);
    std::size_t support = 0;
    for (double v : g.values()) support += v > 0.0 ? 1 : 0;
    if (static_cast<double>(support) * spec.cell_area() > 1.05 * kPi) return clamp_to_mass(g, kPi);
  }
}

}  // namespace vsl
