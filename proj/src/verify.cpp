#include "vsl/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vsl/bounds.hpp"
#include "vsl/euler.hpp"
#include "vsl/generators.hpp"
#include "vsl/profiles.hpp"
#include "vsl/rearrange.hpp"

namespace vsl {

VerifyLevel verify_level_from_string(const std::string& name) {
  if (name == "fast") return VerifyLevel::fast;
  if (name == "full") return VerifyLevel::full;
  throw std::invalid_argument("unknown verify level '" + name + "' (expected fast or full)");
}

bool VerifySummary::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::uint64_t fnv1a_hash(const ScalarField& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : f.values()) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

ScalarField golden_input_field() {
  const GridSpec spec(64, 2.0);
  ScalarField f = disk_indicator(spec, 0.7, 0.3, 0.2);
  f += 0.5 * disk_indicator(spec, 0.5, -0.8, 0.4);
  return f;
}

bool golden_rearrangement_matches(std::span<const std::uint32_t> order) {
  return fnv1a_hash(rearrange_with_order(golden_input_field(), order)) == kGoldenRearrangementHash;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

struct Sizes {
  int property_n;
  int property_count;
  int solver_n;
  double solver_t;
};

CheckResult check_closed_forms() {
  const GridSpec spec(512, 4.0);
  const double tol = 8.0 * spec.h() * 2.0 * kPi;  // 8 h times the unit-circle perimeter
  const double J = angular_impulse(disk_indicator(spec, 1.0));
  const double J2 = angular_impulse(disk_indicator(spec, 2.0));
  const bool ok = std::abs(J - kPi / 2.0) <= tol && std::abs(J2 - 8.0 * kPi) <= 8.0 * spec.h() * 4.0 * kPi * 4.0;
  return {"closed-form impulses", ok, "J(1_D) = " + fmt(J) + ", J(1_B2) = " + fmt(J2)};
}

CheckResult check_rearrangement(const Sizes& sz, Rng& rng) {
  const GridSpec spec(sz.property_n, 4.0);
  int failures = 0;
  std::string first;
  for (int t = 0; t < sz.property_count; ++t) {
    const ScalarField f = random_field(spec, rng);
    const ScalarField s = symmetric_rearrangement(f);
    const DistributionFunction df = distribution(f);
    const DistributionFunction ds = distribution(s);
    const double sup = sup_norm(f);
    bool ok = true;
    for (int k = 0; k < 64 && ok; ++k) {
      const double a = sup * k / 64.0;
      ok = df.count_above(a) == ds.count_above(a);
    }
    for (double q : {1.0, 2.0, 4.0}) {
      const double a = lp_norm(f, q);
      ok = ok && std::abs(lp_norm(s, q) - a) <= 1e-12 * a;
    }
    ok = ok && angular_impulse(s) <= angular_impulse(f) + discretization_slack(f);
    ok = ok && symmetric_rearrangement(s) == s;
    const double M = 0.5 * sup;
    ok = ok && symmetric_rearrangement(cutoff(f, M)) == cutoff(s, M);
    if (!ok) {
      ++failures;
      if (first.empty()) first = " (first failure at draw " + std::to_string(t) + ")";
    }
  }
  return {"rearrangement properties", failures == 0,
          std::to_string(sz.property_count) + " fields, " + std::to_string(failures) + " failures" + first};
}

CheckResult check_nonexpansivity(const Sizes& sz, Rng& rng) {
  const GridSpec spec(sz.property_n, 4.0);
  int failures = 0;
  for (int t = 0; t < sz.property_count; ++t) {
    const InequalityCheck c = nonexpansivity_check(random_field(spec, rng), random_field(spec, rng));
    failures += c.ok ? 0 : 1;
  }
  return {"nonexpansivity", failures == 0, std::to_string(failures) + " violations"};
}

CheckResult check_deficit(const Sizes& sz, Rng& rng) {
  const GridSpec spec(sz.property_n, 4.0);
  int failures = 0;
  for (int t = 0; t < sz.property_count; ++t) failures += rearrangement_deficit_check(random_field(spec, rng)).ok ? 0 : 1;
  const InequalityCheck disk = rearrangement_deficit_check(disk_indicator(GridSpec(512, 4.0), 1.0, 2.0, 0.0));
  const bool analytic = disk.ok && std::abs(disk.lhs - 4.0 * kPi * kPi) < 0.05 * 4.0 * kPi * kPi;
  return {"rearrangement deficit", failures == 0 && analytic,
          std::to_string(failures) + " violations; off-center disk lhs " + fmt(disk.lhs) + " rhs " + fmt(disk.rhs)};
}

CheckResult check_flatten(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const int n = std::uniform_int_distribution<int>(2, 64)(rng);
    const int k = std::uniform_int_distribution<int>(1, n)(rng);
    const long double amp = static_cast<long double>(k) / n;
    const FlattenedAnnulus r = flatten_annulus(a, b, static_cast<double>(k) / n);
    const long double la = a, lb = b;
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double w2 = (lb - la) * (lb + la);
    const long double closed = pi * amp / 2 * (1 - amp) * w2 * w2;
    // impulse drop of the equal-mass unit ring, from J of disks
    const long double c2 = la * la + amp * w2;
    const long double before = amp * pi / 2 * (lb * lb * lb * lb - la * la * la * la);
    const long double drop = before - pi / 2 * (c2 * c2 - la * la * la * la);
    worst = std::max(worst, static_cast<double>(std::abs(closed - r.deficit) / std::max(closed, 1e-300L)));
    worst = std::max(worst, static_cast<double>(std::abs(drop - closed) / std::max(before, 1e-300L)));
    worst = std::max(worst, static_cast<double>(std::abs(static_cast<long double>(r.radius) - std::sqrt(c2)) / std::max(lb, 1e-300L)));
  }
  return {"flattened annulus identity", worst <= 1e-12, "max relative error " + fmt(worst)};
}

CheckResult check_minimality(const Sizes& sz, Rng& rng) {
  const GridSpec spec(sz.property_n, 4.0);
  int failures = 0;
  double closest = kInf;
  for (int t = 0; t < sz.property_count / 2; ++t) {
    const ScalarField xi = random_unit_mass_field(spec, rng);
    const double slack = discretization_slack(xi);
    const double J = angular_impulse(xi);
    closest = std::min(closest, J - kPi / 2.0);
    failures += J >= kPi / 2.0 - slack ? 0 : 1;
  }
  return {"impulse minimality", failures == 0,
          std::to_string(failures) + " violations; min J - pi/2 = " + fmt(closest)};
}

CheckResult check_golden() {
  const auto order = radial_order(golden_input_field().spec());
  const std::uint64_t h = fnv1a_hash(symmetric_rearrangement(golden_input_field()));
  std::ostringstream s;
  s << "hash 0x" << std::hex << h;
  return {"rearrangement golden hash", golden_rearrangement_matches(*order), s.str()};
}

CheckResult check_bound_regression() {
  // recomputed here term by term in long double
  const long double e = 0.01L, M = 1.0L, a = 3.14159265358979323846264338327950288L, pi = a;
  const long double L1 = 2 * e + 2 * std::sqrt(M * a) * std::sqrt(e) +
                         std::sqrt(4 * pi * (M + 1)) * std::sqrt(2 * e + 2 * e + e * e / pi + a * e / pi);
  ProfileParams pp{1.0, kPi, 1.0, 0.0, 0.0};
  PerturbationSize sz;
  sz.eps1 = 0.01;
  sz.epsJ = 0.01;
  sz.epsP = 0.01;
  sz.p = 2.0;
  const double got = bound_L1(pp, sz);
  const double J = bound_J(pp, sz, got);
  const bool ok = std::abs(got - static_cast<double>(L1)) <= 1e-10 * got &&
                  std::abs(J - static_cast<double>(2 * L1 + e)) <= 1e-10 * J;
  return {"bound regression", ok, "bound_L1 = " + fmt(got) + ", bound_J = " + fmt(J)};
}

CheckResult check_conservation(const Sizes& sz) {
  const GridSpec spec(sz.solver_n, 6.0);
  SolverConfig cfg;
  cfg.t_end = sz.solver_t;
  FlowState s = FlowState::initial(sample_profile(RadialProfile::gaussian(), spec));
  evolve(s, cfg);
  const ConservationRecord r = conservation_report(s);
  const bool ok = r.drift_L1 <= 1e-4 && r.drift_L2 <= 1e-4 && r.drift_J <= 1e-4 && r.dist_drift <= 1e-3;
  return {"gaussian conservation", ok,
          "drifts L1 " + fmt(r.drift_L1) + " L2 " + fmt(r.drift_L2) + " J " + fmt(r.drift_J) + " dist " +
              fmt(r.dist_drift)};
}

CheckResult check_stationarity(const Sizes& sz) {
  const GridSpec spec(sz.solver_n, 4.0);
  SolverConfig cfg;
  cfg.t_end = sz.solver_t;
  cfg.poisson = PoissonMode::free_space;
  const ScalarField zeta = sample_profile(RadialProfile::mollified_patch(1.0, 3.0 * spec.h()), spec);
  FlowState s = FlowState::initial(zeta);
  double worst = 0.0;
  evolve(s, cfg, [&](const FlowState& st, const StepInfo&) { worst = std::max(worst, jp_norm(st.omega - zeta, 2.0)); });
  return {"mollified patch stationarity", worst <= 1e-2, "sup J2 deviation " + fmt(worst)};
}

}  // namespace

VerifySummary verify_suite(VerifyLevel level, std::ostream* log) {
  const Sizes sz = level == VerifyLevel::fast ? Sizes{128, 100, 128, 2.0} : Sizes{256, 1000, 512, 10.0};
  Rng rng(20240611);
  std::vector<std::function<CheckResult()>> checks{
      [] { return check_closed_forms(); },
      [&] { return check_rearrangement(sz, rng); },
      [&] { return check_nonexpansivity(sz, rng); },
      [&] { return check_deficit(sz, rng); },
      [&] { return check_flatten(rng); },
      [&] { return check_minimality(sz, rng); },
      [] { return check_golden(); },
      [] { return check_bound_regression(); },
      [&] { return check_conservation(sz); },
      [&] { return check_stationarity(sz); },
  };
  VerifySummary summary;
  for (const auto& run : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {"(exception)", false, e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) {
      *log << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << std::fixed << std::setprecision(1)
           << secs << " s]\n";
      log->unsetf(std::ios::floatfield);
      log->flush();
    }
    summary.checks.push_back(std::move(r));
  }
  return summary;
}

}  // namespace vsl
