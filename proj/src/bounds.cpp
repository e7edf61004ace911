#include "vsl/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vsl {

namespace {

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and nonnegative");
  }
}

}  // namespace

void ProfileParams::validate() const {
  require_nonnegative(M, "M");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(R, "R");
  require_nonnegative(T, "T");
  require_nonnegative(T6, "T6");
}

void PerturbationSize::validate() const {
  if (eps1) require_nonnegative(*eps1, "eps1");
  require_nonnegative(epsJ, "epsJ");
  require_nonnegative(epsP, "epsP");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be finite and >= 1");
}

double PerturbationSize::eps1_or_majorant() const { return eps1 ? *eps1 : kPi * epsP + epsJ; }

double bound_L1(const ProfileParams& pp, const PerturbationSize& sz) {
  pp.validate();
  sz.validate();
  const double e1 = sz.eps1_or_majorant();
  const double M = pp.M;
  const double a = pp.alpha;
  const double inner = 2.0 * sz.epsJ + 2.0 * pp.R * pp.R * e1 + 2.0 * pp.T + e1 * e1 / kPi + a * e1 / kPi;
  return 2.0 * e1 + 2.0 * std::sqrt(M * a) * std::sqrt(e1) + std::sqrt(4.0 * kPi * (M + 1.0)) * std::sqrt(inner);
}

double bound_J(const ProfileParams& pp, const PerturbationSize& sz, double L1_bound) {
  pp.validate();
  sz.validate();
  require_nonnegative(L1_bound, "L1 bound");
  return 2.0 * pp.R * pp.R * L1_bound + sz.epsJ + 2.0 * pp.T;
}

double bound_Lp(const ProfileParams& pp, const PerturbationSize& sz, double L1_bound) {
  pp.validate();
  sz.validate();
  require_nonnegative(L1_bound, "L1 bound");
  const double p = sz.p;
  if (p > 16.0) throw std::invalid_argument("bound_Lp: p > 16 overflows the 2^{3p} factor");
  const double e1 = sz.eps1_or_majorant();
  const double sum = std::pow(pp.M + 1.0, p) * L1_bound + std::pow(2.0, 3.0 * p) * std::pow(pp.M, p) * e1 +
                     std::pow(2.0, 2.0 * p) * std::pow(sz.epsP, p);
  return std::pow(sum, 1.0 / p);
}

BoundSet evaluate_bounds(const ProfileParams& pp, const PerturbationSize& sz) {
  BoundSet b;
  b.L1 = bound_L1(pp, sz);
  b.J = bound_J(pp, sz, b.L1);
  b.Lp = bound_Lp(pp, sz, b.L1);
  b.Jp_total = b.Lp + b.J;
  return b;
}

double bound_Jp_total(const ProfileParams& pp, const PerturbationSize& sz) { return evaluate_bounds(pp, sz).Jp_total; }

double l1_majorant_j2(const ScalarField& g) { return kPi * jp_norm(g, 2.0); }

double l1_majorant_jp(const ScalarField& g, double p) {
  return kPi * lp_norm(g, p) + angular_impulse(abs(g));
}

TailRadius tail_radius_for(const RadialProfile& zeta, double eps, double p, double max_R) {
  if (!(eps > 0.0)) throw std::invalid_argument("tail_radius_for: eps must be positive");
  if (!(p >= 1.0)) throw std::invalid_argument("tail_radius_for: p must be >= 1");
  if (!(max_R > 0.0)) throw std::invalid_argument("tail_radius_for: max_R must be positive");

  auto satisfied = [&](const TailRadius& t) {
    return std::pow(t.tail, 1.0 / (2.0 * p)) + t.tail <= eps && t.sixth_tail <= eps * eps;
  };
  auto evaluate = [&](double R) { return TailRadius{R, zeta.tail_impulse(R), zeta.tail_sixth_moment(R)}; };

  std::optional<TailRadius> best;
  if (auto s = zeta.support_radius(); s && *s <= max_R) best = evaluate(*s);

  for (double R = 1.0; R <= max_R; R *= 1.25) {
    if (best && R >= best->R) break;
    const TailRadius t = evaluate(R);
    if (satisfied(t)) {
      best = t;
      break;
    }
  }
  if (best && satisfied(*best)) return *best;

  const TailRadius at_max = evaluate(max_R);
  std::ostringstream msg;
  msg << "tail_radius_for: eps = " << eps << " unreachable for R <= " << max_R << " (tail impulse " << at_max.tail
      << ", sixth-moment tail " << at_max.sixth_tail << ")";
  throw TailRadiusError(msg.str());
}

}  // namespace vsl
