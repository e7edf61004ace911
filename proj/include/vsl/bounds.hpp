#pragma once

// Explicit stability bounds for perturbations of a radial monotone vorticity.
//
// All constants are fixed by composing the individual estimates of the
// stability argument term by term, so every bound is a sufficient, checkable
// (not sharp) majorant:
//
//   bound_L1  sup_t ‖ω(t) - ζ‖₁
//   bound_J   sup_t J(|ω(t) - ζ|)
//   bound_Lp  sup_t ‖ω(t) - ζ‖_p
//   bound_Jp_total = bound_Lp + bound_J

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsl/field.hpp"

namespace vsl {

struct ProfileParams {
  double M = 0.0;      // ‖ζ‖_∞
  double alpha = 0.0;  // ‖ζ‖₁ (or an upper bound)
  double R = 0.0;      // truncation radius
  double T = 0.0;      // ∫_{|x|>R} |x|² ζ
  double T6 = 0.0;     // ∫ |x|⁶ ζ

  /// Throws std::invalid_argument on negative or non-finite entries.
  void validate() const;
};

struct PerturbationSize {
  std::optional<double> eps1;  // ‖ω₀ - ζ‖₁; majorized by π epsP + epsJ when absent
  double epsJ = 0.0;           // J(|ω₀ - ζ|)
  double epsP = 0.0;           // ‖ω₀ - ζ‖_p
  double p = 1.0;

  void validate() const;
  /// eps1 if measured, else π epsP + epsJ.
  double eps1_or_majorant() const;
};

/// 2 ε₁ + 2 √(M α ε₁) + √(4π(M+1)) √(2 ε_J + 2 R² ε₁ + 2 T + ε₁²/π + α ε₁/π)
double bound_L1(const ProfileParams& pp, const PerturbationSize& sz);

/// 2 R² L1 + ε_J + 2 T
double bound_J(const ProfileParams& pp, const PerturbationSize& sz, double L1_bound);

/// ((M+1)^p L1 + 2^{3p} M^p ε₁ + 2^{2p} ε_p^p)^{1/p}. Throws for p > 16.
double bound_Lp(const ProfileParams& pp, const PerturbationSize& sz, double L1_bound);

/// bound_Lp + bound_J, both driven by bound_L1.
double bound_Jp_total(const ProfileParams& pp, const PerturbationSize& sz);

struct BoundSet {
  double L1 = 0.0;
  double J = 0.0;
  double Lp = 0.0;
  double Jp_total = 0.0;
};

BoundSet evaluate_bounds(const ProfileParams& pp, const PerturbationSize& sz);

/// ‖g‖₁ ≤ π ‖g‖_{J₂}: returns the right-hand side.
double l1_majorant_j2(const ScalarField& g);
/// ‖g‖₁ ≤ π ‖g‖_p + J(|g|): returns the right-hand side.
double l1_majorant_jp(const ScalarField& g, double p);

/// Raised when no ladder radius meets the tail tolerance.
class TailRadiusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TailRadius {
  double R = 0.0;
  double tail = 0.0;        // ∫_{|x|>R} |x|² ζ
  double sixth_tail = 0.0;  // ∫_{|x|>R} |x|⁶ ζ
};

/// Smallest R on the ladder {1.25^k} ∪ {support radius}, capped at max_R, with
///   T(R)^{1/(2p)} + T(R) <= eps  and  ∫_{|x|>R} |x|⁶ ζ <= eps².
/// Throws TailRadiusError listing the tails at max_R when unreachable.
TailRadius tail_radius_for(const RadialProfile& zeta, double eps, double p, double max_R);

}  // namespace vsl
