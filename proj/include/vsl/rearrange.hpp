#pragma once

// Distribution functions, the symmetric-decreasing rearrangement on a
// uniform grid, the cut-off operator, the level-set/annulus constructions
// behind the impulse-minimality argument, and numerical checks of the
// rearrangement inequalities.
//
// The grid rearrangement is a permutation of cell values: values sorted in
// decreasing order are assigned to cells sorted by increasing distance from
// the origin (ties broken by polar angle, then by linear index). It is
// therefore exactly equimeasurable with its input and idempotent.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "vsl/field.hpp"

namespace vsl {

/// α ↦ |{f > α}| for a sampled field.
class DistributionFunction {
 public:
  DistributionFunction() = default;
  DistributionFunction(std::vector<double> descending_values, double cell_area);

  /// Distinct positive values of f, descending.
  const std::vector<double>& thresholds() const { return thresholds_; }
  /// measures()[k] = |{f > thresholds()[k]}|.
  const std::vector<double>& measures() const { return measures_; }

  /// |{f > alpha}| in area units.
  double measure_above(double alpha) const;
  /// Number of cells with value > alpha.
  std::size_t count_above(double alpha) const;

  double cell_area() const { return cell_area_; }
  bool empty() const { return thresholds_.empty(); }

 private:
  std::vector<double> sorted_;  // positive values, descending
  std::vector<double> thresholds_;
  std::vector<double> measures_;
  double cell_area_ = 0.0;
};

/// Superlevel-set measures of f (negative values and |v| < kZeroClamp count as 0).
DistributionFunction distribution(const ScalarField& f);

/// Two-column CSV "alpha,measure" at the distribution's own thresholds.
void write_distribution_csv(std::ostream& out, const DistributionFunction& d);

/// Cell indices sorted by (|x|^2, polar angle, linear index). Cached per n.
std::shared_ptr<const std::vector<std::uint32_t>> radial_order(const GridSpec& spec);

/// f* for the grid: rearranges |f|.
ScalarField symmetric_rearrangement(const ScalarField& f);

/// Same assignment rule with a caller-provided cell order. Exposed for
/// tie-break experiments.
ScalarField rearrange_with_order(const ScalarField& f, std::span<const std::uint32_t> order);

/// min(f, M + 1) pointwise. Throws for M < 0.
ScalarField cutoff(const ScalarField& f, double M);

// ---------------------------------------------------------------------------
// Level-set simple functions and flattened annuli

struct Annulus {
  double inner = 0.0;      // s_{k+1}
  double outer = 0.0;      // s_k
  double amplitude = 0.0;  // k / n
};

/// Radial simple function Σ_k (k/n) 1{s_{k+1} <= |x| < s_k}.
struct AnnulusStack {
  int levels = 0;                // n
  std::vector<double> radii;     // s_1 ... s_n (s_k = sqrt(|{f > k/n}| / π))
  std::vector<Annulus> annuli;   // non-degenerate rings only, k ascending

  double l1() const;       // Σ amplitude * π (outer² - inner²)
  double impulse() const;  // Σ amplitude * π/2 (outer⁴ - inner⁴)
};

/// Builds the level-set stack of a radial non-increasing f with ‖f‖_∞ <= 1.
/// Throws std::invalid_argument if f is not radial (‖f - f*‖₁ > 8 h ‖f‖_∞)
/// or exceeds 1.
AnnulusStack levelset_simple_function(const ScalarField& f, int n);

struct FlattenedAnnulus {
  double radius = 0.0;   // c: outer radius of the unit-height ring with equal mass
  double deficit = 0.0;  // J(h_k) - J(h_k')
};

/// Replaces the ring amplitude·1{s_in <= |x| < s_out} by the unit-height ring
/// 1{s_in <= |x| < c} of equal mass. c = sqrt((1-a) s_in² + a s_out²) and the
/// impulse drops by (π a / 2)(1 - a)(s_out² - s_in²)².
FlattenedAnnulus flatten_annulus(double s_in, double s_out, double amplitude);

// ---------------------------------------------------------------------------
// Inequality checks

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;          // includes slack
  double slack = 0.0;
  double boundary_mass = 0.0;
  bool refused = false;      // boundary mass above kBoundaryRefusal
  bool ok = false;           // lhs <= rhs and not refused
};

/// Fraction of mass in the outer frame above which no verdict is issued.
inline constexpr double kBoundaryRefusal = 1e-4;

/// Discretization slack 32 h (‖f‖_∞ + J(f)).
double discretization_slack(const ScalarField& f);

/// ‖f - f*‖₁² <= 4π ‖f‖_∞ (J(f) - J(f*)) + slack.
InequalityCheck rearrangement_deficit_check(const ScalarField& f);

/// ‖g* - h*‖₁ <= ‖g - h‖₁ + slack.
InequalityCheck nonexpansivity_check(const ScalarField& g, const ScalarField& h);

}  // namespace vsl
