#pragma once

// Uniform-grid scalar fields on the truncated plane [-L, L)^2, midpoint
// quadrature, and the integral functionals used throughout the library:
// L^p norms, the angular impulse J(f) = ∫|x|^2 f, the J_p norm and the
// weighted symmetric-difference quantity of a vortex patch.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vsl {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Values with magnitude below this are treated as exact zeros.
inline constexpr double kZeroClamp = 1e-30;

/// n x n cells covering [-L, L)^2. Cell centers sit at -L + (i + 1/2) h.
struct GridSpec {
  int n = 0;
  double L = 0.0;

  GridSpec() = default;
  GridSpec(int cells_per_side, double half_width);

  double h() const { return 2.0 * L / n; }
  double cell_area() const { return h() * h(); }
  double center(int i) const { return -L + (i + 0.5) * h(); }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }

  /// Exact integer proxy for the squared radius of cell (i, j):
  /// |x_ij|^2 = radius_key(i, j) * h^2 / 4.
  std::int64_t radius_key(int i, int j) const {
    const std::int64_t a = 2 * i - n + 1;
    const std::int64_t b = 2 * j - n + 1;
    return a * a + b * b;
  }

  bool operator==(const GridSpec&) const = default;
};

/// Sampled scalar on a GridSpec, row-major with y as the outer index:
/// values()[j * n + i] is the cell at (x_i, y_j).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& spec, double fill = 0.0);
  ScalarField(const GridSpec& spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(j) * spec_.n + i]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(j) * spec_.n + i]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double a);

  bool operator==(const ScalarField&) const = default;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);
ScalarField abs(const ScalarField& f);

/// Throws std::invalid_argument if the two fields live on different grids.
void require_same_grid(const ScalarField& a, const ScalarField& b);

// ---------------------------------------------------------------------------
// Radial profiles

enum class ProfileKind { sharp_patch, mollified_patch, gaussian, piecewise_linear };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// Nonnegative, non-increasing radial profile f(r).
///
///   sharp_patch      A * 1{r < r0}
///   mollified_patch  A * (1 - tanh((r - r0) / w)) / 2
///   gaussian         A * exp(-(r / sigma)^2)
///   piecewise_linear linear interpolation of (r_k, f_k) knots; the last knot
///                    must carry value 0 and the profile vanishes beyond it
class RadialProfile {
 public:
  static RadialProfile sharp_patch(double radius, double amplitude = 1.0);
  static RadialProfile mollified_patch(double radius, double ramp_width, double amplitude = 1.0);
  static RadialProfile gaussian(double amplitude = 1.0, double width = 1.0);
  static RadialProfile piecewise_linear(std::vector<std::pair<double, double>> knots);
  /// max(0, A (1 - r / r0)).
  static RadialProfile cone(double radius = 1.0, double amplitude = 1.0);

  double operator()(double r) const;

  ProfileKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double radius() const { return radius_; }
  double width() const { return width_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  double sup() const { return (*this)(0.0); }

  /// Radius beyond which f vanishes identically, if any.
  std::optional<double> support_radius() const;

  /// 2π ∫_{r_from}^{r_to} r^{k+1} f(r) dr, i.e. ∫_{r_from<|x|<r_to} |x|^k f dx.
  double radial_moment(int k, double r_from = 0.0, double r_to = kInf) const;

  /// ∫_{|x|>R} |x|^2 f dx.
  double tail_impulse(double R) const { return radial_moment(2, R); }
  /// ∫_{|x|>R} |x|^6 f dx.
  double tail_sixth_moment(double R) const { return radial_moment(6, R); }

 private:
  RadialProfile() = default;
  /// Radius past which the profile is below double precision noise.
  double effective_extent() const;

  ProfileKind kind_ = ProfileKind::gaussian;
  double amplitude_ = 1.0;
  double radius_ = 0.0;
  double width_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

// ---------------------------------------------------------------------------
// Functionals

/// Midpoint rule: Σ f(x_ij) h^2.
double quadrature(const ScalarField& f);

/// (Σ |f|^p h^2)^{1/p}; p = kInf gives max |f|. Throws for p < 1.
double lp_norm(const ScalarField& f, double p);

double sup_norm(const ScalarField& f);

/// J(f) = Σ f(x_ij) |x_ij|^2 h^2.
double angular_impulse(const ScalarField& f);

/// ‖g‖_{L^p} + J(|g|) for p in [1, ∞). Signed fields allowed.
double jp_norm(const ScalarField& g, double p);

/// Σ f |x|^k h^2 for positive even k.
double higher_moment(const ScalarField& f, int k);

/// Σ_{|x|>R} |x|^2 |f| h^2.
double tail_impulse(const ScalarField& f, double R);

/// Σ over cells where {f > 1/2} and the unit disk disagree of ||x|^2 - 1| h^2.
double patch_conserved_quantity(const ScalarField& f);

/// Σ (f - 1_D)(|x|^2 - 1) h^2. Coincides with patch_conserved_quantity on
/// {0,1}-valued fields and is linear in f.
double patch_conserved_quantity_linear(const ScalarField& f);

/// Fraction of ∫|f| carried by the outer frame max(|x|,|y|) > 0.9 L.
double boundary_mass_fraction(const ScalarField& f);

/// Samples f(|x|) at cell centers; values below kZeroClamp become 0.
/// Prints a warning to stderr when the profile overflows the domain.
ScalarField sample_profile(const RadialProfile& profile, const GridSpec& spec);

/// True when f(0.9 L) > 1e-8 ‖f‖_∞.
bool support_overflows(const RadialProfile& profile, const GridSpec& spec);

/// 1 inside the open disk of the given radius and center, 0 elsewhere.
ScalarField disk_indicator(const GridSpec& spec, double radius, double cx = 0.0, double cy = 0.0);

}  // namespace vsl
