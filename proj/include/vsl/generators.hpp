#pragma once

// Seeded random field generators for property checks. All generated fields
// are nonnegative and supported well inside B_{0.7 L}.

#include <cstdint>
#include <random>

#include "vsl/field.hpp"

namespace vsl {

using Rng = std::mt19937_64;

/// Sum of 1 to 4 random features (disks, annuli, Gaussian bumps, boxes of
/// uniform noise) with random amplitudes. About a third of the draws are
/// quantized to a few levels so that ties are common.
ScalarField random_field(const GridSpec& spec, Rng& rng);

/// min(1, λ g) with λ solved exactly so that the integral equals mass.
/// Throws std::invalid_argument if mass exceeds the measure of supp g.
ScalarField clamp_to_mass(const ScalarField& g, double mass);

/// Random ξ with 0 <= ξ <= 1 and ∫ξ = π.
ScalarField random_unit_mass_field(const GridSpec& spec, Rng& rng);

}  // namespace vsl
