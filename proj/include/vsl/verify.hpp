#pragma once

// Self-check suite run by `vsl verify`. The fast level finishes in well under
// two minutes at n <= 256; the full level repeats the property checks at
// acceptance sizes and runs the n = 512 solver checks.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vsl/field.hpp"

namespace vsl {

enum class VerifyLevel { fast, full };

VerifyLevel verify_level_from_string(const std::string& name);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifySummary {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Runs every check, printing one line per check to `log` when non-null.
VerifySummary verify_suite(VerifyLevel level, std::ostream* log = nullptr);

/// FNV-1a over the little-endian bytes of the field values.
std::uint64_t fnv1a_hash(const ScalarField& f);

/// Fixed tie-heavy field (two overlapping off-center disks, n = 64, L = 2).
ScalarField golden_input_field();

/// Hash of symmetric_rearrangement(golden_input_field()) recorded from the
/// reference implementation.
inline constexpr std::uint64_t kGoldenRearrangementHash = 0xc2b393aaec8b019bULL;

/// True when rearranging the golden field with `order` reproduces the golden hash.
bool golden_rearrangement_matches(std::span<const std::uint32_t> order);

}  // namespace vsl
