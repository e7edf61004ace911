#pragma once

// VSF1 binary snapshots and CSV export.
//
// VSF1 layout (little-endian):
//   offset 0   4 bytes  magic "VSF1"
//   offset 4   u32      n (cells per side)
//   offset 8   u32      reserved, written as 0
//   offset 12  f64      L (half-width)
//   offset 24  n*n f64  values, row-major, y outer

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vsl/field.hpp"

namespace vsl {

inline constexpr std::size_t kVsfHeaderBytes = 24;

std::vector<std::uint8_t> encode_vsf(const ScalarField& f);
ScalarField decode_vsf(const std::vector<std::uint8_t>& bytes);

void write_vsf(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_vsf(const std::filesystem::path& path);

/// x,y,value rows with a header line.
void write_field_csv(std::ostream& out, const ScalarField& f);

}  // namespace vsl
