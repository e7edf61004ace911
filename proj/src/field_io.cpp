#include "vsl/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace vsl {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::uint8_t* dst, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(raw[k], raw[sizeof(T) - 1 - k]);
  }
  std::memcpy(dst, raw, sizeof(T));
}

template <typename T>
T get_le(const std::uint8_t* src) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, src, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(raw[k], raw[sizeof(T) - 1 - k]);
  }
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_vsf(const ScalarField& f) {
  std::vector<std::uint8_t> out(kVsfHeaderBytes + f.spec().size() * sizeof(double));
  std::memcpy(out.data(), "VSF1", 4);
  put_le<std::uint32_t>(out.data() + 4, static_cast<std::uint32_t>(f.spec().n));
  put_le<std::uint32_t>(out.data() + 8, 0u);
  put_le<double>(out.data() + 12, f.spec().L);
  std::uint8_t* p = out.data() + kVsfHeaderBytes;
  for (double v : f.values()) {
    put_le<double>(p, v);
    p += sizeof(double);
  }
  return out;
}

ScalarField decode_vsf(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kVsfHeaderBytes || std::memcmp(bytes.data(), "VSF1", 4) != 0) {
    throw std::runtime_error("VSF1: bad magic or truncated header");
  }
  const auto n = get_le<std::uint32_t>(bytes.data() + 4);
  const auto L = get_le<double>(bytes.data() + 12);
  const GridSpec spec(static_cast<int>(n), L);
  if (bytes.size() != kVsfHeaderBytes + spec.size() * sizeof(double)) {
    throw std::runtime_error("VSF1: payload size does not match header (n = " + std::to_string(n) + ")");
  }
  std::vector<double> values(spec.size());
  const std::uint8_t* p = bytes.data() + kVsfHeaderBytes;
  for (std::size_t k = 0; k < values.size(); ++k, p += sizeof(double)) values[k] = get_le<double>(p);
  return ScalarField(spec, std::move(values));
}

void write_vsf(const std::filesystem::path& path, const ScalarField& f) {
  const auto bytes = encode_vsf(f);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ScalarField read_vsf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_vsf(bytes);
}

void write_field_csv(std::ostream& out, const ScalarField& f) {
  const GridSpec& g = f.spec();
  out << "x,y,value\n" << std::setprecision(17);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      out << g.center(i) << ',' << g.center(j) << ',' << f(i, j) << '\n';
    }
  }
}

}  // namespace vsl
