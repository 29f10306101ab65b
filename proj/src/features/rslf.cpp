#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ruslan/error.hpp"
#include "ruslan/features.hpp"

namespace ruslan::features {

namespace {

constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeader = 16;

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

std::uint32_t get32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> encode_rslf(const Matrix<double>& m) {
  if (m.rows > 0xFFFFFFFFu || m.cols > 0xFFFFFFFFu) throw Error(ErrorCode::InvalidArgument, "matrix too large");
  std::vector<std::uint8_t> out{'R', 'S', 'L', 'F'};
  out.reserve(kHeader + 4 * m.data.size());
  put32(out, kVersion);
  put32(out, static_cast<std::uint32_t>(m.rows));
  put32(out, static_cast<std::uint32_t>(m.cols));
  for (double v : m.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "feature value is not finite");
    put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

Matrix<double> decode_rslf(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), "RSLF", 4) != 0) {
    throw Error(ErrorCode::CorruptFile, "missing RSLF header");
  }
  const std::uint32_t version = get32(bytes.data() + 4);
  if (version != kVersion) throw Error(ErrorCode::UnsupportedFormat, "RSLF version " + std::to_string(version));
  const std::uint64_t rows = get32(bytes.data() + 8);
  const std::uint64_t cols = get32(bytes.data() + 12);
  if (bytes.size() != kHeader + 4 * rows * cols) throw Error(ErrorCode::CorruptFile, "RSLF payload size mismatch");
  Matrix<double> m(rows, cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    m.data[i] = static_cast<double>(std::bit_cast<float>(get32(bytes.data() + kHeader + 4 * i)));
  }
  return m;
}

void write_rslf(const std::filesystem::path& path, const Matrix<double>& m) {
  const auto bytes = encode_rslf(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

Matrix<double> read_rslf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_rslf(bytes);
}

}  // namespace ruslan::features
