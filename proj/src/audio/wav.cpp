#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ruslan/audio.hpp"
#include "ruslan/error.hpp"

namespace ruslan::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Layout {
  WavInfo info;
  std::size_t data_offset = 0;
  std::size_t data_bytes = 0;
};

// Walks the chunk list. `bytes` may be a header-only prefix of a file of
// `file_size` bytes; the data chunk is then checked against the file size only.
Layout parse_layout(std::span<const std::uint8_t> bytes, std::uint64_t file_size) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::CorruptFile, "not a RIFF/WAVE file");
  }
  Layout layout;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size()) throw Error(ErrorCode::CorruptFile, "truncated fmt chunk");
      layout.info.format_tag = le16(chunk + 8);
      layout.info.channels = le16(chunk + 10);
      layout.info.sample_rate = le32(chunk + 12);
      layout.info.bits_per_sample = le16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw Error(ErrorCode::CorruptFile, "data chunk precedes fmt chunk");
      if (body + size > file_size) throw Error(ErrorCode::CorruptFile, "data chunk runs past end of file");
      layout.data_offset = body;
      layout.data_bytes = size;
      const std::uint32_t block = static_cast<std::uint32_t>(layout.info.channels) * layout.info.bits_per_sample / 8;
      layout.info.frames = block ? size / block : 0;
      return layout;
    }
    pos = body + size + (size & 1u);
  }
  throw Error(ErrorCode::CorruptFile, have_fmt ? "missing data chunk" : "missing fmt chunk");
}

void require_pcm16_mono(const WavInfo& info) {
  if (info.format_tag != kFormatPcm) {
    throw Error(ErrorCode::UnsupportedFormat, "format tag " + std::to_string(info.format_tag) + " is not PCM");
  }
  if (info.channels != 1) {
    throw Error(ErrorCode::UnsupportedFormat, std::to_string(info.channels) + " channels, mono required");
  }
  if (info.bits_per_sample != 16) {
    throw Error(ErrorCode::UnsupportedFormat, std::to_string(info.bits_per_sample) + "-bit samples, 16 required");
  }
  if (info.sample_rate == 0) throw Error(ErrorCode::CorruptFile, "zero sample rate");
}

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot stat " + path.string());
  // Chunks before "data" are small; 64 KiB covers any realistic header.
  std::vector<std::uint8_t> head(static_cast<std::size_t>(std::min<std::uintmax_t>(file_size, 65536)));
  in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  return parse_layout(head, file_size).info;
}

Waveform decode_wav(std::span<const std::uint8_t> bytes) {
  const Layout layout = parse_layout(bytes, bytes.size());
  require_pcm16_mono(layout.info);
  if (layout.data_bytes % 2 != 0) throw Error(ErrorCode::CorruptFile, "odd PCM16 data size");
  Waveform wave;
  wave.sample_rate = static_cast<int>(layout.info.sample_rate);
  wave.samples.resize(layout.data_bytes / 2);
  const std::uint8_t* p = bytes.data() + layout.data_offset;
  for (std::size_t i = 0; i < wave.samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(le16(p + 2 * i));
    wave.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return wave;
}

Waveform read_wav(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const Waveform& wave) {
  if (wave.sample_rate <= 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  const auto n = wave.samples.size();
  if (n * 2 > 0xFFFFFFFFull - 36) throw Error(ErrorCode::InvalidArgument, "waveform too long for RIFF");
  const auto data_bytes = static_cast<std::uint32_t>(n * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = wave.samples[i];
    if (!std::isfinite(x) || x < -1.0 || x > 1.0) {
      throw Error(ErrorCode::OutOfRangeSample, "sample " + std::to_string(i) + " = " + std::to_string(x));
    }
    const long q = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void write_wav(const Waveform& wave, const std::filesystem::path& path) {
  const auto bytes = encode_wav(wave);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

}  // namespace ruslan::audio
