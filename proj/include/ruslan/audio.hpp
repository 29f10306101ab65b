#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace ruslan::audio {

inline constexpr int kCorpusSampleRate = 44100;

struct Waveform {
  std::vector<double> samples;  // nominally in [-1, 1]
  int sample_rate = kCorpusSampleRate;

  double duration() const noexcept {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Header fields of a RIFF/WAVE file, read without decoding the payload.
struct WavInfo {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint64_t frames = 0;

  double duration() const noexcept { return sample_rate ? static_cast<double>(frames) / sample_rate : 0.0; }
  bool is_pcm16_mono() const noexcept { return format_tag == 1 && channels == 1 && bits_per_sample == 16; }
};

/// Throws CorruptFile on a structurally broken file, IoFailure if unreadable.
WavInfo read_wav_info(const std::filesystem::path& path);

/// Decodes 16-bit PCM mono; samples are int16 / 32768.
/// Throws UnsupportedFormat for anything else.
Waveform read_wav(const std::filesystem::path& path);
Waveform decode_wav(std::span<const std::uint8_t> bytes);

/// Canonical 44-byte-header PCM16 mono little-endian layout.
/// Throws OutOfRangeSample for non-finite samples or samples outside [-1, 1].
std::vector<std::uint8_t> encode_wav(const Waveform& wave);
void write_wav(const Waveform& wave, const std::filesystem::path& path);

struct TrimConfig {
  double threshold_db = -50.0;  // windowed RMS, dB re full scale
  double window_ms = 20.0;
};

/// [begin, end) of the non-silent region, at window granularity.
/// Throws EmptyAfterTrim if every window is below the threshold.
std::pair<std::size_t, std::size_t> voiced_bounds(const Waveform& wave, const TrimConfig& cfg = {});

/// Drops leading and trailing windows whose RMS is below the threshold.
Waveform trim_silence(const Waveform& wave, const TrimConfig& cfg = {});

struct SnrConfig {
  double noise_percentile = 0.1;  // fraction of lowest-energy windows taken as noise
  double window_ms = 20.0;
};

/// 10*log10(P_signal / P_noise) over non-overlapping windows. Throws
/// DegenerateSignal when the noise windows carry exactly zero power.
double estimate_snr(const Waveform& wave, const SnrConfig& cfg = {});

}  // namespace ruslan::audio
