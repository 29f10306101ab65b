#pragma once

#include <complex>
#include <filesystem>
#include <optional>

#include "ruslan/audio.hpp"
#include "ruslan/matrix.hpp"

namespace ruslan::features {

using ComplexMatrix = Matrix<std::complex<double>>;

enum class WindowKind { Hann };

struct StftConfig {
  std::size_t fft_size = 2048;
  std::size_t win_length = 2048;
  std::size_t hop_length = 512;
  WindowKind window = WindowKind::Hann;
  bool center = true;

  std::size_t bins() const { return fft_size / 2 + 1; }
  /// Throws InvalidConfig unless hop <= win <= fft, fft is a power of two and
  /// the squared window overlap-adds to a strictly positive sum.
  void validate() const;
  /// Frame count for a signal of n samples (SignalTooShort when uncentered and n < win).
  std::size_t frame_count(std::size_t n) const;
  /// Signal length implied by a frame count: (T-1)*hop when centered, (T-1)*hop + win otherwise.
  std::size_t signal_length(std::size_t frames) const;
};

/// Periodic Hann window of the configured length.
std::vector<double> analysis_window(const StftConfig& cfg);

struct LinearSpectrogram {
  Matrix<double> values;  // frames x (fft/2 + 1)
  int sample_rate = audio::kCorpusSampleRate;
  std::size_t fft_size = 2048;
};

struct MelSpectrogram {
  Matrix<double> values;  // frames x bands
  bool log_compressed = false;
};

struct MelConfig {
  std::size_t bands = 80;
  double f_min = 0.0;
  double f_max = 22050.0;
  bool log_compress = true;
  double log_floor = 1e-5;
};

struct LossReport {
  double mel_loss = 0.0;
  double lin_loss = 0.0;
  double total_loss = 0.0;
};

ComplexMatrix stft(std::span<const double> wave, const StftConfig& cfg = {});
ComplexMatrix stft(const audio::Waveform& wave, const StftConfig& cfg = {});

/// Least-squares overlap-add inverse. Without `length` the output has
/// cfg.signal_length(frames) samples.
std::vector<double> istft(const ComplexMatrix& spec, const StftConfig& cfg = {},
                          std::optional<std::size_t> length = std::nullopt);

LinearSpectrogram magnitude(const ComplexMatrix& spec, int sample_rate, const StftConfig& cfg);
LinearSpectrogram linear_spectrogram(const audio::Waveform& wave, const StftConfig& cfg = {});

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular HTK-mel filterbank, bands x (fft/2 + 1).
Matrix<double> mel_filterbank(int sample_rate, std::size_t fft_size, const MelConfig& cfg = {});
MelSpectrogram mel_spectrogram(const LinearSpectrogram& lin, const MelConfig& cfg = {});

/// Mean absolute elementwise difference; ShapeMismatch on unequal shapes.
double mean_abs_difference(const Matrix<double>& a, const Matrix<double>& b);
double loss_mel(const MelSpectrogram& predicted, const MelSpectrogram& target);
double loss_lin(const LinearSpectrogram& predicted, const LinearSpectrogram& target);
LossReport loss_total(double mel_loss, double lin_loss);

/// RSLF feature container: "RSLF", u32 version, u32 rows, u32 cols, f32 payload, all little endian.
void write_rslf(const std::filesystem::path& path, const Matrix<double>& m);
Matrix<double> read_rslf(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_rslf(const Matrix<double>& m);
Matrix<double> decode_rslf(std::span<const std::uint8_t> bytes);

}  // namespace ruslan::features
