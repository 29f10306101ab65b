#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "ruslan/error.hpp"
#include "ruslan/features.hpp"

namespace ruslan::features {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Reflect-pad index (no edge repetition), valid for any n >= 1.
std::size_t reflect(long i, std::size_t n) {
  if (n == 1) return 0;
  const long period = 2 * static_cast<long>(n) - 2;
  long k = i % period;
  if (k < 0) k += period;
  return static_cast<std::size_t>(k < static_cast<long>(n) ? k : period - k);
}

}  // namespace

std::vector<double> analysis_window(const StftConfig& cfg) {
  std::vector<double> w(cfg.win_length);
  const double n = static_cast<double>(cfg.win_length);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  }
  return w;
}

void StftConfig::validate() const {
  if (hop_length == 0 || win_length == 0) throw Error(ErrorCode::InvalidConfig, "hop and window must be positive");
  if (!(hop_length <= win_length && win_length <= fft_size)) {
    throw Error(ErrorCode::InvalidConfig, "need hop <= win <= fft");
  }
  if (!is_power_of_two(fft_size)) throw Error(ErrorCode::InvalidConfig, "fft size must be a power of two");
  // Least-squares inversion divides by the overlap-added squared window.
  const auto w = analysis_window(*this);
  for (std::size_t phase = 0; phase < hop_length; ++phase) {
    double sum = 0.0;
    for (std::size_t i = phase; i < win_length; i += hop_length) sum += w[i] * w[i];
    if (sum < 1e-8) {
      throw Error(ErrorCode::InvalidConfig, "window/hop pair violates the overlap-add condition at offset " +
                                                std::to_string(phase));
    }
  }
}

std::size_t StftConfig::frame_count(std::size_t n) const {
  if (center) return 1 + n / hop_length;
  if (n < win_length) {
    throw Error(ErrorCode::SignalTooShort,
                std::to_string(n) + " samples, window needs " + std::to_string(win_length));
  }
  return 1 + (n - win_length) / hop_length;
}

std::size_t StftConfig::signal_length(std::size_t frames) const {
  if (frames == 0) return 0;
  return (frames - 1) * hop_length + (center ? 0 : win_length);
}

ComplexMatrix stft(std::span<const double> x, const StftConfig& cfg) {
  cfg.validate();
  if (cfg.center && x.empty()) throw Error(ErrorCode::SignalTooShort, "empty signal");
  const std::size_t frames = cfg.frame_count(x.size());
  const auto w = analysis_window(cfg);
  const long offset = cfg.center ? static_cast<long>(cfg.win_length / 2) : 0;
  detail::RealFft fft(cfg.fft_size);
  ComplexMatrix out(frames, cfg.bins());
  for (std::size_t t = 0; t < frames; ++t) {
    double* buf = fft.real();
    const long start = static_cast<long>(t * cfg.hop_length) - offset;
    for (std::size_t i = 0; i < cfg.win_length; ++i) {
      const long idx = start + static_cast<long>(i);
      const bool inside = idx >= 0 && idx < static_cast<long>(x.size());
      buf[i] = w[i] * x[inside ? static_cast<std::size_t>(idx) : reflect(idx, x.size())];
    }
    std::fill(buf + cfg.win_length, buf + cfg.fft_size, 0.0);
    fft.forward();
    std::copy_n(fft.spectrum(), cfg.bins(), out.row(t));
  }
  return out;
}

ComplexMatrix stft(const audio::Waveform& wave, const StftConfig& cfg) {
  return stft(std::span<const double>(wave.samples), cfg);
}

std::vector<double> istft(const ComplexMatrix& spec, const StftConfig& cfg, std::optional<std::size_t> length) {
  cfg.validate();
  if (spec.cols != cfg.bins()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(spec.cols) + " bins, config expects " + std::to_string(cfg.bins()));
  }
  const std::size_t out_len = length.value_or(cfg.signal_length(spec.rows));
  if (spec.rows == 0) return std::vector<double>(out_len, 0.0);

  const auto w = analysis_window(cfg);
  const std::size_t full = (spec.rows - 1) * cfg.hop_length + cfg.win_length;
  std::vector<double> acc(full, 0.0);
  std::vector<double> norm(full, 0.0);
  detail::RealFft fft(cfg.fft_size);
  const double scale = 1.0 / static_cast<double>(cfg.fft_size);
  for (std::size_t t = 0; t < spec.rows; ++t) {
    std::copy_n(spec.row(t), cfg.bins(), fft.spectrum());
    // A real signal has real DC and Nyquist bins.
    fft.spectrum()[0].imag(0.0);
    fft.spectrum()[cfg.bins() - 1].imag(0.0);
    fft.inverse();
    const double* frame = fft.real();
    const std::size_t start = t * cfg.hop_length;
    for (std::size_t i = 0; i < cfg.win_length; ++i) {
      acc[start + i] += w[i] * frame[i] * scale;
      norm[start + i] += w[i] * w[i];
    }
  }
  const std::size_t offset = cfg.center ? cfg.win_length / 2 : 0;
  std::vector<double> y(out_len, 0.0);
  for (std::size_t i = 0; i < out_len && offset + i < full; ++i) {
    const double d = norm[offset + i];
    if (d > 1e-10) y[i] = acc[offset + i] / d;
  }
  return y;
}

LinearSpectrogram magnitude(const ComplexMatrix& spec, int sample_rate, const StftConfig& cfg) {
  LinearSpectrogram lin;
  lin.sample_rate = sample_rate;
  lin.fft_size = cfg.fft_size;
  lin.values = Matrix<double>(spec.rows, spec.cols);
  for (std::size_t i = 0; i < spec.data.size(); ++i) lin.values.data[i] = std::abs(spec.data[i]);
  return lin;
}

LinearSpectrogram linear_spectrogram(const audio::Waveform& wave, const StftConfig& cfg) {
  return magnitude(stft(wave, cfg), wave.sample_rate, cfg);
}

}  // namespace ruslan::features
