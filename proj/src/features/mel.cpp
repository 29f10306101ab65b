#include <algorithm>
#include <cmath>
#include <string>

#include "ruslan/error.hpp"
#include "ruslan/features.hpp"

namespace ruslan::features {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix<double> mel_filterbank(int sample_rate, std::size_t fft_size, const MelConfig& cfg) {
  const double nyquist = sample_rate / 2.0;
  if (cfg.bands == 0) throw Error(ErrorCode::InvalidConfig, "band count must be positive");
  if (!(cfg.f_min >= 0.0 && cfg.f_min < cfg.f_max && cfg.f_max <= nyquist)) {
    throw Error(ErrorCode::InvalidBandRange, "need 0 <= fMin < fMax <= " + std::to_string(nyquist) + " Hz, got [" +
                                                 std::to_string(cfg.f_min) + ", " + std::to_string(cfg.f_max) + "]");
  }
  const std::size_t bins = fft_size / 2 + 1;
  // bands + 2 edge points equally spaced on the mel scale.
  std::vector<double> edges(cfg.bands + 2);
  const double lo = hz_to_mel(cfg.f_min);
  const double hi = hz_to_mel(cfg.f_max);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.bands + 1));
  }
  edges.front() = cfg.f_min;  // exact band limits despite the mel round trip
  edges.back() = cfg.f_max;
  Matrix<double> fb(cfg.bands, bins);
  for (std::size_t m = 0; m < cfg.bands; ++m) {
    const double left = edges[m];
    const double centre = edges[m + 1];
    const double right = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      const double rise = (f - left) / (centre - left);
      const double fall = (right - f) / (right - centre);
      fb(m, k) = std::max(0.0, std::min(rise, fall));
    }
  }
  return fb;
}

MelSpectrogram mel_spectrogram(const LinearSpectrogram& lin, const MelConfig& cfg) {
  const auto fb = mel_filterbank(lin.sample_rate, lin.fft_size, cfg);
  if (lin.values.cols != fb.cols) {
    throw Error(ErrorCode::ShapeMismatch, "spectrogram has " + std::to_string(lin.values.cols) + " bins, expected " +
                                              std::to_string(fb.cols));
  }
  MelSpectrogram mel;
  mel.log_compressed = cfg.log_compress;
  mel.values = Matrix<double>(lin.values.rows, cfg.bands);
  for (std::size_t t = 0; t < lin.values.rows; ++t) {
    const double* spec = lin.values.row(t);
    for (std::size_t m = 0; m < cfg.bands; ++m) {
      const double* filt = fb.row(m);
      double acc = 0.0;
      for (std::size_t k = 0; k < fb.cols; ++k) acc += filt[k] * spec[k];
      mel.values(t, m) = cfg.log_compress ? std::log(std::max(acc, cfg.log_floor)) : acc;
    }
  }
  return mel;
}

double mean_abs_difference(const Matrix<double>& a, const Matrix<double>& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                                              std::to_string(b.rows) + "x" + std::to_string(b.cols));
  }
  if (a.data.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) acc += std::abs(a.data[i] - b.data[i]);
  return acc / static_cast<double>(a.data.size());
}

double loss_mel(const MelSpectrogram& predicted, const MelSpectrogram& target) {
  return mean_abs_difference(predicted.values, target.values);
}

double loss_lin(const LinearSpectrogram& predicted, const LinearSpectrogram& target) {
  return mean_abs_difference(predicted.values, target.values);
}

LossReport loss_total(double mel_loss, double lin_loss) {
  if (!(mel_loss >= 0.0) || !(lin_loss >= 0.0)) throw Error(ErrorCode::NegativeLoss, "losses must be nonnegative");
  return {mel_loss, lin_loss, mel_loss + lin_loss};
}

}  // namespace ruslan::features
