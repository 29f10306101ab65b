#include "ruslan/vocoder.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ruslan/error.hpp"

namespace ruslan::vocoder {

namespace {

using features::ComplexMatrix;
using features::StftConfig;

// Target magnitude with the phase of `phase_source`; a zero bin keeps phase 0.
void impose_magnitude(const Matrix<double>& target, const ComplexMatrix& phase_source, ComplexMatrix& out) {
  for (std::size_t i = 0; i < target.data.size(); ++i) {
    const auto z = phase_source.data[i];
    const double r = std::abs(z);
    out.data[i] = r > 0.0 ? z * (target.data[i] / r) : std::complex<double>(target.data[i], 0.0);
  }
}

double convergence_db(const Matrix<double>& target, const ComplexMatrix& spec, double target_norm) {
  double err = 0.0;
  for (std::size_t i = 0; i < target.data.size(); ++i) {
    const double d = std::abs(spec.data[i]) - target.data[i];
    err += d * d;
  }
  const double ratio = std::sqrt(err) / target_norm;
  return ratio > 0.0 ? std::max(kConvergenceFloorDb, 20.0 * std::log10(ratio)) : kConvergenceFloorDb;
}

double frobenius(const Matrix<double>& m) {
  double acc = 0.0;
  for (double v : m.data) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

void GriffinLimConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in [0, 1)");
}

audio::Waveform griffin_lim(const features::LinearSpectrogram& magnitude, const GriffinLimConfig& gl,
                            const StftConfig& cfg, std::vector<double>* trace) {
  gl.validate();
  cfg.validate();
  const Matrix<double>& target = magnitude.values;
  if (target.cols != cfg.bins()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(target.cols) + " bins, config expects " + std::to_string(cfg.bins()));
  }
  for (double v : target.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "magnitude is not finite");
    if (v < 0.0) throw Error(ErrorCode::NegativeMagnitude, "magnitude " + std::to_string(v));
  }
  audio::Waveform out;
  out.sample_rate = magnitude.sample_rate;
  if (target.rows == 0) return out;

  // Iterate on the uncentered frame grid, where stft(istft(.)) is the exact
  // least-squares projection onto consistent spectrograms. A centered target
  // describes the padded signal, whose centre is cropped at the end.
  StftConfig inner = cfg;
  inner.center = false;
  const std::size_t padded_len = inner.signal_length(target.rows);

  ComplexMatrix c(target.rows, target.cols);
  if (gl.init == InitPhase::Zeros) {
    for (std::size_t i = 0; i < target.data.size(); ++i) c.data[i] = {target.data[i], 0.0};
  } else {
    std::mt19937_64 rng(gl.seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (std::size_t i = 0; i < target.data.size(); ++i) c.data[i] = std::polar(target.data[i], angle(rng));
  }

  const double target_norm = frobenius(target);
  ComplexMatrix shaped(target.rows, target.cols);
  auto record = [&] {
    if (!trace || target_norm == 0.0) return;
    impose_magnitude(target, c, shaped);
    trace->push_back(convergence_db(target, features::stft(features::istft(shaped, inner, padded_len), inner),
                                    target_norm));
  };
  if (trace) trace->clear();
  record();

  // Update order per iteration k:
  //   proj_k  = P_mag(P_consistent(c_k))
  //   c_{k+1} = proj_k + alpha * (proj_k - proj_{k-1}),   proj_{-1} = c_0.
  ComplexMatrix prev = c;
  ComplexMatrix proj(target.rows, target.cols);
  for (std::size_t k = 0; k < gl.iterations; ++k) {
    const auto consistent = features::stft(features::istft(c, inner, padded_len), inner);
    impose_magnitude(target, consistent, proj);
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = proj.data[i] + gl.alpha * (proj.data[i] - prev.data[i]);
    std::swap(prev, proj);
    record();
  }

  impose_magnitude(target, c, shaped);
  const auto full = features::istft(shaped, inner, padded_len);
  const std::size_t offset = cfg.center ? cfg.win_length / 2 : 0;
  const std::size_t n = cfg.signal_length(target.rows);
  out.samples.assign(full.begin() + static_cast<std::ptrdiff_t>(offset),
                     full.begin() + static_cast<std::ptrdiff_t>(offset + n));
  return out;
}

double spectral_convergence(const features::LinearSpectrogram& target, const audio::Waveform& reconstructed,
                            const StftConfig& cfg) {
  const double norm = frobenius(target.values);
  if (norm == 0.0) throw Error(ErrorCode::ZeroTarget, "target spectrogram is all zero");
  const auto spec = features::stft(reconstructed, cfg);
  if (spec.rows != target.values.rows || spec.cols != target.values.cols) {
    throw Error(ErrorCode::ShapeMismatch, "reconstruction has " + std::to_string(spec.rows) + " frames, target " +
                                              std::to_string(target.values.rows));
  }
  return convergence_db(target.values, spec, norm);
}

}  // namespace ruslan::vocoder
