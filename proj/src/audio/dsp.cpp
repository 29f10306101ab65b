#include <algorithm>
#include <cmath>
#include <string>

#include "ruslan/audio.hpp"
#include "ruslan/error.hpp"

namespace ruslan::audio {

namespace {

std::size_t window_samples(int sample_rate, double window_ms) {
  const auto n = static_cast<long>(std::lround(sample_rate * window_ms / 1000.0));
  return static_cast<std::size_t>(std::max(1L, n));
}

// Mean power of each non-overlapping window; the last window may be partial.
std::vector<double> window_powers(const Waveform& wave, std::size_t window) {
  std::vector<double> powers;
  const auto& x = wave.samples;
  powers.reserve(x.size() / window + 1);
  for (std::size_t start = 0; start < x.size(); start += window) {
    const std::size_t end = std::min(x.size(), start + window);
    double acc = 0.0;
    for (std::size_t i = start; i < end; ++i) acc += x[i] * x[i];
    powers.push_back(acc / static_cast<double>(end - start));
  }
  return powers;
}

}  // namespace

std::pair<std::size_t, std::size_t> voiced_bounds(const Waveform& wave, const TrimConfig& cfg) {
  if (!(cfg.threshold_db < 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be negative dBFS");
  if (!(cfg.window_ms > 0.0)) throw Error(ErrorCode::InvalidArgument, "window must be positive");
  const std::size_t window = window_samples(wave.sample_rate, cfg.window_ms);
  const auto powers = window_powers(wave, window);
  // RMS >= 10^(dB/20)  <=>  power >= 10^(dB/10)
  const double min_power = std::pow(10.0, cfg.threshold_db / 10.0);
  const auto loud = [min_power](double p) { return p >= min_power; };
  const auto first = std::find_if(powers.begin(), powers.end(), loud);
  if (first == powers.end()) throw Error(ErrorCode::EmptyAfterTrim, "every window is below the threshold");
  const auto last = std::find_if(powers.rbegin(), powers.rend(), loud);
  const auto begin = static_cast<std::size_t>(first - powers.begin()) * window;
  const auto end_window = static_cast<std::size_t>(powers.rend() - last);
  const std::size_t end = std::min(wave.samples.size(), end_window * window);
  return {begin, end};
}

Waveform trim_silence(const Waveform& wave, const TrimConfig& cfg) {
  const auto [begin, end] = voiced_bounds(wave, cfg);
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.assign(wave.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     wave.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

double estimate_snr(const Waveform& wave, const SnrConfig& cfg) {
  if (wave.samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty waveform");
  if (!(cfg.noise_percentile > 0.0 && cfg.noise_percentile < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "noise percentile must lie in (0, 0.5)");
  }
  const std::size_t window = window_samples(wave.sample_rate, cfg.window_ms);
  auto powers = window_powers(wave, window);
  if (powers.size() < 2) throw Error(ErrorCode::DegenerateSignal, "need at least two analysis windows");
  std::sort(powers.begin(), powers.end());
  const auto noise_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(cfg.noise_percentile * static_cast<double>(powers.size()))));
  double noise = 0.0;
  for (std::size_t i = 0; i < noise_count; ++i) noise += powers[i];
  noise /= static_cast<double>(noise_count);
  double signal = 0.0;
  for (std::size_t i = noise_count; i < powers.size(); ++i) signal += powers[i];
  signal /= static_cast<double>(powers.size() - noise_count);
  if (noise == 0.0) throw Error(ErrorCode::DegenerateSignal, "noise windows have zero power");
  return 10.0 * std::log10(signal / noise);
}

}  // namespace ruslan::audio
