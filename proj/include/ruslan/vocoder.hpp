#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ruslan/audio.hpp"
#include "ruslan/features.hpp"

namespace ruslan::vocoder {

enum class InitPhase { Zeros, SeededRandom };

struct GriffinLimConfig {
  std::size_t iterations = 300;
  double alpha = 0.99;
  InitPhase init = InitPhase::Zeros;
  std::uint64_t seed = 0;

  void validate() const;  // InvalidConfig unless 0 <= alpha < 1
};

/// Spectral convergence is capped here instead of reaching -inf on an exact match.
constexpr double kConvergenceFloorDb = -100.0;

/// Fast Griffin-Lim phase retrieval. When `trace` is given it receives the
/// spectral convergence of the reconstruction after 0..iterations updates.
audio::Waveform griffin_lim(const features::LinearSpectrogram& magnitude, const GriffinLimConfig& gl = {},
                            const features::StftConfig& stft = {}, std::vector<double>* trace = nullptr);

/// 20 log10(|| |STFT(y)| - target ||_F / ||target||_F), floored at kConvergenceFloorDb.
double spectral_convergence(const features::LinearSpectrogram& target, const audio::Waveform& reconstructed,
                            const features::StftConfig& stft = {});

}  // namespace ruslan::vocoder
