#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "ruslan/error.hpp"
#include "ruslan/features.hpp"
#include "support/signals.hpp"

using namespace ruslan;
using namespace ruslan::features;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

// Largest |x - y| over samples that at least two frames cover fully.
double interior_error(const std::vector<double>& x, const std::vector<double>& y, const StftConfig& cfg) {
  const std::size_t margin = cfg.center ? 0 : cfg.win_length;
  double worst = 0.0;
  for (std::size_t i = margin; i + margin < std::min(x.size(), y.size()); ++i) {
    worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

Matrix<double> random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix<double> m(r, c);
  for (auto& v : m.data) v = g(rng);
  return m;
}

}  // namespace

TEST_CASE("config validation and frame counts") {
  StftConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.frame_count(44100) == 1 + 44100 / 512);
  cfg.center = false;
  CHECK(cfg.frame_count(44100) == 1 + (44100 - 2048) / 512);
  CHECK(code_of([&] { cfg.frame_count(2047); }) == ErrorCode::SignalTooShort);
  CHECK(code_of([&] { stft(std::vector<double>(100, 0.0), cfg); }) == ErrorCode::SignalTooShort);

  CHECK(code_of([] { StftConfig{1000, 1000, 250}.validate(); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { StftConfig{1024, 2048, 512}.validate(); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { StftConfig{2048, 1024, 2048}.validate(); }) == ErrorCode::InvalidConfig);
  // hop == win leaves the zero of the periodic Hann window uncovered.
  CHECK(code_of([] { StftConfig{1024, 1024, 1024}.validate(); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { istft(ComplexMatrix(3, 5), StftConfig{}); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("impulse: every bin's magnitude is the window sample at the impulse offset") {
  StftConfig cfg{256, 256, 64, WindowKind::Hann, false};
  const auto w = analysis_window(cfg);
  std::vector<double> x(1024, 0.0);
  const std::size_t p = 333;
  x[p] = 1.0;
  const auto spec = stft(x, cfg);
  for (std::size_t t = 0; t < spec.rows; ++t) {
    const std::size_t start = t * cfg.hop_length;
    const double expected = (p >= start && p < start + cfg.win_length) ? w[p - start] : 0.0;
    for (std::size_t k = 0; k < spec.cols; ++k) CHECK(std::abs(spec(t, k)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("zero signal and zero matrix") {
  const StftConfig cfg;
  const auto spec = stft(std::vector<double>(5000, 0.0), cfg);
  for (const auto& v : spec.data) CHECK(v == std::complex<double>(0.0, 0.0));
  const auto y = istft(ComplexMatrix(10, cfg.bins()), cfg);
  CHECK(y.size() == 9 * 512);
  for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("440 Hz sine peaks at bin 20") {
  const auto lin = linear_spectrogram(testing::sine(440.0, 1.0));
  CHECK(lin.values.cols == 1025);
  for (std::size_t t = 4; t + 4 < lin.values.rows; ++t) {
    const double* row = lin.values.row(t);
    CHECK(std::max_element(row, row + lin.values.cols) - row == 20);
  }
  for (double v : lin.values.data) CHECK((v >= 0.0 && std::isfinite(v)));
}

TEST_CASE("istft inverts stft on interior samples") {
  const std::vector<StftConfig> configs = {
      {}, {2048, 2048, 512, WindowKind::Hann, false}, {1024, 800, 200, WindowKind::Hann, true}, {512, 512, 128, WindowKind::Hann, false}};
  for (const auto& cfg : configs) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto x = noise(44100, seed);
      const auto y = istft(stft(x, cfg), cfg, x.size());
      CHECK(interior_error(x, y, cfg) <= 1e-6);
    }
  }
  const auto speech = testing::speech_like(3.0);
  const StftConfig cfg;
  const auto y = istft(stft(speech, cfg), cfg, speech.samples.size());
  CHECK(interior_error(speech.samples, y, cfg) <= 1e-6);
  CHECK(istft(stft(speech, cfg), cfg).size() == cfg.signal_length(cfg.frame_count(speech.samples.size())));
}

TEST_CASE("Parseval: spectrogram energy equals windowed-frame energy") {
  const StftConfig cfg{1024, 1024, 256, WindowKind::Hann, false};
  const auto w = analysis_window(cfg);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = noise(20000, seed + 100);
    const auto spec = stft(x, cfg);
    double freq = 0.0;
    for (std::size_t t = 0; t < spec.rows; ++t) {
      for (std::size_t k = 0; k < spec.cols; ++k) {
        const double weight = (k == 0 || k == spec.cols - 1) ? 1.0 : 2.0;
        freq += weight * std::norm(spec(t, k));
      }
    }
    freq /= static_cast<double>(cfg.fft_size);
    double time = 0.0;
    for (std::size_t t = 0; t < spec.rows; ++t) {
      for (std::size_t i = 0; i < cfg.win_length; ++i) time += std::pow(w[i] * x[t * cfg.hop_length + i], 2);
    }
    CHECK(std::abs(freq - time) / time <= 1e-6);
  }
}

TEST_CASE("mel filterbank geometry") {
  const auto fb = mel_filterbank(44100, 2048);
  CHECK(fb.rows == 80);
  CHECK(fb.cols == 1025);
  // Every bin strictly inside (fMin, fMax) receives weight.
  for (std::size_t k = 1; k + 1 < fb.cols; ++k) {
    double total = 0.0;
    for (std::size_t m = 0; m < fb.rows; ++m) total += fb(m, k);
    CHECK(total > 0.0);
  }
  const auto narrow = mel_filterbank(16000, 512, {40, 300.0, 4000.0});
  CHECK(narrow.rows == 40);
  for (std::size_t k = 0; k < narrow.cols; ++k) {
    const double f = k * 16000.0 / 512.0;
    double total = 0.0;
    for (std::size_t m = 0; m < narrow.rows; ++m) total += narrow(m, k);
    if (f > 300.0 && f < 4000.0) CHECK(total > 0.0);
    if (f <= 300.0 || f >= 4000.0) CHECK(total == 0.0);
  }
  CHECK(code_of([] { mel_filterbank(44100, 2048, {80, 5000.0, 1000.0}); }) == ErrorCode::InvalidBandRange);
  CHECK(code_of([] { mel_filterbank(44100, 2048, {80, 0.0, 30000.0}); }) == ErrorCode::InvalidBandRange);
  CHECK(hz_to_mel(mel_to_hz(1234.5)) == doctest::Approx(1234.5));
  CHECK(hz_to_mel(1000.0) == doctest::Approx(999.99).epsilon(1e-4));
}

TEST_CASE("mel spectrogram") {
  LinearSpectrogram lin;
  lin.values = Matrix<double>(4, 1025, 0.0);
  const auto zero = mel_spectrogram(lin);
  CHECK(zero.values.cols == 80);
  CHECK(zero.log_compressed);
  for (double v : zero.values.data) CHECK(v == std::log(1e-5));

  for (std::size_t bin : {1u, 7u, 100u, 512u, 1023u}) {
    LinearSpectrogram one;
    one.values = Matrix<double>(1, 1025, 0.0);
    one.values(0, bin) = 1.0;
    const auto mel = mel_spectrogram(one, {80, 0.0, 22050.0, false});
    int nonzero = 0;
    for (double v : mel.values.data) nonzero += v != 0.0;
    CHECK(nonzero >= 1);
    CHECK(nonzero <= 2);
  }
}

TEST_CASE("L1 losses") {
  MelSpectrogram a, b;
  a.values = Matrix<double>(5, 80, 2.0);
  b.values = Matrix<double>(5, 80, 3.0);
  CHECK(loss_mel(a, a) == 0.0);
  CHECK(loss_mel(a, b) == 1.0);
  b.values = Matrix<double>(4, 80, 3.0);
  CHECK(code_of([&] { loss_mel(a, b); }) == ErrorCode::ShapeMismatch);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng() % 6;
    const auto x = random_matrix(rows, 80, rng);
    const auto y = random_matrix(rows, 80, rng);
    const auto z = random_matrix(rows, 80, rng);
    double brute = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < 80; ++c) brute += std::fabs(x(r, c) - y(r, c));
    }
    brute /= static_cast<double>(rows * 80);
    const double dxy = mean_abs_difference(x, y);
    CHECK(std::abs(dxy - brute) <= 1e-12);
    CHECK(dxy == mean_abs_difference(y, x));
    CHECK(dxy > 0.0);
    CHECK(mean_abs_difference(x, z) <= dxy + mean_abs_difference(y, z) + 1e-12);
  }

  LinearSpectrogram p, q;
  p.values = Matrix<double>(3, 1025, 1.0);
  q.values = Matrix<double>(3, 1025, 1.5);
  CHECK(loss_lin(p, q) == 0.5);
}

TEST_CASE("loss_total") {
  CHECK(loss_total(0.0, 0.0).total_loss == 0.0);
  CHECK(loss_total(0.3, 0.7).total_loss == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng);
    const auto r = loss_total(a, b);
    CHECK(r.total_loss == a + b);
    CHECK(r.mel_loss == a);
    CHECK(r.lin_loss == b);
  }
  CHECK(code_of([] { loss_total(-0.1, 1.0); }) == ErrorCode::NegativeLoss);
  CHECK(code_of([] { loss_total(1.0, std::nan("")); }) == ErrorCode::NegativeLoss);
}

TEST_CASE("RSLF container") {
  std::mt19937_64 rng(11);
  const auto m = random_matrix(7, 80, rng);
  const auto bytes = encode_rslf(m);
  CHECK(bytes.size() == 16 + 7 * 80 * 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RSLF");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 7);
  CHECK(bytes[12] == 80);
  const auto back = decode_rslf(bytes);
  REQUIRE(back.same_shape(m));
  for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(back.data[i] == static_cast<double>(static_cast<float>(m.data[i])));

  const auto path = std::filesystem::temp_directory_path() / "ruslan_features.rslf";
  write_rslf(path, m);
  CHECK(read_rslf(path) == back);
  std::filesystem::remove(path);

  auto bad = bytes;
  bad[4] = 2;
  CHECK(code_of([&] { decode_rslf(bad); }) == ErrorCode::UnsupportedFormat);
  bad = bytes;
  bad.pop_back();
  CHECK(code_of([&] { decode_rslf(bad); }) == ErrorCode::CorruptFile);
  bad[0] = 'X';
  CHECK(code_of([&] { decode_rslf(bad); }) == ErrorCode::CorruptFile);
}
