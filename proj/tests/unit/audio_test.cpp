#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "ruslan/audio.hpp"
#include "ruslan/error.hpp"
#include "support/signals.hpp"

using namespace ruslan;
using namespace ruslan::audio;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("ruslan_audio_" + name); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("read the stdlib-generated 440 Hz fixture") {
  const auto w = read_wav(RUSLAN_TEST_DIR "/fixtures/sine440_1s.wav");
  CHECK(w.sample_rate == 44100);
  CHECK(w.samples.size() == 44100);
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  CHECK(peak >= 0.999);
  const auto info = read_wav_info(RUSLAN_TEST_DIR "/fixtures/sine440_1s.wav");
  CHECK(info.frames == 44100);
  CHECK(info.duration() == doctest::Approx(1.0));
}

TEST_CASE("unsupported and corrupt files") {
  CHECK(code_of([] { read_wav(RUSLAN_TEST_DIR "/fixtures/pcm8.wav"); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_wav(RUSLAN_TEST_DIR "/fixtures/stereo.wav"); }) == ErrorCode::UnsupportedFormat);
  const std::vector<std::uint8_t> junk = {'R', 'I', 'F', 'F', 0, 0, 0, 0, 'W', 'A', 'V', 'E', 'd', 'a', 't', 'a'};
  CHECK(code_of([&] { decode_wav(junk); }) == ErrorCode::CorruptFile);
  auto truncated = encode_wav(testing::sine(440, 0.01));
  truncated.resize(truncated.size() - 10);
  CHECK(code_of([&] { decode_wav(truncated); }) == ErrorCode::CorruptFile);
  CHECK(code_of([] { read_wav("/nonexistent/file.wav"); }) == ErrorCode::IoFailure);
}

TEST_CASE("write_wav layout and errors") {
  Waveform empty;
  const auto bytes = encode_wav(empty);
  CHECK(bytes.size() == 44);
  CHECK(decode_wav(bytes).samples.empty());

  Waveform bad;
  bad.samples = {0.0, 1.5};
  CHECK(code_of([&] { encode_wav(bad); }) == ErrorCode::OutOfRangeSample);
  bad.samples = {std::nan("")};
  CHECK(code_of([&] { encode_wav(bad); }) == ErrorCode::OutOfRangeSample);

  // Canonical header: byte rate and block align for 44.1 kHz mono PCM16.
  const auto one = encode_wav(testing::sine(440, 0.001));
  CHECK(one[20] == 1);
  CHECK(one[22] == 1);
  CHECK((one[28] | one[29] << 8 | one[30] << 16) == 88200);
  CHECK(one[32] == 2);
  CHECK(one[34] == 16);
}

TEST_CASE("round trip within one quantization step") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto path = temp_path("roundtrip.wav");
  for (int trial = 0; trial < 20; ++trial) {
    Waveform w;
    w.samples.resize(1000 + rng() % 5000);
    for (auto& s : w.samples) s = u(rng);
    w.samples[0] = 1.0;
    w.samples[1] = -1.0;
    write_wav(w, path);
    const auto r = read_wav(path);
    REQUIRE(r.samples.size() == w.samples.size());
    for (std::size_t i = 0; i < w.samples.size(); ++i) CHECK(std::abs(r.samples[i] - w.samples[i]) <= 1.0 / 32768.0);
  }
  fs::remove(path);
}

TEST_CASE("trim_silence") {
  const TrimConfig cfg;  // -50 dB, 20 ms
  const auto tone = testing::sine(440, 1.0, 0.5);
  CHECK(trim_silence(tone, cfg).samples == tone.samples);

  const auto padded = testing::concat({testing::silence(0.5), tone, testing::silence(0.5)});
  const auto trimmed = trim_silence(padded, cfg);
  const double window = 0.020 * 44100;
  CHECK(std::abs(static_cast<double>(trimmed.samples.size()) - 44100.0) <= window);
  const auto [begin, end] = voiced_bounds(padded, cfg);
  CHECK(std::equal(trimmed.samples.begin(), trimmed.samples.end(), padded.samples.begin() + static_cast<long>(begin)));
  CHECK(end <= padded.samples.size());

  // Off-grid boundaries stay within one window on each side.
  const auto offgrid = testing::concat({testing::silence(0.3071), tone, testing::silence(0.2219)});
  const auto [b2, e2] = voiced_bounds(offgrid, cfg);
  const double onset = 0.3071 * 44100;
  CHECK(static_cast<double>(b2) <= onset);
  CHECK(onset - static_cast<double>(b2) <= window);
  CHECK(static_cast<double>(e2) >= onset + 44100 - 1);
  CHECK(static_cast<double>(e2) - (onset + 44100) <= window);

  CHECK(code_of([] { trim_silence(testing::silence(1.0)); }) == ErrorCode::EmptyAfterTrim);
  CHECK(code_of([&] { trim_silence(tone, {+3.0, 20.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("estimate_snr") {
  // 0.2 s noise | 3.6 s sine + noise | 0.2 s noise: the lowest 10% of 20 ms
  // windows are exactly the noise-only windows.
  auto w = testing::concat({testing::silence(0.2), testing::sine(441.0, 3.6), testing::silence(0.2)});
  testing::add_noise(w, 1e-3, 99);
  const double expected = 10.0 * std::log10(0.5 / 1e-6);
  const double snr = estimate_snr(w, {0.1, 20.0});
  CHECK(std::abs(snr - expected) <= 1.0);

  SUBCASE("gain invariant") {
    auto louder = w;
    for (auto& s : louder.samples) s *= 0.37;
    CHECK(estimate_snr(louder, {0.1, 20.0}) == doctest::Approx(snr).epsilon(1e-9));
  }
  SUBCASE("digital silence between tones is degenerate") {
    const auto clean = testing::concat({testing::silence(0.2), testing::sine(441.0, 3.6), testing::silence(0.2)});
    CHECK(code_of([&] { estimate_snr(clean); }) == ErrorCode::DegenerateSignal);
  }
  CHECK(code_of([&] { estimate_snr(w, {0.6, 20.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { estimate_snr(Waveform{}); }) == ErrorCode::InvalidArgument);
}
