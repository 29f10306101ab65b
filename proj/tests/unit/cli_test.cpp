#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ruslan/audio.hpp"
#include "ruslan/cli.hpp"
#include "ruslan/features.hpp"
#include "ruslan/phonemics.hpp"
#include "ruslan/vocoder.hpp"

using namespace ruslan;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = RUSLAN_TEST_DIR "/fixtures";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ruslan_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json(const Outcome& o, const std::string& schema) {
  const json doc = json::parse(o.out);
  CHECK(doc["schema"] == schema);
  return doc;
}

}  // namespace

TEST_CASE("stats on the fixture manifest") {
  const auto manifest = (kFixtures / "manifest.txt").string();
  const auto text = run({"stats", "--manifest", manifest});
  CHECK(text.code == cli::kOk);
  CHECK(text.out.find("Total symbols      14\n") != std::string::npos);
  CHECK(text.out.find("Unique words       3\n") != std::string::npos);

  const auto doc = parse_json(run({"--json", "stats", "--manifest", manifest}), "ruslan.stats/1");
  CHECK(doc["samples"] == 2);
  CHECK(doc["totalSymbols"] == 14);
  CHECK(doc["totalWords"] == 3);
  CHECK(doc["uniqueWords"] == 3);
  CHECK(doc["totalDurationSeconds"].get<double>() == doctest::Approx(1.61).epsilon(1e-9));

  const auto relative = run({"--root", kFixtures.string(), "--json", "stats", "--manifest", "manifest.txt", "--no-spaces"});
  CHECK(relative.code == cli::kOk);
  CHECK(json::parse(relative.out)["totalSymbols"] == 13);

  const auto dir = scratch("hist");
  CHECK(run({"stats", "--manifest", manifest, "--histograms", dir.string(), "--bins", "4"}).code == cli::kOk);
  CHECK(slurp(dir / "words.tsv").rfind("lower\tupper\tcount\n", 0) == 0);
}

TEST_CASE("validate reports a digit as one finding") {
  const auto dir = scratch("validate");
  std::ofstream(dir / "m.txt") << "utt_a|" << (kFixtures / "utt_a.wav").string() << "|Дом 5\n"
                               << "utt_b|" << (kFixtures / "utt_b.wav").string() << "|Да\n";
  const auto o = run({"validate", "--manifest", (dir / "m.txt").string()});
  CHECK(o.code == cli::kFindings);
  CHECK(o.out == "utt_a\tout-of-charset\t'5'\n");

  const auto doc = parse_json(run({"--json", "validate", "--manifest", (dir / "m.txt").string()}), "ruslan.validate/1");
  CHECK(doc["findings"].size() == 1);
  CHECK(run({"validate", "--manifest", (kFixtures / "manifest.txt").string()}).code == cli::kOk);
}

TEST_CASE("usage and data errors") {
  const auto unknown = run({"stats", "--manifest", "x", "--frobnicate"});
  CHECK(unknown.code == cli::kUsage);
  CHECK(unknown.err.find("--frobnicate") != std::string::npos);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"launch"}).code == cli::kUsage);
  CHECK(run({"stats"}).code == cli::kUsage);
  CHECK(run({"loss", "--pred", "a", "--target", "b", "--kind", "phase"}).code == cli::kUsage);
  CHECK(run({"g2p"}).code == cli::kUsage);
  const auto help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("copysynth") != std::string::npos);

  const auto missing = run({"stats", "--manifest", "/nonexistent/manifest.txt"});
  CHECK(missing.code == cli::kDataError);
  CHECK(missing.err.rfind("error: ", 0) == 0);
  CHECK(run({"copysynth", (kFixtures / "utt_a.wav").string(), "/tmp/x.wav", "--alpha", "1.5"}).code == cli::kDataError);
}

TEST_CASE("normalize and g2p") {
  const auto dir = scratch("normalize");
  std::ofstream(dir / "in.txt") << "Купил 3 книги в СССР\n1000000000000 рублей\nВсё!\n";
  const auto o = run({"normalize", "--in", (dir / "in.txt").string(), "--out", (dir / "out.txt").string(), "--acronyms",
                      (kFixtures / "acronyms.tsv").string()});
  CHECK(o.code == cli::kFindings);
  CHECK(o.err.rfind("line 2: ", 0) == 0);
  const auto normalized = slurp(dir / "out.txt");
  CHECK(normalized.find("Купил три книги в ") == 0);
  CHECK(normalized.find("Всё!\n") != std::string::npos);

  const auto g = run({"g2p", "привет мир"});
  CHECK(g.code == cli::kOk);
  CHECK(g.out == phon::transcribe("привет мир").to_string() + "\n");
  const auto doc = parse_json(run({"--json", "g2p", "--manifest", (kFixtures / "manifest.txt").string(), "--distribution",
                                   (dir / "dist.tsv").string()}),
                              "ruslan.g2p/1");
  CHECK(doc["items"].size() == 2);
  CHECK(fs::file_size(dir / "dist.tsv") > 0);
}

TEST_CASE("copysynth uses 300 iterations and alpha 0.99 and matches the vocoder") {
  const auto dir = scratch("copysynth");
  const auto input = (kFixtures / "utt_a.wav").string();
  const auto o = run({"--json", "copysynth", input, (dir / "y.wav").string()});
  CHECK(o.code == cli::kOk);
  const auto doc = parse_json(o, "ruslan.copysynth/1");
  CHECK(doc["iterations"] == 300);
  CHECK(doc["alpha"] == 0.99);
  CHECK(doc["seed"].is_null());

  const auto wave = audio::read_wav(input);
  const features::StftConfig cfg;
  auto direct = vocoder::griffin_lim(features::linear_spectrogram(wave, cfg), {}, cfg);
  direct.samples.resize(wave.samples.size());
  if (!doc["peakNormalized"].get<bool>()) CHECK(slurp(dir / "y.wav") == std::string(
                                                    reinterpret_cast<const char*>(audio::encode_wav(direct).data()),
                                                    audio::encode_wav(direct).size()));
  CHECK(doc["spectralConvergenceDb"].get<double>() ==
        vocoder::spectral_convergence(features::linear_spectrogram(wave, cfg), direct, cfg));

  const auto seeded = run({"copysynth", input, (dir / "z.wav").string(), "--iters", "5", "--seed", "9", "--trace",
                           (dir / "trace.tsv").string()});
  CHECK(seeded.code == cli::kOk);
  std::ifstream trace(dir / "trace.tsv");
  int lines = 0;
  for (std::string line; std::getline(trace, line);) ++lines;
  CHECK(lines == 1 + 6);
}

TEST_CASE("features and loss are thin adapters") {
  const auto dir = scratch("features");
  const auto o = run({"--json", "features", "--manifest", (kFixtures / "manifest.txt").string(), "--out-dir",
                      dir.string(), "--jobs", "2"});
  CHECK(o.code == cli::kOk);
  parse_json(o, "ruslan.features/1");

  const auto wave = audio::read_wav(kFixtures / "utt_b.wav");
  const auto lin = features::linear_spectrogram(wave);
  const auto mel = features::mel_spectrogram(lin);
  const auto as_string = [](const std::vector<std::uint8_t>& b) { return std::string(b.begin(), b.end()); };
  CHECK(slurp(dir / "utt_b.lin.rslf") == as_string(features::encode_rslf(lin.values)));
  CHECK(slurp(dir / "utt_b.mel.rslf") == as_string(features::encode_rslf(mel.values)));

  const auto a = features::read_rslf(dir / "utt_b.mel.rslf");
  auto shifted = a;
  for (auto& v : shifted.data) v += 0.25;
  features::write_rslf(dir / "shifted.rslf", shifted);
  const auto b = features::read_rslf(dir / "shifted.rslf");
  const auto loss = run({"loss", "--pred", (dir / "utt_b.mel.rslf").string(), "--target", (dir / "shifted.rslf").string()});
  CHECK(loss.code == cli::kOk);
  CHECK(std::stod(loss.out) == features::loss_mel({a, true}, {b, true}));
  const auto lin_doc = parse_json(run({"--json", "loss", "--kind", "lin", "--pred", (dir / "utt_b.lin.rslf").string(),
                                       "--target", (dir / "utt_b.lin.rslf").string()}),
                                  "ruslan.loss/1");
  CHECK(lin_doc["loss"] == 0.0);
  CHECK(run({"loss", "--pred", (dir / "utt_a.mel.rslf").string(), "--target", (dir / "utt_b.mel.rslf").string()}).code ==
        cli::kDataError);
}

TEST_CASE("gradcheck") {
  const auto o = run({"gradcheck", "--seed", "3"});
  CHECK(o.code == cli::kOk);
  CHECK(o.out.rfind("PASS embed", 0) == 0);
  const auto doc = parse_json(run({"--json", "gradcheck", "--op", "attention_weights"}), "ruslan.gradcheck/1");
  CHECK(doc["reports"].size() == 1);
  CHECK(doc["reports"][0]["pass"] == true);
  CHECK(run({"gradcheck", "--op", "conv"}).code == cli::kUsage);
}
