#include "ruslan/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ruslan/audio.hpp"
#include "ruslan/corpus.hpp"
#include "ruslan/error.hpp"
#include "ruslan/features.hpp"
#include "ruslan/mos.hpp"
#include "ruslan/neural.hpp"
#include "ruslan/phonemics.hpp"
#include "ruslan/textnorm.hpp"
#include "ruslan/vocoder.hpp"

namespace ruslan::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Io {
  std::ostream& out;
  std::ostream& err;
  fs::path root;
  bool json = false;

  fs::path path(const std::string& p) const {
    const fs::path given(p);
    return given.is_absolute() || root.empty() ? given : root / given;
  }
};

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string read_all(std::istream& in) {
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const Io& io, const std::string& schema, json body) {
  json doc = {{"schema", schema}};
  doc.update(body);
  io.out << doc.dump(2) << '\n';
}

text::AcronymLexicon lexicon_or_empty(const Io& io, const std::string& file) {
  return file.empty() ? text::AcronymLexicon{} : text::AcronymLexicon::load(io.path(file));
}

text::Charset charset_or_standard(const Io& io, const std::string& file) {
  return file.empty() ? text::Charset::standard() : text::Charset::load(io.path(file));
}

// Flags shared by the spectral subcommands.
struct SpectralFlags {
  std::size_t fft = 2048, hop = 512, win = 2048;

  void add(CLI::App* cmd) {
    cmd->add_option("--fft", fft, "FFT size")->capture_default_str();
    cmd->add_option("--hop", hop, "hop length in samples")->capture_default_str();
    cmd->add_option("--win", win, "window length in samples")->capture_default_str();
  }
  features::StftConfig config() const {
    features::StftConfig cfg;
    cfg.fft_size = fft;
    cfg.hop_length = hop;
    cfg.win_length = win;
    cfg.validate();
    return cfg;
  }
};

int cmd_normalize(const Io& io, const std::string& in_file, const std::string& out_file, const std::string& acronyms) {
  const auto lexicon = lexicon_or_empty(io, acronyms);
  std::string input;
  if (in_file.empty() || in_file == "-") {
    input = read_all(std::cin);
  } else {
    std::ifstream in(io.path(in_file), std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + io.path(in_file).string());
    input = read_all(in);
  }

  std::ostringstream result;
  json failures = json::array();
  std::istringstream lines(input);
  std::size_t line_no = 0;
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      result << text::normalize(line, lexicon) << '\n';
    } catch (const Error& e) {
      io.err << "line " << line_no << ": " << e.what() << '\n';
      failures.push_back({{"line", line_no}, {"error", to_string(e.code())}, {"message", e.what()}});
    }
  }

  if (out_file.empty() || out_file == "-") {
    if (io.json) {
      emit(io, "ruslan.normalize/1", {{"text", result.str()}, {"failures", failures}});
    } else {
      io.out << result.str();
    }
  } else {
    std::ofstream out(io.path(out_file), std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + io.path(out_file).string());
    out << result.str();
    if (io.json) emit(io, "ruslan.normalize/1", {{"lines", line_no}, {"failures", failures}});
  }
  return failures.empty() ? kOk : kFindings;
}

json phones_json(const phon::PhonemeString& p) { return p.words; }

int cmd_g2p(const Io& io, const std::string& text_arg, const std::string& manifest, const std::string& distribution) {
  if (text_arg.empty() == manifest.empty()) throw CLI::ValidationError("g2p", "give either TEXT or --manifest");
  if (!text_arg.empty()) {
    const auto p = phon::transcribe(text_arg);
    if (io.json) {
      emit(io, "ruslan.g2p/1", {{"items", json::array({{{"text", text_arg}, {"phonemes", phones_json(p)}}})}});
    } else {
      io.out << p.to_string() << '\n';
    }
    return kOk;
  }

  const auto corpus = corpus::load_manifest(io.path(manifest));
  json items = json::array();
  std::vector<std::string> texts;
  for (const auto& u : corpus.utterances) {
    const auto p = phon::transcribe(u.text);
    texts.push_back(u.text);
    if (io.json) {
      items.push_back({{"id", u.id}, {"phonemes", phones_json(p)}});
    } else {
      io.out << u.id << '\t' << p.to_string() << '\n';
    }
  }
  if (!distribution.empty()) phon::write_distribution(io.path(distribution), phon::phoneme_distribution(texts));
  if (io.json) emit(io, "ruslan.g2p/1", {{"items", items}});
  return kOk;
}

void write_histogram(const fs::path& file, const corpus::Histogram& h) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
  out << "lower\tupper\tcount\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << fmt(h.edges[i], "%.6g") << '\t' << fmt(h.edges[i + 1], "%.6g") << '\t' << h.counts[i] << '\n';
  }
}

int cmd_stats(const Io& io, const std::string& manifest, bool no_spaces, const std::string& hist_dir, std::size_t bins) {
  const auto corpus = corpus::load_manifest(io.path(manifest));
  const corpus::CountingRule rule{!no_spaces};
  const auto s = corpus::compute_stats(corpus, rule);

  if (!hist_dir.empty()) {
    const auto dir = io.path(hist_dir);
    fs::create_directories(dir);
    write_histogram(dir / "duration.tsv", corpus::histogram(corpus, corpus::HistogramAxis::Duration, bins, rule));
    write_histogram(dir / "symbols.tsv", corpus::histogram(corpus, corpus::HistogramAxis::Symbols, bins, rule));
    write_histogram(dir / "words.tsv", corpus::histogram(corpus, corpus::HistogramAxis::Words, bins, rule));
  }

  if (io.json) {
    emit(io, "ruslan.stats/1",
         {{"samples", s.sample_count},
          {"totalDurationSeconds", s.total_duration},
          {"totalDuration", corpus::format_hms(s.total_duration)},
          {"totalSymbols", s.total_symbols},
          {"totalWords", s.total_words},
          {"uniqueWords", s.unique_words},
          {"averageWords", s.average_words()},
          {"countSpaces", rule.count_spaces},
          {"duration", {{"min", s.min_duration}, {"max", s.max_duration}}},
          {"symbols", {{"min", s.min_symbols}, {"max", s.max_symbols}}},
          {"words", {{"min", s.min_words}, {"max", s.max_words}}}});
    return kOk;
  }
  io.out << "Samples            " << s.sample_count << '\n'
         << "Total duration     " << corpus::format_hms(s.total_duration) << '\n'
         << "Total symbols      " << s.total_symbols << '\n'
         << "Total words        " << s.total_words << '\n'
         << "Unique words       " << s.unique_words << '\n'
         << "Words per sample   " << fmt(s.average_words(), "%.2f") << '\n'
         << "Duration min/max   " << fmt(s.min_duration, "%.3f") << " / " << fmt(s.max_duration, "%.3f") << " s\n"
         << "Symbols min/max    " << s.min_symbols << " / " << s.max_symbols << '\n'
         << "Words min/max      " << s.min_words << " / " << s.max_words << '\n';
  return kOk;
}

int cmd_validate(const Io& io, const std::string& manifest, const std::string& charset, const std::string& acronyms) {
  const auto corpus = corpus::load_manifest(io.path(manifest));
  const auto findings = corpus::validate(corpus, charset_or_standard(io, charset), lexicon_or_empty(io, acronyms));
  if (io.json) {
    json list = json::array();
    for (const auto& f : findings) list.push_back({{"id", f.id}, {"kind", corpus::to_string(f.kind)}, {"detail", f.detail}});
    emit(io, "ruslan.validate/1", {{"utterances", corpus.size()}, {"findings", list}});
  } else {
    for (const auto& f : findings) io.out << f.id << '\t' << corpus::to_string(f.kind) << '\t' << f.detail << '\n';
    io.err << corpus.size() << " utterances, " << findings.size() << " findings\n";
  }
  return findings.empty() ? kOk : kFindings;
}

int cmd_features(const Io& io, const std::string& manifest, const std::string& out_dir, const SpectralFlags& flags,
                 std::size_t mels, std::optional<double> f_max, unsigned jobs) {
  const auto cfg = flags.config();
  const auto corpus = corpus::load_manifest(io.path(manifest));
  const auto dir = io.path(out_dir);
  fs::create_directories(dir);

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      try {
        const auto& u = corpus.utterances[i];
        const auto wave = audio::read_wav(u.resolved_audio);
        features::MelConfig mel;
        mel.bands = mels;
        mel.f_max = f_max.value_or(wave.sample_rate / 2.0);
        const auto lin = features::linear_spectrogram(wave, cfg);
        features::write_rslf(dir / (u.id + ".lin.rslf"), lin.values);
        features::write_rslf(dir / (u.id + ".mel.rslf"), features::mel_spectrogram(lin, mel).values);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = corpus.size();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(corpus.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (io.json) {
    emit(io, "ruslan.features/1",
         {{"utterances", corpus.size()},
          {"outDir", dir.string()},
          {"fft", cfg.fft_size},
          {"hop", cfg.hop_length},
          {"win", cfg.win_length},
          {"mels", mels}});
  } else {
    io.out << "wrote features for " << corpus.size() << " utterances to " << dir.string() << '\n';
  }
  return kOk;
}

int cmd_copysynth(const Io& io, const std::string& in_file, const std::string& out_file, const SpectralFlags& flags,
                  const vocoder::GriffinLimConfig& gl, const std::string& trace_file) {
  const auto cfg = flags.config();
  gl.validate();
  const auto wave = audio::read_wav(io.path(in_file));
  const auto target = features::linear_spectrogram(wave, cfg);
  std::vector<double> trace;
  auto y = vocoder::griffin_lim(target, gl, cfg, trace_file.empty() ? nullptr : &trace);
  y.samples.resize(wave.samples.size(), 0.0);
  const double sc = vocoder::spectral_convergence(target, y, cfg);

  double peak = 0.0;
  for (double v : y.samples) peak = std::max(peak, std::abs(v));
  const double limit = 32767.0 / 32768.0;
  if (peak > limit) {
    const double g = limit / peak;
    for (double& v : y.samples) v *= g;
    io.err << "note: output peak " << fmt(peak, "%.4f") << " normalized to " << fmt(limit, "%.4f") << '\n';
  }
  audio::write_wav(y, io.path(out_file));
  if (!trace_file.empty()) {
    std::ofstream t(io.path(trace_file));
    if (!t) throw Error(ErrorCode::IoFailure, "cannot write " + io.path(trace_file).string());
    t << "iteration\tspectral_convergence_db\n";
    for (std::size_t i = 0; i < trace.size(); ++i) t << i << '\t' << fmt(trace[i], "%.6f") << '\n';
  }

  if (io.json) {
    emit(io, "ruslan.copysynth/1",
         {{"iterations", gl.iterations},
          {"alpha", gl.alpha},
          {"seed", gl.init == vocoder::InitPhase::SeededRandom ? json(gl.seed) : json(nullptr)},
          {"spectralConvergenceDb", sc},
          {"peakNormalized", peak > limit}});
  } else {
    io.out << "spectral convergence " << fmt(sc, "%.2f") << " dB after " << gl.iterations << " iterations\n";
  }
  return kOk;
}

int cmd_loss(const Io& io, const std::string& pred, const std::string& target, const std::string& kind) {
  const auto p = features::read_rslf(io.path(pred));
  const auto t = features::read_rslf(io.path(target));
  const double value = kind == "mel" ? features::loss_mel({p, true}, {t, true})
                                     : features::loss_lin({p, audio::kCorpusSampleRate, (p.cols - 1) * 2},
                                                          {t, audio::kCorpusSampleRate, (t.cols - 1) * 2});
  if (io.json) {
    emit(io, "ruslan.loss/1", {{"kind", kind}, {"loss", value}, {"rows", p.rows}, {"cols", p.cols}});
  } else {
    io.out << fmt(value, "%.17g") << '\n';
  }
  return kOk;
}

int cmd_gradcheck(const Io& io, std::uint64_t seed, const std::vector<std::string>& ops, double eps) {
  json reports = json::array();
  bool all_pass = true;
  for (const auto& op : ops) {
    const auto r = neural::grad_check(op, seed, eps);
    const bool pass = r.max_relative_error <= neural::kGradCheckFloor;
    all_pass = all_pass && pass;
    if (io.json) {
      json tensors = json::object();
      for (const auto& [name, e] : r.tensors) tensors[name] = e;
      reports.push_back({{"op", r.op}, {"maxRelativeError", r.max_relative_error}, {"pass", pass}, {"tensors", tensors}});
    } else {
      io.out << (pass ? "PASS " : "FAIL ") << r.op << " max relative error " << fmt(r.max_relative_error, "%.3e")
             << '\n';
    }
  }
  if (io.json) {
    emit(io, "ruslan.gradcheck/1",
         {{"seed", seed}, {"eps", eps}, {"threshold", neural::kGradCheckFloor}, {"reports", reports}});
  }
  return all_pass ? kOk : kFindings;
}

int cmd_mos_serve(const Io& io, const std::string& host, int port, const std::string& data, const std::string& pool_file,
                  std::string admin_token) {
  const auto data_dir = io.path(data);
  const auto pool = mos::SamplePool::load(pool_file.empty() ? data_dir / "pool.json" : io.path(pool_file));
  mos::MosStore store(pool, data_dir);
  if (admin_token.empty()) {
    std::random_device rd;
    std::ostringstream s;
    for (int i = 0; i < 4; ++i) s << std::hex << rd();
    admin_token = s.str();
    io.err << "admin token: " << admin_token << '\n';
  }
  mos::HttpServer server(store, {host, port, admin_token});
  const int bound = server.bind();
  io.err << "serving on http://" << host << ':' << bound << '\n';
  server.run();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Russian single-speaker TTS corpus and pipeline tools", "ruslan"};
  app.require_subcommand(1);
  Io io{out, err, {}, false};

  std::string root;
  if (const char* env = std::getenv("RUSLAN_DATA")) root = env;
  app.add_option("--root", root, "base directory for relative paths (default: $RUSLAN_DATA or the current directory)");
  app.add_flag("--json", io.json, "machine-readable output");

  std::string in_file, out_file, acronyms, manifest, charset, text_arg, distribution, hist_dir;
  std::string out_dir, pred, target, kind = "mel", trace_file, data, pool_file, admin_token, host = "127.0.0.1";
  bool no_spaces = false;
  std::size_t bins = 20, mels = 80;
  std::optional<double> f_max;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  SpectralFlags spectral;
  vocoder::GriffinLimConfig gl;
  std::optional<std::uint64_t> gl_seed;
  std::uint64_t seed = 0;
  std::vector<std::string> ops = {"embed", "ln_lstm_step", "attention_weights"};
  double eps = 1e-5;
  int port = 8080;

  auto* normalize = app.add_subcommand("normalize", "normalize text line by line");
  normalize->add_option("--in", in_file, "input file (default: stdin)");
  normalize->add_option("--out", out_file, "output file (default: stdout)");
  normalize->add_option("--acronyms", acronyms, "acronym lexicon (TSV)");

  auto* g2p = app.add_subcommand("g2p", "transcribe normalized text to phonemes");
  g2p->add_option("text", text_arg, "normalized text");
  g2p->add_option("--manifest", manifest, "transcribe every utterance of a manifest");
  g2p->add_option("--distribution", distribution, "write the phoneme frequency table here")->needs("--manifest");

  auto* stats = app.add_subcommand("stats", "corpus statistics");
  stats->add_option("--manifest", manifest, "manifest file")->required();
  stats->add_flag("--no-spaces", no_spaces, "do not count spaces as symbols");
  stats->add_option("--histograms", hist_dir, "write duration/symbol/word histograms to this directory");
  stats->add_option("--bins", bins, "histogram bins")->capture_default_str()->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check a corpus for text and audio problems");
  validate->add_option("--manifest", manifest, "manifest file")->required();
  validate->add_option("--charset", charset, "charset file (default: built-in 78 symbols)");
  validate->add_option("--acronyms", acronyms, "acronym lexicon (TSV)");

  auto* feats = app.add_subcommand("features", "extract linear and mel spectrograms");
  feats->add_option("--manifest", manifest, "manifest file")->required();
  feats->add_option("--out-dir", out_dir, "output directory")->required();
  spectral.add(feats);
  feats->add_option("--mels", mels, "mel bands")->capture_default_str()->check(CLI::PositiveNumber);
  feats->add_option("--fmax", f_max, "upper mel edge in Hz (default: Nyquist)");
  feats->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* copysynth = app.add_subcommand("copysynth", "resynthesize a recording from its magnitude spectrogram");
  copysynth->add_option("input", in_file, "input WAV")->required();
  copysynth->add_option("output", out_file, "output WAV")->required();
  copysynth->add_option("--iters", gl.iterations, "Griffin-Lim iterations")->capture_default_str();
  copysynth->add_option("--alpha", gl.alpha, "momentum")->capture_default_str();
  copysynth->add_option("--seed", gl_seed, "random initial phase with this seed (default: zero phase)");
  copysynth->add_option("--trace", trace_file, "write per-iteration spectral convergence here");
  spectral.add(copysynth);

  auto* loss = app.add_subcommand("loss", "L1 loss between two spectrogram files");
  loss->add_option("--pred", pred, "predicted spectrogram (RSLF)")->required();
  loss->add_option("--target", target, "target spectrogram (RSLF)")->required();
  loss->add_option("--kind", kind, "mel or lin")->capture_default_str()->check(CLI::IsMember({"mel", "lin"}));

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  gradcheck->add_option("--seed", seed, "parameter seed")->capture_default_str();
  gradcheck->add_option("--op", ops, "operation(s) to check")
      ->check(CLI::IsMember({"embed", "ln_lstm_step", "attention_weights"}));
  gradcheck->add_option("--eps", eps, "central difference step")->capture_default_str();

  auto* serve = app.add_subcommand("mos-serve", "run the listening-test server");
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "port (0 picks a free one)")->capture_default_str();
  serve->add_option("--data", data, "directory for survey and rating logs")->required();
  serve->add_option("--pool", pool_file, "sample pool JSON (default: DATA/pool.json)");
  serve->add_option("--admin-token", admin_token, "bearer token for /report (default: random, printed)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  io.root = root;
  if (gl_seed) {
    gl.init = vocoder::InitPhase::SeededRandom;
    gl.seed = *gl_seed;
  }

  try {
    if (*normalize) return cmd_normalize(io, in_file, out_file, acronyms);
    if (*g2p) return cmd_g2p(io, text_arg, manifest, distribution);
    if (*stats) return cmd_stats(io, manifest, no_spaces, hist_dir, bins);
    if (*validate) return cmd_validate(io, manifest, charset, acronyms);
    if (*feats) return cmd_features(io, manifest, out_dir, spectral, mels, f_max, jobs);
    if (*copysynth) return cmd_copysynth(io, in_file, out_file, spectral, gl, trace_file);
    if (*loss) return cmd_loss(io, pred, target, kind);
    if (*gradcheck) return cmd_gradcheck(io, seed, ops, eps);
    if (*serve) return cmd_mos_serve(io, host, port, data, pool_file, admin_token);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace ruslan::cli
