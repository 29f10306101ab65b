#include "ruslan/mos.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ruslan/error.hpp"

namespace ruslan::mos {

namespace {

using nlohmann::json;

// Unbiased draw from [0, n) by rejecting the short top range.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t r = rng();
  while (r < threshold) r = rng();
  return r % n;
}

std::string random_hex(std::size_t bytes) {
  static std::mutex m;
  static std::random_device rd;
  const std::lock_guard lock(m);
  std::string out;
  char buf[3];
  for (std::size_t i = 0; i < bytes; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", static_cast<unsigned>(rd() & 0xFF));
    out += buf;
  }
  return out;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

json rating_json(const Rating& r) {
  return {{"respondentId", r.respondent_id}, {"sampleId", r.sample_id}, {"axis", to_string(r.axis)},
          {"score", r.score}, {"timestamp", r.timestamp_ms}};
}

Rating rating_from_json(const json& j) {
  Rating r;
  r.respondent_id = j.at("respondentId").get<std::string>();
  r.sample_id = j.at("sampleId").get<std::string>();
  const auto axis = parse_axis(j.at("axis").get<std::string>());
  if (!axis) throw Error(ErrorCode::CorruptFile, "unknown axis in rating log");
  r.axis = *axis;
  r.score = j.at("score").get<int>();
  r.timestamp_ms = j.at("timestamp").get<std::int64_t>();
  return r;
}

json survey_json(const Survey& s) {
  return {{"surveyId", s.survey_id}, {"token", s.token}, {"respondentId", s.respondent_id},
          {"seed", s.seed}, {"order", s.order}};
}

Survey survey_from_json(const json& j) {
  return {j.at("surveyId").get<std::string>(), j.at("token").get<std::string>(),
          j.at("respondentId").get<std::string>(), j.at("seed").get<std::uint64_t>(),
          j.at("order").get<std::vector<std::string>>()};
}

// Replays a JSON-lines log. A torn last line (crash during append) is ignored;
// damage anywhere else is an error.
template <class F>
void replay(const std::filesystem::path& file, F&& apply) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      apply(json::parse(lines[i]));
    } catch (const std::exception& e) {
      if (i + 1 == lines.size()) break;
      throw Error(ErrorCode::CorruptFile, file.string() + " line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

}  // namespace

std::string_view to_string(Kind k) { return k == Kind::Real ? "real" : "synthesized"; }
std::string_view to_string(Axis a) { return a == Axis::Naturalness ? "naturalness" : "intelligibility"; }

std::optional<Axis> parse_axis(std::string_view s) {
  if (s == "naturalness") return Axis::Naturalness;
  if (s == "intelligibility") return Axis::Intelligibility;
  return std::nullopt;
}

const std::array<ScaleLevel, 5>& scale() {
  static const std::array<ScaleLevel, 5> kScale = {{
      {5, "Excellent", "Imperceptible"},
      {4, "Good", "Tangible, but non-irritating"},
      {3, "Fair", "Sensible and slightly annoying"},
      {2, "Poor", "Annoying"},
      {1, "Bad", "Annoying and unpleasant"},
  }};
  return kScale;
}

SamplePool SamplePool::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open pool " + path.string());
  SamplePool pool;
  try {
    const json doc = json::parse(in);
    for (const auto& s : doc.at("samples")) {
      const auto kind = s.at("kind").get<std::string>();
      if (kind != "real" && kind != "synthesized") throw Error(ErrorCode::PoolInvalid, "kind '" + kind + "'");
      pool.entries.push_back({s.at("sampleId").get<std::string>(),
                              path.parent_path() / s.at("audio").get<std::string>(),
                              kind == "real" ? Kind::Real : Kind::Synthesized});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::PoolInvalid, path.string() + ": " + e.what());
  }
  return pool;
}

const PoolEntry* SamplePool::find(std::string_view sample_id) const {
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const PoolEntry& e) { return e.sample_id == sample_id; });
  return it == entries.end() ? nullptr : &*it;
}

void SamplePool::validate(const PoolCounts& counts) const {
  std::set<std::string> ids;
  std::size_t real = 0;
  for (const auto& e : entries) {
    if (e.sample_id.empty()) throw Error(ErrorCode::PoolInvalid, "empty sample id");
    const auto id = lower(e.sample_id);
    // Respondents see sample ids, so an id must not give the kind away.
    for (const char* word : {"real", "synth", "tts", "orig"}) {
      if (id.find(word) != std::string::npos) {
        throw Error(ErrorCode::PoolInvalid, "sample id '" + e.sample_id + "' hints at its kind");
      }
    }
    for (char c : e.sample_id) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
        throw Error(ErrorCode::PoolInvalid, "sample id '" + e.sample_id + "' must be [A-Za-z0-9_-]");
      }
    }
    if (!ids.insert(e.sample_id).second) throw Error(ErrorCode::PoolInvalid, "duplicate sample id " + e.sample_id);
    real += e.kind == Kind::Real;
  }
  const std::size_t synthesized = entries.size() - real;
  if (real != counts.real || synthesized != counts.synthesized) {
    throw Error(ErrorCode::PoolInvalid, "pool has " + std::to_string(real) + " real and " +
                                            std::to_string(synthesized) + " synthesized samples, expected " +
                                            std::to_string(counts.real) + " and " + std::to_string(counts.synthesized));
  }
}

std::vector<std::string> create_survey(const SamplePool& pool, std::uint64_t seed, const PoolCounts& counts) {
  pool.validate(counts);
  std::vector<std::string> order;
  order.reserve(pool.entries.size());
  for (const auto& e : pool.entries) order.push_back(e.sample_id);
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[bounded(rng, i)]);
  }
  return order;
}

void check_rating(const Rating& r, const SamplePool& pool) {
  if (!pool.find(r.sample_id)) throw Error(ErrorCode::UnknownSample, "no sample '" + r.sample_id + "'");
  if (r.score < kMinScore || r.score > kMaxScore) {
    throw Error(ErrorCode::ScoreOutOfRange, "score " + std::to_string(r.score) + " outside 1..5");
  }
}

std::map<Rating::Key, Rating> materialize(const std::vector<Rating>& log) {
  std::map<Rating::Key, Rating> view;
  for (const auto& r : log) view[r.key()] = r;
  return view;
}

std::optional<double> MosCell::mean() const {
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

const MosCell& MosReport::cell(Kind k, Axis a) const {
  static const MosCell kEmpty;
  const auto it = cells.find({k, a});
  return it == cells.end() ? kEmpty : it->second;
}

std::string format_score(double mean) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", mean);
  return buf;
}

std::string MosReport::row(Kind k) const {
  auto render = [&](Axis a) {
    const auto m = cell(k, a).mean();
    return m ? format_score(*m) : std::string("-");
  };
  return render(Axis::Naturalness) + " / " + render(Axis::Intelligibility);
}

std::string MosReport::table() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-20s%-13s%s\n", "Type", "Naturalness", "Intelligibility");
  out += line;
  for (const auto& [kind, label] : {std::pair{Kind::Real, "Real speech"}, {Kind::Synthesized, "Synthesized speech"}}) {
    const auto n = cell(kind, Axis::Naturalness).mean();
    const auto i = cell(kind, Axis::Intelligibility).mean();
    std::snprintf(line, sizeof line, "%-20s%-13s%s\n", label, n ? format_score(*n).c_str() : "-",
                  i ? format_score(*i).c_str() : "-");
    out += line;
  }
  return out;
}

MosReport aggregate(const std::vector<Rating>& ratings, const SamplePool& pool) {
  MosReport report;
  for (Kind k : {Kind::Real, Kind::Synthesized}) {
    for (Axis a : {Axis::Naturalness, Axis::Intelligibility}) report.cells[{k, a}] = {};
  }
  // Integer score sums are exact, so the mean does not depend on rating order.
  std::map<std::pair<Kind, Axis>, long long> sums;
  for (const auto& r : ratings) {
    const auto* entry = pool.find(r.sample_id);
    if (!entry) continue;
    auto& cell = report.cells[{entry->kind, r.axis}];
    ++cell.count;
    sums[{entry->kind, r.axis}] += r.score;
  }
  for (auto& [key, cell] : report.cells) cell.sum = static_cast<double>(sums[key]);
  return report;
}

// ---------------------------------------------------------------------------
// Store

MosStore::MosStore(SamplePool pool, std::filesystem::path data_dir, PoolCounts counts)
    : pool_(std::move(pool)), data_dir_(std::move(data_dir)), counts_(counts) {
  pool_.validate(counts_);
  std::error_code ec;
  std::filesystem::create_directories(data_dir_, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + data_dir_.string());
  auto view = std::make_shared<View>();
  replay(data_dir_ / "surveys.jsonl", [&](const json& j) {
    auto s = survey_from_json(j);
    view->by_token[s.token] = std::move(s);
  });
  replay(data_dir_ / "ratings.jsonl", [&](const json& j) {
    auto r = rating_from_json(j);
    view->ratings[r.key()] = std::move(r);
  });
  view_ = std::move(view);
}

std::shared_ptr<const MosStore::View> MosStore::snapshot() const { return std::atomic_load(&view_); }
void MosStore::publish(std::shared_ptr<const View> v) { std::atomic_store(&view_, std::move(v)); }

void MosStore::append(const std::filesystem::path& file, const std::string& line) {
  std::ofstream out(file, std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot append to " + file.string());
}

Survey MosStore::create_survey(std::optional<std::uint64_t> seed) {
  Survey s;
  s.survey_id = random_hex(8);
  s.token = random_hex(16);
  s.respondent_id = "resp-" + s.survey_id;
  if (seed) {
    s.seed = *seed;
  } else {
    const auto hex = random_hex(8);
    s.seed = std::stoull(hex, nullptr, 16);
  }
  s.order = mos::create_survey(pool_, s.seed, counts_);

  const std::lock_guard lock(write_mutex_);
  append(data_dir_ / "surveys.jsonl", survey_json(s).dump());
  auto next = std::make_shared<View>(*snapshot());
  next->by_token[s.token] = s;
  publish(std::move(next));
  return s;
}

Rating MosStore::submit(const std::string& token, const std::string& sample_id, Axis axis, int score) {
  const auto survey = survey_for_token(token);
  if (!survey) throw Error(ErrorCode::Unauthorized, "unknown respondent token");
  Rating r{survey->respondent_id, sample_id, axis, score, now_ms()};
  check_rating(r, pool_);

  const std::lock_guard lock(write_mutex_);
  const auto current = snapshot();
  if (const auto it = current->ratings.find(r.key()); it != current->ratings.end() && it->second.score == score) {
    return it->second;  // identical resubmission: nothing new to record
  }
  append(data_dir_ / "ratings.jsonl", rating_json(r).dump());
  auto next = std::make_shared<View>(*current);
  next->ratings[r.key()] = r;
  publish(std::move(next));
  return r;
}

std::optional<Survey> MosStore::survey_for_token(const std::string& token) const {
  const auto view = snapshot();
  const auto it = view->by_token.find(token);
  if (it == view->by_token.end()) return std::nullopt;
  return it->second;
}

MosReport MosStore::report() const { return aggregate_view(snapshot()->ratings, pool_); }

std::size_t MosStore::rating_count() const { return snapshot()->ratings.size(); }

}  // namespace ruslan::mos
