#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace ruslan::mos {

enum class Kind { Real, Synthesized };
enum class Axis { Naturalness, Intelligibility };

std::string_view to_string(Kind k);
std::string_view to_string(Axis a);
std::optional<Axis> parse_axis(std::string_view s);

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;

struct ScaleLevel {
  int score;
  const char* quality;
  const char* distortions;
};
/// The five-point scale shown to respondents, best first.
const std::array<ScaleLevel, 5>& scale();

struct PoolEntry {
  std::string sample_id;
  std::filesystem::path audio_path;
  Kind kind;
};

struct PoolCounts {
  std::size_t real = 9;
  std::size_t synthesized = 11;
};

struct SamplePool {
  std::vector<PoolEntry> entries;

  /// JSON document {"samples": [{"sampleId", "audio", "kind"}]}; audio paths
  /// are relative to the pool file's directory.
  static SamplePool load(const std::filesystem::path& path);

  const PoolEntry* find(std::string_view sample_id) const;
  /// PoolInvalid on duplicate or empty ids, ids that name a kind, or counts other than `counts`.
  void validate(const PoolCounts& counts = {}) const;
};

/// Seeded Fisher-Yates permutation of the pool's sample ids. The generator and
/// the bounded draw are spelled out so orders are stable across standard libraries.
std::vector<std::string> create_survey(const SamplePool& pool, std::uint64_t seed,
                                       const PoolCounts& counts = {});

struct Rating {
  std::string respondent_id;
  std::string sample_id;
  Axis axis = Axis::Naturalness;
  int score = 0;
  std::int64_t timestamp_ms = 0;

  using Key = std::tuple<std::string, std::string, Axis>;
  Key key() const { return {respondent_id, sample_id, axis}; }
};

/// UnknownSample / ScoreOutOfRange.
void check_rating(const Rating& r, const SamplePool& pool);

/// Last write wins per (respondent, sample, axis), in the given order.
std::map<Rating::Key, Rating> materialize(const std::vector<Rating>& log);

struct MosCell {
  std::size_t count = 0;
  double sum = 0.0;
  std::optional<double> mean() const;
};

struct MosReport {
  std::map<std::pair<Kind, Axis>, MosCell> cells;

  const MosCell& cell(Kind k, Axis a) const;
  /// "4.83 / 4.87": naturalness then intelligibility, "-" for empty cells.
  std::string row(Kind k) const;
  /// Type / Naturalness / Intelligibility table with two-decimal means.
  std::string table() const;
};

/// Mean per (kind, axis) over ratings whose sample is in the pool.
MosReport aggregate(const std::vector<Rating>& ratings, const SamplePool& pool);
template <class Map>
MosReport aggregate_view(const Map& view, const SamplePool& pool) {
  std::vector<Rating> flat;
  flat.reserve(view.size());
  for (const auto& [key, r] : view) flat.push_back(r);
  return aggregate(flat, pool);
}

std::string format_score(double mean);  // "%.2f"

struct Survey {
  std::string survey_id;
  std::string token;
  std::string respondent_id;
  std::uint64_t seed = 0;
  std::vector<std::string> order;
};

/// Survey bookkeeping and rating persistence. surveys.jsonl and ratings.jsonl
/// in the data directory are append-only logs replayed on construction; all
/// writes go through one mutex, while reads take an immutable snapshot.
class MosStore {
 public:
  MosStore(SamplePool pool, std::filesystem::path data_dir, PoolCounts counts = {});

  Survey create_survey(std::optional<std::uint64_t> seed = std::nullopt);
  /// Returns the materialized rating. Unauthorized for an unknown token.
  Rating submit(const std::string& token, const std::string& sample_id, Axis axis, int score);

  std::optional<Survey> survey_for_token(const std::string& token) const;
  MosReport report() const;
  std::size_t rating_count() const;
  const SamplePool& pool() const { return pool_; }

 private:
  struct View {
    std::map<std::string, Survey> by_token;
    std::map<Rating::Key, Rating> ratings;
  };
  std::shared_ptr<const View> snapshot() const;
  void publish(std::shared_ptr<const View> v);
  void append(const std::filesystem::path& file, const std::string& line);

  SamplePool pool_;
  std::filesystem::path data_dir_;
  PoolCounts counts_;
  std::mutex write_mutex_;
  std::shared_ptr<const View> view_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string admin_token;
};

class HttpServer {
 public:
  HttpServer(MosStore& store, ServerConfig cfg);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and returns the bound port; serving starts with run() or start().
  int bind();
  void run();    // blocks until stop()
  void start();  // serves on a background thread
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ruslan::mos
