#include <string>

#include "ruslan/error.hpp"
#include "ruslan/features.hpp"
#include "ruslan/neural.hpp"

// Parameters are stored one RSLF file per tensor; vectors are 1 x n matrices.
namespace ruslan::neural {

namespace {

namespace fs = std::filesystem;

void put(const fs::path& dir, const char* name, const MatrixXd& m) {
  Matrix<double> out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
  }
  features::write_rslf(dir / (std::string(name) + ".rslf"), out);
}

void put(const fs::path& dir, const char* name, const VectorXd& v) { put(dir, name, MatrixXd(v.transpose())); }

MatrixXd get_matrix(const fs::path& dir, const char* name) {
  const auto m = features::read_rslf(dir / (std::string(name) + ".rslf"));
  MatrixXd out(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
  }
  return out;
}

VectorXd get_vector(const fs::path& dir, const char* name) {
  const MatrixXd m = get_matrix(dir, name);
  if (m.rows() != 1) throw Error(ErrorCode::ShapeMismatch, std::string(name) + " must be a 1 x n row");
  return m.row(0).transpose();
}

void prepare(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());
}

}  // namespace

void save_params(const fs::path& dir, const LnLstmParams& p) {
  p.validate();
  prepare(dir);
  put(dir, "W", p.W);
  put(dir, "U", p.U);
  put(dir, "b", p.b);
  put(dir, "gate_gain", p.gate_gain);
  put(dir, "gate_shift", p.gate_shift);
  put(dir, "cell_gain", p.cell_gain);
  put(dir, "cell_shift", p.cell_shift);
}

LnLstmParams load_lstm_params(const fs::path& dir) {
  LnLstmParams p{get_matrix(dir, "W"),          get_matrix(dir, "U"),         get_vector(dir, "b"),
                 get_vector(dir, "gate_gain"),  get_vector(dir, "gate_shift"), get_vector(dir, "cell_gain"),
                 get_vector(dir, "cell_shift")};
  p.validate();
  return p;
}

void save_params(const fs::path& dir, const AttentionParams& p) {
  p.validate();
  prepare(dir);
  put(dir, "query_proj", p.query_proj);
  put(dir, "memory_proj", p.memory_proj);
  put(dir, "score", p.score);
}

AttentionParams load_attention_params(const fs::path& dir) {
  AttentionParams p{get_matrix(dir, "query_proj"), get_matrix(dir, "memory_proj"), get_vector(dir, "score")};
  p.validate();
  return p;
}

void save_params(const fs::path& dir, const EmbeddingTable& t) {
  t.validate();
  prepare(dir);
  put(dir, "embedding", t.weights);
}

EmbeddingTable load_embedding(const fs::path& dir) {
  EmbeddingTable t{get_matrix(dir, "embedding")};
  t.validate();
  return t;
}

}  // namespace ruslan::neural
