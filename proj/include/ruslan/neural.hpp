#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ruslan::neural {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr int kEmbeddingRows = 78;
inline constexpr int kEmbeddingDim = 256;
inline constexpr double kLayerNormEpsilon = 1e-5;

struct EmbeddingTable {
  MatrixXd weights = MatrixXd::Zero(kEmbeddingRows, kEmbeddingDim);

  static EmbeddingTable random(std::uint64_t seed, double scale = 0.1);
  void validate() const;  // exact 78 x 256 shape, finite entries
};

/// Row gather: output row i is table row ids[i].
MatrixXd embed(const std::vector<int>& ids, const EmbeddingTable& table);
/// Gradient of a loss with respect to the table, given the gradient of the gathered rows.
MatrixXd embed_backward(const std::vector<int>& ids, const MatrixXd& d_out);

/// Zero mean, unit variance; the variance is floored at kLayerNormEpsilon so a
/// constant block maps to zeros instead of dividing by zero.
struct LayerNorm {
  VectorXd normalized;
  double inv_std = 0.0;
  bool floored = false;
};
LayerNorm layer_norm(const VectorXd& a);
VectorXd layer_norm_backward(const LayerNorm& ln, const VectorXd& d_normalized);

/// Gate blocks are stacked in the order input, forget, output, candidate.
struct LnLstmParams {
  MatrixXd W;  // 4H x D
  MatrixXd U;  // 4H x H
  VectorXd b;  // 4H
  VectorXd gate_gain, gate_shift;  // 4H
  VectorXd cell_gain, cell_shift;  // H

  static LnLstmParams init(int input_size, int hidden_size);  // zero weights, unit gains
  static LnLstmParams random(int input_size, int hidden_size, std::uint64_t seed, double scale = 0.5);

  int input_size() const { return static_cast<int>(W.cols()); }
  int hidden_size() const { return static_cast<int>(U.cols()); }
  void validate() const;  // ShapeMismatch / NonFiniteInput
};

struct LstmState {
  VectorXd h;
  VectorXd c;
};

/// Values kept from the forward pass for ln_lstm_backward.
struct LstmCache {
  VectorXd x, h_prev, c_prev;
  std::vector<LayerNorm> gate_ln;  // one per block
  VectorXd i, f, o, g;
  LayerNorm cell_ln;
  VectorXd tanh_out;
};

struct LnLstmGrads {
  MatrixXd W, U;
  VectorXd b, gate_gain, gate_shift, cell_gain, cell_shift;
  VectorXd x, h_prev, c_prev;
};

LstmState ln_lstm_step(const VectorXd& x, const VectorXd& h_prev, const VectorXd& c_prev, const LnLstmParams& p,
                       LstmCache* cache = nullptr);
LnLstmGrads ln_lstm_backward(const LstmCache& cache, const LnLstmParams& p, const VectorXd& d_h,
                             const VectorXd& d_c);

struct AttentionParams {
  MatrixXd query_proj;   // A x Q
  MatrixXd memory_proj;  // A x M
  VectorXd score;        // A

  static AttentionParams random(int query_size, int memory_size, int attention_size, std::uint64_t seed,
                                double scale = 0.5);
  void validate() const;
};

struct AttentionGrads {
  MatrixXd query_proj, memory_proj;
  VectorXd score;
  VectorXd query;
  MatrixXd memory;
};

/// Numerically stable softmax.
VectorXd softmax(const VectorXd& e);
/// Additive energies e_t = score . tanh(Pq q + Pm m_t), one per memory row.
VectorXd attention_energies(const VectorXd& query, const MatrixXd& memory, const AttentionParams& p);
VectorXd attention_weights(const VectorXd& query, const MatrixXd& memory, const AttentionParams& p);
AttentionGrads attention_backward(const VectorXd& query, const MatrixXd& memory, const AttentionParams& p,
                                  const VectorXd& d_weights);

struct GradCheckReport {
  std::string op;
  double eps = 0.0;
  std::vector<std::pair<std::string, double>> tensors;  // per-tensor max relative error
  double max_relative_error = 0.0;
};

/// Relative error |a - n| / max(|a|, |n|, floor); the floor keeps gradients
/// that are zero up to rounding from reporting spurious large ratios.
inline constexpr double kGradCheckFloor = 1e-6;

/// Central-difference check of every parameter and input tensor of `op`
/// ("embed", "ln_lstm_step" or "attention_weights") on a random instance
/// drawn from `seed`, under a fixed random linear loss.
GradCheckReport grad_check(const std::string& op, std::uint64_t seed, double eps = 1e-5);

void save_params(const std::filesystem::path& dir, const LnLstmParams& p);
LnLstmParams load_lstm_params(const std::filesystem::path& dir);
void save_params(const std::filesystem::path& dir, const AttentionParams& p);
AttentionParams load_attention_params(const std::filesystem::path& dir);
void save_params(const std::filesystem::path& dir, const EmbeddingTable& t);
EmbeddingTable load_embedding(const std::filesystem::path& dir);

}  // namespace ruslan::neural
