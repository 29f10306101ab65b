#include <cmath>
#include <random>
#include <string>

#include "ruslan/error.hpp"
#include "ruslan/neural.hpp"

namespace ruslan::neural {

namespace {

std::string shape(const MatrixXd& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_rows(const MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::ShapeMismatch, std::string(name) + " is " + shape(m) + ", expected " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_size(const VectorXd& v, Eigen::Index n, const char* name) {
  if (v.size() != n) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(name) + " has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
  }
}

template <class M>
void require_finite(const M& m, const char* name) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFiniteInput, std::string(name) + " has a non-finite entry");
}

MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, scale);
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

VectorXd sigmoid(const VectorXd& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

}  // namespace

// ---------------------------------------------------------------------------
// Embedding

EmbeddingTable EmbeddingTable::random(std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  return {gaussian(kEmbeddingRows, kEmbeddingDim, scale, rng)};
}

void EmbeddingTable::validate() const {
  require_rows(weights, kEmbeddingRows, kEmbeddingDim, "embedding table");
  require_finite(weights, "embedding table");
}

MatrixXd embed(const std::vector<int>& ids, const EmbeddingTable& table) {
  require_rows(table.weights, kEmbeddingRows, kEmbeddingDim, "embedding table");
  MatrixXd out(static_cast<Eigen::Index>(ids.size()), kEmbeddingDim);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= kEmbeddingRows) {
      throw Error(ErrorCode::IndexOutOfRange, "id " + std::to_string(ids[i]) + " at position " + std::to_string(i));
    }
    out.row(static_cast<Eigen::Index>(i)) = table.weights.row(ids[i]);
  }
  require_finite(out, "embedding row");  // only the gathered rows; the full table is checked by validate()
  return out;
}

MatrixXd embed_backward(const std::vector<int>& ids, const MatrixXd& d_out) {
  require_rows(d_out, static_cast<Eigen::Index>(ids.size()), kEmbeddingDim, "embedding gradient");
  MatrixXd grad = MatrixXd::Zero(kEmbeddingRows, kEmbeddingDim);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= kEmbeddingRows) throw Error(ErrorCode::IndexOutOfRange, std::to_string(ids[i]));
    grad.row(ids[i]) += d_out.row(static_cast<Eigen::Index>(i));
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Layer normalization

LayerNorm layer_norm(const VectorXd& a) {
  LayerNorm ln;
  const double n = static_cast<double>(a.size());
  const VectorXd centered = a.array() - a.mean();
  const double var = centered.squaredNorm() / n;
  ln.floored = var < kLayerNormEpsilon;
  ln.inv_std = 1.0 / std::sqrt(ln.floored ? kLayerNormEpsilon : var);
  ln.normalized = centered * ln.inv_std;
  return ln;
}

VectorXd layer_norm_backward(const LayerNorm& ln, const VectorXd& dy) {
  const double n = static_cast<double>(dy.size());
  VectorXd d = dy.array() - dy.mean();
  // Above the floor the scale depends on the input; below it the scale is constant.
  if (!ln.floored) d -= ln.normalized * (dy.dot(ln.normalized) / n);
  return d * ln.inv_std;
}

// ---------------------------------------------------------------------------
// LN-LSTM

LnLstmParams LnLstmParams::init(int input_size, int hidden_size) {
  const int g = 4 * hidden_size;
  return {MatrixXd::Zero(g, input_size), MatrixXd::Zero(g, hidden_size), VectorXd::Zero(g), VectorXd::Ones(g),
          VectorXd::Zero(g), VectorXd::Ones(hidden_size), VectorXd::Zero(hidden_size)};
}

LnLstmParams LnLstmParams::random(int input_size, int hidden_size, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  const int g = 4 * hidden_size;
  LnLstmParams p;
  p.W = gaussian(g, input_size, scale, rng);
  p.U = gaussian(g, hidden_size, scale, rng);
  p.b = gaussian(g, 1, scale, rng);
  p.gate_gain = VectorXd::Ones(g) + gaussian(g, 1, 0.2, rng);
  p.gate_shift = gaussian(g, 1, scale, rng);
  p.cell_gain = VectorXd::Ones(hidden_size) + gaussian(hidden_size, 1, 0.2, rng);
  p.cell_shift = gaussian(hidden_size, 1, scale, rng);
  return p;
}

void LnLstmParams::validate() const {
  const auto H = U.cols();
  const auto D = W.cols();
  if (H <= 0) throw Error(ErrorCode::ShapeMismatch, "hidden size must be positive");
  require_rows(W, 4 * H, D, "W");
  require_rows(U, 4 * H, H, "U");
  require_size(b, 4 * H, "b");
  require_size(gate_gain, 4 * H, "gate gain");
  require_size(gate_shift, 4 * H, "gate shift");
  require_size(cell_gain, H, "cell gain");
  require_size(cell_shift, H, "cell shift");
  require_finite(W, "W");
  require_finite(U, "U");
  require_finite(b, "b");
  require_finite(gate_gain, "gate gain");
  require_finite(gate_shift, "gate shift");
  require_finite(cell_gain, "cell gain");
  require_finite(cell_shift, "cell shift");
}

LstmState ln_lstm_step(const VectorXd& x, const VectorXd& h_prev, const VectorXd& c_prev, const LnLstmParams& p,
                       LstmCache* cache) {
  p.validate();
  const Eigen::Index H = p.hidden_size();
  require_size(x, p.input_size(), "x");
  require_size(h_prev, H, "h");
  require_size(c_prev, H, "c");
  require_finite(x, "x");
  require_finite(h_prev, "h");
  require_finite(c_prev, "c");

  const VectorXd a = p.W * x + p.U * h_prev + p.b;
  std::vector<LayerNorm> lns;
  VectorXd z(4 * H);
  for (Eigen::Index k = 0; k < 4; ++k) {
    lns.push_back(layer_norm(a.segment(k * H, H)));
    z.segment(k * H, H) = p.gate_gain.segment(k * H, H).cwiseProduct(lns.back().normalized) +
                          p.gate_shift.segment(k * H, H);
  }
  const VectorXd i = sigmoid(z.segment(0, H));
  const VectorXd f = sigmoid(z.segment(H, H));
  const VectorXd o = sigmoid(z.segment(2 * H, H));
  const VectorXd g = z.segment(3 * H, H).array().tanh().matrix();

  LstmState s;
  s.c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
  LayerNorm cell = layer_norm(s.c);
  const VectorXd t = (p.cell_gain.cwiseProduct(cell.normalized) + p.cell_shift).array().tanh().matrix();
  s.h = o.cwiseProduct(t);

  if (cache) {
    *cache = {x, h_prev, c_prev, std::move(lns), i, f, o, g, std::move(cell), t};
  }
  return s;
}

LnLstmGrads ln_lstm_backward(const LstmCache& k, const LnLstmParams& p, const VectorXd& d_h, const VectorXd& d_c) {
  const Eigen::Index H = p.hidden_size();
  require_size(d_h, H, "dh");
  require_size(d_c, H, "dc");
  LnLstmGrads g;

  const VectorXd d_o = d_h.cwiseProduct(k.tanh_out);
  const VectorXd d_n = d_h.cwiseProduct(k.o).cwiseProduct((1.0 - k.tanh_out.array().square()).matrix());
  g.cell_gain = d_n.cwiseProduct(k.cell_ln.normalized);
  g.cell_shift = d_n;
  const VectorXd d_cell = d_c + layer_norm_backward(k.cell_ln, d_n.cwiseProduct(p.cell_gain));

  g.c_prev = d_cell.cwiseProduct(k.f);
  VectorXd d_z(4 * H);
  d_z.segment(0, H) = d_cell.cwiseProduct(k.g).cwiseProduct((k.i.array() * (1.0 - k.i.array())).matrix());
  d_z.segment(H, H) = d_cell.cwiseProduct(k.c_prev).cwiseProduct((k.f.array() * (1.0 - k.f.array())).matrix());
  d_z.segment(2 * H, H) = d_o.cwiseProduct((k.o.array() * (1.0 - k.o.array())).matrix());
  d_z.segment(3 * H, H) = d_cell.cwiseProduct(k.i).cwiseProduct((1.0 - k.g.array().square()).matrix());

  g.gate_gain.resize(4 * H);
  g.gate_shift = d_z;
  VectorXd d_a(4 * H);
  for (Eigen::Index b = 0; b < 4; ++b) {
    const auto& ln = k.gate_ln[static_cast<std::size_t>(b)];
    g.gate_gain.segment(b * H, H) = d_z.segment(b * H, H).cwiseProduct(ln.normalized);
    d_a.segment(b * H, H) = layer_norm_backward(ln, d_z.segment(b * H, H).cwiseProduct(p.gate_gain.segment(b * H, H)));
  }
  g.W = d_a * k.x.transpose();
  g.U = d_a * k.h_prev.transpose();
  g.b = d_a;
  g.x = p.W.transpose() * d_a;
  g.h_prev = p.U.transpose() * d_a;
  return g;
}

// ---------------------------------------------------------------------------
// Additive attention

AttentionParams AttentionParams::random(int query_size, int memory_size, int attention_size, std::uint64_t seed,
                                        double scale) {
  std::mt19937_64 rng(seed);
  AttentionParams p;
  p.query_proj = gaussian(attention_size, query_size, scale, rng);
  p.memory_proj = gaussian(attention_size, memory_size, scale, rng);
  p.score = gaussian(attention_size, 1, scale, rng);
  return p;
}

void AttentionParams::validate() const {
  const auto A = score.size();
  if (A <= 0) throw Error(ErrorCode::ShapeMismatch, "attention size must be positive");
  require_rows(query_proj, A, query_proj.cols(), "query projection");
  require_rows(memory_proj, A, memory_proj.cols(), "memory projection");
  require_finite(query_proj, "query projection");
  require_finite(memory_proj, "memory projection");
  require_finite(score, "score vector");
}

VectorXd softmax(const VectorXd& e) {
  const VectorXd ex = (e.array() - e.maxCoeff()).exp().matrix();
  return ex / ex.sum();
}

VectorXd attention_energies(const VectorXd& query, const MatrixXd& memory, const AttentionParams& p) {
  p.validate();
  if (memory.rows() == 0) throw Error(ErrorCode::EmptyMemory, "memory has no rows");
  require_size(query, p.query_proj.cols(), "query");
  require_rows(memory, memory.rows(), p.memory_proj.cols(), "memory");
  require_finite(query, "query");
  require_finite(memory, "memory");
  const VectorXd pq = p.query_proj * query;
  // Row t of `u` is (Pq q + Pm m_t)^T.
  const MatrixXd u = (memory * p.memory_proj.transpose()).rowwise() + pq.transpose();
  return u.array().tanh().matrix() * p.score;
}

VectorXd attention_weights(const VectorXd& query, const MatrixXd& memory, const AttentionParams& p) {
  return softmax(attention_energies(query, memory, p));
}

AttentionGrads attention_backward(const VectorXd& query, const MatrixXd& memory, const AttentionParams& p,
                                  const VectorXd& d_weights) {
  const VectorXd w = attention_weights(query, memory, p);
  require_size(d_weights, w.size(), "weight gradient");
  const VectorXd d_e = w.cwiseProduct((d_weights.array() - w.dot(d_weights)).matrix());
  const MatrixXd tanh_u =
      ((memory * p.memory_proj.transpose()).rowwise() + (p.query_proj * query).transpose()).array().tanh().matrix();
  // d_u(t, :) = d_e(t) * score^T (1 - tanh^2)
  const MatrixXd d_u =
      ((d_e * p.score.transpose()).array() * (1.0 - tanh_u.array().square())).matrix();

  AttentionGrads g;
  g.score = tanh_u.transpose() * d_e;
  g.query_proj = d_u.colwise().sum().transpose() * query.transpose();
  g.memory_proj = d_u.transpose() * memory;
  g.query = p.query_proj.transpose() * d_u.colwise().sum().transpose();
  g.memory = d_u * p.memory_proj;
  return g;
}

}  // namespace ruslan::neural
