#include <cmath>
#include <functional>
#include <random>

#include "ruslan/error.hpp"
#include "ruslan/neural.hpp"

namespace ruslan::neural {

namespace {

struct Probe {
  std::string name;
  double* values;           // perturbed in place
  const double* analytic;   // gradient of the loss with respect to `values`
  Eigen::Index size;
};

template <class M>
Probe probe(std::string name, M& values, const M& grad) {
  if (values.size() != grad.size()) throw Error(ErrorCode::ShapeMismatch, "gradient shape for " + name);
  return {std::move(name), values.data(), grad.data(), values.size()};
}

double relative_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), kGradCheckFloor});
}

void run(GradCheckReport& report, std::vector<Probe> probes, const std::function<double()>& loss) {
  for (auto& p : probes) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.size; ++i) {
      const double saved = p.values[i];
      p.values[i] = saved + report.eps;
      const double up = loss();
      p.values[i] = saved - report.eps;
      const double down = loss();
      p.values[i] = saved;
      worst = std::max(worst, relative_error(p.analytic[i], (up - down) / (2.0 * report.eps)));
    }
    report.tensors.emplace_back(p.name, worst);
    report.max_relative_error = std::max(report.max_relative_error, worst);
  }
}

VectorXd normal_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXd v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

// Values k/2^shift keep every product and sum in the embed check exact.
double dyadic(std::mt19937_64& rng, int range, int shift) {
  std::uniform_int_distribution<int> k(-range, range);
  return std::ldexp(static_cast<double>(k(rng)), -shift);
}

void check_embed(GradCheckReport& report, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Snap eps to a power of two so that theta +/- eps is exact.
  report.eps = std::exp2(std::round(std::log2(report.eps)));
  EmbeddingTable table;
  for (auto& w : table.weights.reshaped()) w = dyadic(rng, 64, 6);
  std::uniform_int_distribution<int> id(0, kEmbeddingRows - 1);
  std::vector<int> ids(6);
  for (auto& i : ids) i = id(rng);
  ids.push_back(ids.front());  // a repeated id accumulates gradient
  MatrixXd coeff(static_cast<Eigen::Index>(ids.size()), kEmbeddingDim);
  for (auto& c : coeff.reshaped()) c = dyadic(rng, 8, 3);
  const MatrixXd grad = embed_backward(ids, coeff);
  run(report, {probe("table", table.weights, grad)},
      [&] { return embed(ids, table).cwiseProduct(coeff).sum(); });
}

void check_lstm(GradCheckReport& report, std::uint64_t seed) {
  constexpr int D = 3, H = 4;
  std::mt19937_64 rng(seed);
  LnLstmParams p = LnLstmParams::random(D, H, rng());
  VectorXd x = normal_vector(D, rng), h = normal_vector(H, rng), c = normal_vector(H, rng);
  const VectorXd rh = normal_vector(H, rng), rc = normal_vector(H, rng);
  LstmCache cache;
  ln_lstm_step(x, h, c, p, &cache);
  const LnLstmGrads g = ln_lstm_backward(cache, p, rh, rc);
  run(report,
      {probe("W", p.W, g.W), probe("U", p.U, g.U), probe("b", p.b, g.b), probe("gate_gain", p.gate_gain, g.gate_gain),
       probe("gate_shift", p.gate_shift, g.gate_shift), probe("cell_gain", p.cell_gain, g.cell_gain),
       probe("cell_shift", p.cell_shift, g.cell_shift), probe("x", x, g.x), probe("h_prev", h, g.h_prev),
       probe("c_prev", c, g.c_prev)},
      [&] {
        const auto s = ln_lstm_step(x, h, c, p);
        return rh.dot(s.h) + rc.dot(s.c);
      });
}

void check_attention(GradCheckReport& report, std::uint64_t seed) {
  constexpr int Q = 5, M = 6, A = 4, T = 7;
  std::mt19937_64 rng(seed);
  AttentionParams p = AttentionParams::random(Q, M, A, rng(), 1.0);
  VectorXd query = normal_vector(Q, rng);
  MatrixXd memory = normal_vector(T * M, rng).reshaped(T, M);
  const VectorXd r = normal_vector(T, rng);
  const AttentionGrads g = attention_backward(query, memory, p, r);
  run(report,
      {probe("query_proj", p.query_proj, g.query_proj), probe("memory_proj", p.memory_proj, g.memory_proj),
       probe("score", p.score, g.score), probe("query", query, g.query), probe("memory", memory, g.memory)},
      [&] { return r.dot(attention_weights(query, memory, p)); });
}

}  // namespace

GradCheckReport grad_check(const std::string& op, std::uint64_t seed, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) throw Error(ErrorCode::InvalidArgument, "eps must lie in [1e-7, 1e-3]");
  GradCheckReport report;
  report.op = op;
  report.eps = eps;
  if (op == "embed") {
    check_embed(report, seed);
  } else if (op == "ln_lstm_step") {
    check_lstm(report, seed);
  } else if (op == "attention_weights") {
    check_attention(report, seed);
  } else {
    throw Error(ErrorCode::UnknownOp, "no gradient check for '" + op + "'");
  }
  return report;
}

}  // namespace ruslan::neural
