#include "topiclab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "topiclab/error.hpp"

namespace topiclab::embedding {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ln s(x) without overflow for large |x|.
double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

}  // namespace

std::optional<std::size_t> EmbeddingTable::index(std::string_view token) const {
  const auto it = lookup.find(std::string(token));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

std::optional<Eigen::VectorXd> EmbeddingTable::vector(std::string_view token) const {
  const auto i = index(token);
  if (!i) return std::nullopt;
  return Eigen::VectorXd(vectors.row(static_cast<Eigen::Index>(*i)).transpose());
}

double sgns_pair_loss(const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                      const std::vector<Eigen::VectorXd>& negatives) {
  double loss = -log_sigmoid(u.dot(v));
  for (const auto& n : negatives) loss -= log_sigmoid(-n.dot(v));
  return loss;
}

PairGradient sgns_pair_gradient(const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                                const std::vector<Eigen::VectorXd>& negatives) {
  PairGradient g;
  const double c_pos = sigmoid(u.dot(v)) - 1.0;
  g.d_center = c_pos * u;
  g.d_context = c_pos * v;
  for (const auto& n : negatives) {
    const double c_neg = sigmoid(n.dot(v));
    g.d_center += c_neg * n;
    g.d_negatives.push_back(c_neg * v);
  }
  return g;
}

EmbeddingTable train_sgns(const std::vector<preprocess::Tokens>& docs, const SgnsOptions& options,
                          std::uint64_t seed) {
  if (options.dim < 1 || options.window < 1 || options.negatives < 0 || options.epochs < 1 ||
      !(options.lr > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid SGNS options");
  }
  std::map<std::string, std::uint64_t> counts;
  std::size_t total_tokens = 0;
  for (const auto& doc : docs) {
    for (const auto& t : doc) ++counts[t];
    total_tokens += doc.size();
  }
  if (counts.empty()) throw Error(ErrorCode::EmptyCorpus, "no tokens to embed");

  EmbeddingTable table;
  table.dim = options.dim;
  table.seed = seed;
  std::vector<double> noise_cdf;
  double acc = 0.0;
  for (const auto& [token, count] : counts) {
    table.lookup.emplace(token, table.tokens.size());
    table.tokens.push_back(token);
    acc += std::pow(static_cast<double>(count), 0.75);
    noise_cdf.push_back(acc);
  }
  const auto V = static_cast<Eigen::Index>(table.tokens.size());
  const Eigen::Index dim = options.dim;

  std::vector<std::vector<Eigen::Index>> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) {
    auto& row = ids.emplace_back();
    for (const auto& t : doc) row.push_back(static_cast<Eigen::Index>(table.lookup.at(t)));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMatrix in(V, dim);
  RowMatrix out = RowMatrix::Zero(V, dim);
  const double half = 0.5 / static_cast<double>(dim);
  for (Eigen::Index i = 0; i < V; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) in(i, j) = (unif(rng) * 2.0 - 1.0) * half;
  }

  auto draw_negative = [&]() {
    const double r = unif(rng) * noise_cdf.back();
    const auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), r);
    return static_cast<Eigen::Index>(std::min<std::ptrdiff_t>(it - noise_cdf.begin(), V - 1));
  };

  const double steps = static_cast<double>(total_tokens) * options.epochs;
  double processed = 0.0;
  Eigen::VectorXd grad_v(dim);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (const auto& doc : ids) {
      const auto len = static_cast<std::ptrdiff_t>(doc.size());
      for (std::ptrdiff_t c = 0; c < len; ++c) {
        const double lr = options.lr * std::max(1e-4, 1.0 - processed / steps);
        processed += 1.0;
        const Eigen::Index center = doc[static_cast<std::size_t>(c)];
        const auto lo = std::max<std::ptrdiff_t>(0, c - options.window);
        const auto hi = std::min<std::ptrdiff_t>(len - 1, c + options.window);
        for (std::ptrdiff_t p = lo; p <= hi; ++p) {
          if (p == c) continue;
          const Eigen::Index ctx = doc[static_cast<std::size_t>(p)];
          auto v = in.row(center);
          grad_v.setZero();
          // Same coefficients as sgns_pair_gradient.
          const double c_pos = sigmoid(out.row(ctx).dot(v)) - 1.0;
          grad_v += c_pos * out.row(ctx).transpose();
          out.row(ctx) -= lr * c_pos * v;
          for (int n = 0; n < options.negatives; ++n) {
            const Eigen::Index neg = draw_negative();
            if (neg == ctx) continue;
            const double c_neg = sigmoid(out.row(neg).dot(v));
            grad_v += c_neg * out.row(neg).transpose();
            out.row(neg) -= lr * c_neg * v;
          }
          in.row(center) -= lr * grad_v.transpose();
        }
      }
    }
  }
  table.vectors = in;
  table.context = out;
  return table;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace topiclab::embedding
