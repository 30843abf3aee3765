#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topiclab/preprocess.hpp"

namespace topiclab::embedding {

/// Skip-gram word vectors. Row i of `vectors` and `context` belongs to
/// tokens[i]; tokens are sorted.
struct EmbeddingTable {
  int dim = 0;
  std::vector<std::string> tokens;
  Eigen::MatrixXd vectors;  // V x dim, center ("input") vectors
  Eigen::MatrixXd context;  // V x dim, output vectors
  std::uint64_t seed = 0;

  std::optional<std::size_t> index(std::string_view token) const;
  /// Center vector of `token`, or nullopt when it is not embedded.
  std::optional<Eigen::VectorXd> vector(std::string_view token) const;

  std::unordered_map<std::string, std::size_t> lookup;
};

struct SgnsOptions {
  int dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;
};

/// Loss of one (center, context) pair with its negatives:
/// -ln s(u.v) - sum_n ln s(-u_n.v), s the logistic function.
double sgns_pair_loss(const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                      const std::vector<Eigen::VectorXd>& negatives);

struct PairGradient {
  Eigen::VectorXd d_center;
  Eigen::VectorXd d_context;
  std::vector<Eigen::VectorXd> d_negatives;
};

PairGradient sgns_pair_gradient(const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                                const std::vector<Eigen::VectorXd>& negatives);

/// Single-threaded SGD over every (center, context) pair within `window`
/// positions, negatives drawn from unigram^0.75. The learning rate decays
/// linearly to lr * 1e-4 over all epochs. Throws Error(EmptyCorpus).
EmbeddingTable train_sgns(const std::vector<preprocess::Tokens>& docs, const SgnsOptions& options,
                          std::uint64_t seed);

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace topiclab::embedding
