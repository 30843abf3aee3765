#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "topiclab/corpus.hpp"

namespace topiclab::nmf {

struct NmfOptions {
  int max_iters = 500;
  /// Stop once the relative objective decrease of one iteration drops below tol.
  double tol = 1e-5;
  double eps = 1e-9;
};

struct NmfModel {
  int k = 0;
  Eigen::MatrixXd w;  // n x k
  Eigen::MatrixXd h;  // k x m, rows sum to 1 after training
  /// 0.5 * ||V - WH||_F^2 after each iteration.
  std::vector<double> objective_trace;
  std::uint64_t seed = 0;
  int n_iters = 0;
  std::string vocab_hash;
};

/// Lee-Seung multiplicative updates for the Frobenius objective, H then W
/// each iteration, from seeded uniform(0,1) factors. Afterwards each H row is
/// scaled to sum 1 and the scale is folded into W.
/// Throws Error(NegativeInput) or Error(Dimension).
NmfModel train_nmf(const Eigen::MatrixXd& v, int k, std::uint64_t seed,
                   const NmfOptions& options = {});
NmfModel train_nmf(const Eigen::SparseMatrix<double, Eigen::RowMajor>& v, int k,
                   std::uint64_t seed, const NmfOptions& options = {});
NmfModel train_nmf(const corpus::SparseDocTermMatrix& v, int k, std::uint64_t seed,
                   const NmfOptions& options = {});

/// The n largest entries of H's row, descending, ties by ascending id.
std::vector<std::pair<corpus::TermId, double>> top_terms_nmf(const NmfModel& model, int topic,
                                                             std::size_t n);

/// Number of distinct terms that appear in the top-n lists of two or more
/// topics. Many repeats suggest k is too large.
std::size_t shared_top_terms(const NmfModel& model, std::size_t n = 10);

}  // namespace topiclab::nmf
