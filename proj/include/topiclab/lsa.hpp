#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "topiclab/corpus.hpp"

namespace topiclab::lsa {

struct LsaModel {
  int k = 0;
  Eigen::VectorXd singular_values;  // k, non-increasing
  Eigen::MatrixXd term_loadings;    // k x m, orthonormal rows
  Eigen::MatrixXd doc_projections;  // n x k, U * Sigma
  std::uint64_t seed = 0;
  std::string vocab_hash;
};

struct SvdOptions {
  int oversampling = 10;
  int power_iterations = 2;
  /// Matrices with min(n, m) at or below this use a full dense SVD.
  Eigen::Index dense_threshold = 64;
};

struct TruncatedSvd {
  Eigen::MatrixXd u;  // n x k
  Eigen::VectorXd s;  // k
  Eigen::MatrixXd v;  // m x k
};

/// Rank-k SVD. Each right singular vector is signed so that its
/// largest-magnitude entry is positive (first such entry on ties), with the
/// matching left vector flipped alongside. Throws Error(Dimension).
TruncatedSvd truncated_svd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& x, int k,
                           std::uint64_t seed, const SvdOptions& options = {});
TruncatedSvd truncated_svd(const Eigen::MatrixXd& x, int k, std::uint64_t seed,
                           const SvdOptions& options = {});

LsaModel train_lsa(const corpus::SparseDocTermMatrix& x, int k, std::uint64_t seed,
                   const SvdOptions& options = {});

/// The n terms with the largest |loading|, descending, ties by ascending id.
std::vector<std::pair<corpus::TermId, double>> top_terms_lsa(const LsaModel& model, int topic,
                                                             std::size_t n);

}  // namespace topiclab::lsa
