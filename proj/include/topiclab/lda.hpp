#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "topiclab/corpus.hpp"

namespace topiclab::lda {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct LdaModel {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  Eigen::MatrixXd phi;          // k x m
  Eigen::MatrixXd theta_train;  // n x k
  CountMatrix topic_word_counts;  // k x m
  std::vector<std::int64_t> topic_counts;
  std::uint64_t seed = 0;
  int n_iters = 0;
  std::string vocab_hash;
};

struct LdaOptions {
  /// Symmetric document-topic prior; a non-positive value means 50 / k.
  double alpha = -1.0;
  double beta = 0.01;
  int n_iters = 1000;
};

double default_alpha(int k);

/// (n_tw + beta) / (n_t + m * beta).
Eigen::MatrixXd phi_from_counts(const CountMatrix& topic_word, const std::vector<std::int64_t>& topic_totals,
                                double beta);

/// Collapsed Gibbs sampler over a bag-of-words corpus. Tokens of each
/// document are expanded in ascending term order and start from uniformly
/// random topics.
class GibbsSampler {
 public:
  GibbsSampler(const corpus::SparseDocTermMatrix& bow, int k, double alpha, double beta,
               std::uint64_t seed);

  /// One pass over every token, resampling z_i from
  /// (n_dt + alpha) * (n_tw + beta) / (n_t + m * beta) with token i removed.
  void sweep();

  int k() const { return k_; }
  std::size_t n_docs() const { return doc_start_.size() - 1; }
  std::size_t n_terms() const { return m_; }
  std::int64_t doc_topic_count(std::size_t d, int t) const;
  std::int64_t doc_length(std::size_t d) const;
  const CountMatrix& topic_word_counts() const { return n_tw_; }
  const std::vector<std::int64_t>& topic_counts() const { return n_t_; }

  Eigen::MatrixXd phi() const;
  Eigen::MatrixXd theta() const;

 private:
  int k_;
  std::size_t m_;
  double alpha_;
  double beta_;
  std::mt19937_64 rng_;
  std::vector<corpus::TermId> words_;
  std::vector<int> topics_;
  std::vector<std::size_t> doc_start_;
  std::vector<std::int64_t> n_dt_;  // n x k, row-major
  CountMatrix n_tw_;
  std::vector<std::int64_t> n_t_;
  std::vector<double> cumulative_;
};

/// Throws Error(EmptyCorpus) when there are no documents or no tokens.
LdaModel train_lda(const corpus::SparseDocTermMatrix& bow, int k, std::uint64_t seed,
                   const LdaOptions& options = {});

/// Fold-in Gibbs with the topic-word side frozen at the trained phi.
Eigen::VectorXd infer_theta(const LdaModel& model, const corpus::SparseRow& doc, int n_iters,
                            std::uint64_t seed);

/// As above, after checking the vocabulary hash (Error(VocabularyMismatch))
/// and dropping out-of-vocabulary tokens.
Eigen::VectorXd infer_theta(const LdaModel& model, const corpus::Vocabulary& vocab,
                            const std::vector<std::string>& tokens, int n_iters,
                            std::uint64_t seed);

/// Sum over documents and tokens of ln(sum_t theta_dt * phi_tw).
double log_likelihood(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& theta,
                      const corpus::SparseDocTermMatrix& bow);

/// Topics are 0-indexed here; display code adds 1.
struct TopicAssignment {
  std::string doc_id;
  int dominant_topic = 0;
  double dominant_share = 0.0;
  std::optional<int> second_topic;
  double second_share = 0.0;

  int dominant_pct() const;
  int second_pct() const;
};

/// Argmax with lowest-index ties, then the runner-up the same way.
TopicAssignment dominant_topics(const Eigen::VectorXd& theta, std::string doc_id);

/// 100 * share rounded to the nearest integer.
int display_pct(double share);

std::vector<std::vector<std::string>> topic_terms(const LdaModel& model,
                                                  const corpus::Vocabulary& vocab,
                                                  std::size_t n);

/// The n highest-probability terms of a topic, ties by ascending id.
std::vector<std::pair<corpus::TermId, double>> top_terms_lda(const LdaModel& model, int topic,
                                                             std::size_t n);

}  // namespace topiclab::lda
