#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "topiclab/corpus.hpp"
#include "topiclab/lda.hpp"

namespace topiclab::visexport {

struct TopicBubble {
  int id = 0;  // 1-based
  double proportion = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct TermRow {
  std::string term;
  /// Saliency for the global list, relevance for per-topic lists.
  double score = 0.0;
  /// Estimated occurrences within the topic; the corpus count for the
  /// global list.
  double topic_frequency = 0.0;
  double corpus_frequency = 0.0;
};

struct VisExport {
  std::vector<TopicBubble> topics;
  Eigen::MatrixXd distances;  // k x k Jensen-Shannon divergences
  std::vector<TermRow> default_terms;
  std::vector<std::vector<TermRow>> per_topic_terms;
  double lambda = 0.6;
};

/// Natural-log Jensen-Shannon divergence, in [0, ln 2].
double js_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

Eigen::MatrixXd js_matrix(const Eigen::MatrixXd& phi);

/// Classical MDS to two dimensions: eigenvectors of -1/2 J D^2 J scaled by
/// the square roots of their eigenvalues (negatives clamped to 0). Each axis
/// is signed so that the first nonzero coordinate is positive.
Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& distances);

/// p(t|w) for every term: columns of phi weighted by the topic proportions
/// and normalised. k x m.
Eigen::MatrixXd topic_given_term(const Eigen::MatrixXd& phi, const Eigen::VectorXd& proportions);

/// lambda * ln(phi) + (1 - lambda) * ln(phi / p_w). When lambda < 1 a term
/// with p_w = 0 ranks last (-inf).
double relevance(double phi, double p_w, double lambda);

/// Uses theta for the documents of `bow`. Throws Error(VocabularyMismatch)
/// when the model, vocabulary and matrix disagree, Error(Dimension) when
/// theta does not match the documents.
VisExport export_vis(const lda::LdaModel& model, const corpus::Vocabulary& vocab,
                     const corpus::SparseDocTermMatrix& bow, const Eigen::MatrixXd& theta,
                     double lambda = 0.6, std::size_t n_terms = 30);

/// As above with the model's training-time theta.
VisExport export_vis(const lda::LdaModel& model, const corpus::Vocabulary& vocab,
                     const corpus::SparseDocTermMatrix& bow, double lambda = 0.6,
                     std::size_t n_terms = 30);

std::string to_json(const VisExport& vis);
VisExport from_json(std::string_view text);

/// Atomic write; throws Error(Io) and leaves nothing behind on failure.
void write_vis_file(const VisExport& vis, const std::filesystem::path& path);
VisExport read_vis_file(const std::filesystem::path& path);

}  // namespace topiclab::visexport
