#include "topiclab/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topiclab/error.hpp"

namespace topiclab::lda {

double default_alpha(int k) { return 50.0 / static_cast<double>(k); }

GibbsSampler::GibbsSampler(const corpus::SparseDocTermMatrix& bow, int k, double alpha,
                           double beta, std::uint64_t seed)
    : k_(k), m_(bow.n_cols()), alpha_(alpha), beta_(beta), rng_(seed) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha and beta must be positive");
  }
  if (bow.n_rows() == 0) throw Error(ErrorCode::EmptyCorpus, "corpus has no documents");

  doc_start_.reserve(bow.n_rows() + 1);
  doc_start_.push_back(0);
  for (std::size_t d = 0; d < bow.n_rows(); ++d) {
    for (const auto& e : bow.row(d)) {
      const auto count = static_cast<std::int64_t>(std::llround(e.value));
      if (count < 0 || static_cast<double>(count) != e.value) {
        throw Error(ErrorCode::InvalidArgument, "LDA needs non-negative integer counts");
      }
      words_.insert(words_.end(), static_cast<std::size_t>(count), e.term);
    }
    doc_start_.push_back(words_.size());
  }
  if (words_.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no tokens");

  n_dt_.assign(bow.n_rows() * static_cast<std::size_t>(k), 0);
  n_tw_ = CountMatrix::Zero(k, static_cast<Eigen::Index>(m_));
  n_t_.assign(static_cast<std::size_t>(k), 0);
  cumulative_.resize(static_cast<std::size_t>(k));
  topics_.resize(words_.size());

  std::uniform_int_distribution<int> pick(0, k - 1);
  for (std::size_t d = 0; d + 1 < doc_start_.size(); ++d) {
    for (std::size_t i = doc_start_[d]; i < doc_start_[d + 1]; ++i) {
      const int t = pick(rng_);
      topics_[i] = t;
      ++n_dt_[d * static_cast<std::size_t>(k) + static_cast<std::size_t>(t)];
      ++n_tw_(t, words_[i]);
      ++n_t_[static_cast<std::size_t>(t)];
    }
  }
}

void GibbsSampler::sweep() {
  const double m_beta = static_cast<double>(m_) * beta_;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto k = static_cast<std::size_t>(k_);
  // 1 / (n_t + m * beta), refreshed only for the two topics a move touches.
  std::vector<double> inv_total(k);
  for (std::size_t t = 0; t < k; ++t) inv_total[t] = 1.0 / (static_cast<double>(n_t_[t]) + m_beta);
  for (std::size_t d = 0; d + 1 < doc_start_.size(); ++d) {
    std::int64_t* dt = &n_dt_[d * k];
    for (std::size_t i = doc_start_[d]; i < doc_start_[d + 1]; ++i) {
      const auto w = words_[i];
      std::int64_t* tw = n_tw_.col(w).data();
      const auto old = static_cast<std::size_t>(topics_[i]);
      --dt[old];
      --tw[old];
      --n_t_[old];
      inv_total[old] = 1.0 / (static_cast<double>(n_t_[old]) + m_beta);

      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        total += (static_cast<double>(dt[t]) + alpha_) * (static_cast<double>(tw[t]) + beta_) *
                 inv_total[t];
        cumulative_[t] = total;
      }
      const double u = unif(rng_) * total;
      std::size_t t = 0;
      while (t + 1 < k && cumulative_[t] <= u) ++t;

      topics_[i] = static_cast<int>(t);
      ++dt[t];
      ++tw[t];
      ++n_t_[t];
      inv_total[t] = 1.0 / (static_cast<double>(n_t_[t]) + m_beta);
    }
  }
}

std::int64_t GibbsSampler::doc_topic_count(std::size_t d, int t) const {
  return n_dt_.at(d * static_cast<std::size_t>(k_) + static_cast<std::size_t>(t));
}

std::int64_t GibbsSampler::doc_length(std::size_t d) const {
  return static_cast<std::int64_t>(doc_start_.at(d + 1) - doc_start_.at(d));
}

Eigen::MatrixXd phi_from_counts(const CountMatrix& topic_word, const std::vector<std::int64_t>& topic_totals,
                                double beta) {
  Eigen::MatrixXd phi(topic_word.rows(), topic_word.cols());
  const double m_beta = static_cast<double>(topic_word.cols()) * beta;
  for (Eigen::Index t = 0; t < phi.rows(); ++t) {
    const double denom = static_cast<double>(topic_totals.at(static_cast<std::size_t>(t))) + m_beta;
    for (Eigen::Index w = 0; w < phi.cols(); ++w) {
      phi(t, w) = (static_cast<double>(topic_word(t, w)) + beta) / denom;
    }
  }
  return phi;
}

Eigen::MatrixXd GibbsSampler::phi() const { return phi_from_counts(n_tw_, n_t_, beta_); }

Eigen::MatrixXd GibbsSampler::theta() const {
  Eigen::MatrixXd theta(static_cast<Eigen::Index>(n_docs()), k_);
  const double k_alpha = static_cast<double>(k_) * alpha_;
  for (std::size_t d = 0; d < n_docs(); ++d) {
    const double denom = static_cast<double>(doc_length(d)) + k_alpha;
    for (int t = 0; t < k_; ++t) {
      theta(static_cast<Eigen::Index>(d), t) =
          (static_cast<double>(doc_topic_count(d, t)) + alpha_) / denom;
    }
  }
  return theta;
}

LdaModel train_lda(const corpus::SparseDocTermMatrix& bow, int k, std::uint64_t seed,
                   const LdaOptions& options) {
  if (options.n_iters < 1) throw Error(ErrorCode::InvalidArgument, "n_iters must be >= 1");
  const double alpha = options.alpha > 0.0 ? options.alpha : default_alpha(k);
  GibbsSampler sampler(bow, k, alpha, options.beta, seed);
  for (int it = 0; it < options.n_iters; ++it) sampler.sweep();

  LdaModel model;
  model.k = k;
  model.alpha = alpha;
  model.beta = options.beta;
  model.phi = sampler.phi();
  model.theta_train = sampler.theta();
  model.topic_word_counts = sampler.topic_word_counts();
  model.topic_counts = sampler.topic_counts();
  model.seed = seed;
  model.n_iters = options.n_iters;
  return model;
}

Eigen::VectorXd infer_theta(const LdaModel& model, const corpus::SparseRow& doc, int n_iters,
                            std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(model.k);
  std::vector<corpus::TermId> words;
  for (const auto& e : doc) {
    if (e.term >= model.phi.cols()) {
      throw Error(ErrorCode::VocabularyMismatch, "term id outside the model vocabulary");
    }
    words.insert(words.end(), static_cast<std::size_t>(std::llround(e.value)), e.term);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, model.k - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> z(words.size());
  std::vector<std::int64_t> n_dt(k, 0);
  for (auto& t : z) {
    t = pick(rng);
    ++n_dt[static_cast<std::size_t>(t)];
  }
  std::vector<double> cumulative(k);
  for (int it = 0; it < n_iters; ++it) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --n_dt[static_cast<std::size_t>(z[i])];
      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        total += (static_cast<double>(n_dt[t]) + model.alpha) *
                 model.phi(static_cast<Eigen::Index>(t), words[i]);
        cumulative[t] = total;
      }
      const double u = unif(rng) * total;
      std::size_t t = 0;
      while (t + 1 < k && cumulative[t] <= u) ++t;
      z[i] = static_cast<int>(t);
      ++n_dt[t];
    }
  }

  Eigen::VectorXd theta(model.k);
  const double denom = static_cast<double>(words.size()) + static_cast<double>(k) * model.alpha;
  for (std::size_t t = 0; t < k; ++t) {
    theta(static_cast<Eigen::Index>(t)) = (static_cast<double>(n_dt[t]) + model.alpha) / denom;
  }
  return theta;
}

Eigen::VectorXd infer_theta(const LdaModel& model, const corpus::Vocabulary& vocab,
                            const std::vector<std::string>& tokens, int n_iters,
                            std::uint64_t seed) {
  if (vocab.hash() != model.vocab_hash) {
    throw Error(ErrorCode::VocabularyMismatch, "vocabulary does not match the one the model was trained on");
  }
  return infer_theta(model, corpus::doc_to_bow(tokens, vocab), n_iters, seed);
}

double log_likelihood(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& theta,
                      const corpus::SparseDocTermMatrix& bow) {
  double ll = 0.0;
  for (std::size_t d = 0; d < bow.n_rows(); ++d) {
    for (const auto& e : bow.row(d)) {
      const double p = theta.row(static_cast<Eigen::Index>(d)).dot(phi.col(e.term));
      ll += e.value * std::log(p);
    }
  }
  return ll;
}

int display_pct(double share) { return static_cast<int>(std::lround(100.0 * share)); }

int TopicAssignment::dominant_pct() const { return display_pct(dominant_share); }
int TopicAssignment::second_pct() const { return display_pct(second_share); }

TopicAssignment dominant_topics(const Eigen::VectorXd& theta, std::string doc_id) {
  if (theta.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty topic distribution");
  TopicAssignment a;
  a.doc_id = std::move(doc_id);
  for (Eigen::Index t = 1; t < theta.size(); ++t) {
    if (theta(t) > theta(a.dominant_topic)) a.dominant_topic = static_cast<int>(t);
  }
  a.dominant_share = theta(a.dominant_topic);
  for (Eigen::Index t = 0; t < theta.size(); ++t) {
    if (t == a.dominant_topic) continue;
    if (!a.second_topic || theta(t) > theta(*a.second_topic)) a.second_topic = static_cast<int>(t);
  }
  if (a.second_topic) a.second_share = theta(*a.second_topic);
  return a;
}

std::vector<std::pair<corpus::TermId, double>> top_terms_lda(const LdaModel& model, int topic,
                                                             std::size_t n) {
  if (topic < 0 || topic >= model.k) {
    throw Error(ErrorCode::Index, "topic " + std::to_string(topic) + " out of range");
  }
  const auto row = model.phi.row(topic);
  std::vector<corpus::TermId> ids(static_cast<std::size_t>(row.size()));
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](corpus::TermId a, corpus::TermId b) { return row(a) > row(b); });
  ids.resize(std::min(n, ids.size()));
  std::vector<std::pair<corpus::TermId, double>> out;
  for (auto id : ids) out.emplace_back(id, row(id));
  return out;
}

std::vector<std::vector<std::string>> topic_terms(const LdaModel& model,
                                                  const corpus::Vocabulary& vocab,
                                                  std::size_t n) {
  std::vector<std::vector<std::string>> out;
  for (int t = 0; t < model.k; ++t) {
    auto& terms = out.emplace_back();
    for (const auto& [id, p] : top_terms_lda(model, t, n)) terms.push_back(vocab.token(id));
  }
  return out;
}

}  // namespace topiclab::lda
