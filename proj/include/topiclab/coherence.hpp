#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "topiclab/corpus.hpp"
#include "topiclab/embedding.hpp"
#include "topiclab/lda.hpp"
#include "topiclab/lsa.hpp"
#include "topiclab/nmf.hpp"
#include "topiclab/preprocess.hpp"

namespace topiclab::coherence {

enum class Algorithm { Lsa, Nmf, Lda };
enum class Measure { UMass, Cv, TcW2v };

std::string to_string(Algorithm algorithm);
std::string to_string(Measure measure);
/// Throws Error(InvalidArgument) on an unknown name.
Algorithm parse_algorithm(std::string_view name);
Measure parse_measure(std::string_view name);

/// cv for LSA and LDA sweeps, tcw2v for NMF.
Measure default_measure(Algorithm algorithm);

/// Ordered top terms of every topic, best first.
using TopTerms = std::vector<std::vector<std::string>>;
using Docs = std::vector<preprocess::Tokens>;

struct CoherenceReport {
  Algorithm algorithm = Algorithm::Lda;
  Measure measure = Measure::Cv;
  std::vector<double> per_topic;
  double aggregate = 0.0;
};

CoherenceReport make_report(Algorithm algorithm, Measure measure, std::vector<double> per_topic);

/// Per topic, sum over m >= 2, l < m of ln((D(w_m, w_l) + 1) / D(w_l)) with
/// D counting documents. Terms absent from the corpus are dropped first;
/// fewer than two remaining terms score 0.
std::vector<double> umass_scores(const TopTerms& topics, const Docs& docs);

/// Boolean sliding windows of `window` tokens (a shorter document is one
/// window). Each term gets its NPMI vector against every term of the topic,
/// and the topic scores the mean cosine between those vectors and their sum.
std::vector<double> cv_scores(const TopTerms& topics, const Docs& docs, int window = 110);

/// Mean pairwise cosine of the embedded terms; fewer than two score 0.
std::vector<double> tcw2v_scores(const TopTerms& topics, const embedding::EmbeddingTable& emb);

/// NPMI from window probabilities, eps = 1e-12 inside both logarithms. A
/// pair present in every window scores 1; a term never seen scores 0.
double npmi(double p_ij, double p_i, double p_j);

CoherenceReport umass_coherence(const TopTerms& topics, const Docs& docs,
                                Algorithm algorithm = Algorithm::Lda);
CoherenceReport cv_coherence(const TopTerms& topics, const Docs& docs, int window = 110,
                             Algorithm algorithm = Algorithm::Lda);
CoherenceReport tcw2v_coherence(const TopTerms& topics, const embedding::EmbeddingTable& emb,
                                Algorithm algorithm = Algorithm::Nmf);

TopTerms top_terms(const lsa::LsaModel& model, const corpus::Vocabulary& vocab, std::size_t n);
TopTerms top_terms(const nmf::NmfModel& model, const corpus::Vocabulary& vocab, std::size_t n);
TopTerms top_terms(const lda::LdaModel& model, const corpus::Vocabulary& vocab, std::size_t n);

struct KSelectionResult {
  Algorithm algorithm = Algorithm::Lda;
  Measure measure = Measure::Cv;
  std::map<int, double> scores;
  std::map<int, CoherenceReport> reports;
  int best_k = 0;
};

/// Largest score, smallest k on ties. Throws Error(InvalidArgument) if empty.
int best_k(const std::map<int, double>& scores);

struct SweepOptions {
  std::size_t top_n = 10;
  int cv_window = 110;
  lda::LdaOptions lda;
  nmf::NmfOptions nmf;
  lsa::SvdOptions svd;
  embedding::SgnsOptions sgns;
  /// Train the k values concurrently.
  bool parallel = true;
};

/// Trains one model per k with the shared seed (counts for LDA, TF-IDF for
/// LSA and NMF) and scores its top terms against `docs`.
KSelectionResult select_k(Algorithm algorithm, const std::vector<int>& ks, Measure measure,
                          const std::vector<preprocess::TokenizedDoc>& docs,
                          const corpus::Vocabulary& vocab, std::uint64_t seed,
                          const SweepOptions& options = {});

}  // namespace topiclab::coherence
