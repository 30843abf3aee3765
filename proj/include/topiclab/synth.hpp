#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "topiclab/preprocess.hpp"

namespace topiclab::synth {

// Planted-topic corpus generator. Topic t puts (1 - noise) of its mass on
// its own block of vocab_size / k words with Zipf weights 1 / (rank + 1),
// and spreads the remaining noise uniformly over the whole vocabulary.
// Documents draw theta from a symmetric Dirichlet(alpha).

struct SynthOptions {
  int n_docs = 2000;
  int k = 4;
  int vocab_size = 500;
  double alpha = 0.1;
  double noise = 0.05;
  int min_len = 20;
  int max_len = 60;
};

struct SynthCorpus {
  std::vector<std::string> vocab;  // sorted
  Eigen::MatrixXd phi;              // k x vocab_size, columns in vocab order
  Eigen::MatrixXd theta;            // n_docs x k
  std::vector<preprocess::TokenizedDoc> docs;
};

/// Word i of the generated vocabulary: "t" plus three letters from an
/// alphabet without vowels, 's' or 'y', so the stemmer leaves it alone and
/// no stopword list contains it.
std::string synth_word(int i);

SynthCorpus generate(const SynthOptions& options, std::uint64_t seed);

/// One tweet-format JSON record per document, text = tokens joined by
/// spaces plus `keyword_tag`, so the corpus can enter through ingest.
std::string to_records(const SynthCorpus& corpus, const std::string& keyword_tag = "#yoga");

/// Planted phi as JSON: {"vocab": [...], "phi": [[...], ...]}.
std::string phi_to_json(const SynthCorpus& corpus);

/// Best one-to-one pairing of the rows of `a` with rows of `b` (a.rows() <=
/// b.rows(), exhaustive over permutations) maximising the summed cosine;
/// returns the mean cosine over a's rows.
double best_pairing_cosine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace topiclab::synth
