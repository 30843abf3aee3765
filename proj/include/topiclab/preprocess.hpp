#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topiclab/ingest.hpp"

namespace topiclab::preprocess {

using Tokens = std::vector<std::string>;

struct TokenizedDoc {
  std::string doc_id;
  Tokens tokens;

  friend bool operator==(const TokenizedDoc&, const TokenizedDoc&) = default;
};

class StopwordSet {
 public:
  /// Throws Error(InvalidArgument) unless the set is non-empty and contains
  /// at least "for", "or" and "the".
  explicit StopwordSet(const std::vector<std::string>& words);

  static StopwordSet load(const std::filesystem::path& path);
  /// English list bundled in resources/stopwords_en.txt.
  static StopwordSet english();

  bool contains(std::string_view word) const { return words_.count(std::string(word)) > 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

/// Removes email addresses, URLs, the standalone token RT, @-mentions and
/// newlines, then collapses whitespace and trims.
std::string clean_text(std::string_view raw);

/// Lowercases and splits on anything outside [a-z]; keeps tokens of 2..15
/// letters.
Tokens tokenize(std::string_view cleaned);

Tokens remove_stopwords(const Tokens& tokens, const StopwordSet& stops);

/// Porter (1980) suffix stripper, following the reference implementation
/// published with the algorithm. Non-letters such as '_' count as
/// consonants, so a joined phrase is stemmed as one word.
std::string porter_stem(std::string_view word);

/// Adjacent-pair collocation counts. A pair (a, b) is a phrase when
/// (count(a b) - min_count) * vocab_size / (count(a) * count(b)) > threshold.
class PhraseModel {
 public:
  PhraseModel(std::uint64_t min_count, double threshold);

  void add_document(const Tokens& tokens);

  double score(std::string_view a, std::string_view b) const;
  bool accepts(std::string_view a, std::string_view b) const;

  std::uint64_t unigram_count(std::string_view token) const;
  std::uint64_t bigram_count(std::string_view a, std::string_view b) const;
  /// Number of distinct unigrams seen.
  std::size_t vocab_size() const { return unigrams_.size(); }
  std::uint64_t min_count() const { return min_count_; }
  double threshold() const { return threshold_; }

  /// Accepted pairs joined as "a_b", sorted.
  std::vector<std::string> phrases() const;

 private:
  static std::string pair_key(std::string_view a, std::string_view b);

  std::uint64_t min_count_;
  double threshold_;
  std::unordered_map<std::string, std::uint64_t> unigrams_;
  std::unordered_map<std::string, std::uint64_t> bigrams_;
};

PhraseModel learn_phrases(const std::vector<Tokens>& docs, std::uint64_t min_count = 5,
                          double threshold = 10.0);

/// One greedy left-to-right pass; a token used in a join cannot join again.
/// Pairs whose joined form would exceed 15 characters stay apart.
Tokens apply_phrases(const Tokens& tokens, const PhraseModel& model);

/// clean -> tokenize -> remove_stopwords: the input the phrase model learns on.
Tokens surface_tokens(std::string_view text, const StopwordSet& stops);

/// Full chain: clean -> tokenize -> remove_stopwords -> apply_phrases -> stem.
TokenizedDoc preprocess_doc(const ingest::Document& doc, const StopwordSet& stops,
                            const PhraseModel& phrases);

struct PreprocessOptions {
  std::uint64_t phrase_min_count = 5;
  double phrase_threshold = 10.0;
};

/// Learns the phrase model on the corpus itself, then runs preprocess_doc
/// on every document.
std::vector<TokenizedDoc> preprocess_corpus(const std::vector<ingest::Document>& docs,
                                            const StopwordSet& stops,
                                            const PreprocessOptions& options = {});

/// Newline-delimited {"doc_id": ..., "tokens": [...]} records.
std::vector<TokenizedDoc> read_tokenized(const std::filesystem::path& path);
void write_tokenized(const std::filesystem::path& path, const std::vector<TokenizedDoc>& docs);

}  // namespace topiclab::preprocess
