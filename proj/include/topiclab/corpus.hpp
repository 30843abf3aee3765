#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topiclab/preprocess.hpp"

namespace topiclab::corpus {

using TermId = std::uint32_t;

struct Entry {
  TermId term = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sorted by term id, no duplicates.
using SparseRow = std::vector<Entry>;

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Keeps tokens with no_below <= doc_freq <= no_above * n_docs. Ids follow
  /// lexicographic token order. Throws Error(EmptyVocabulary).
  static Vocabulary build(const std::vector<preprocess::TokenizedDoc>& docs,
                          std::uint64_t no_below = 2, double no_above = 0.5);

  /// `# n_docs=<n>` header, then `<id>\t<token>\t<doc_freq>` lines.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);
  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::optional<TermId> id(std::string_view token) const;
  const std::string& token(TermId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::uint64_t doc_freq(TermId id) const { return doc_freq_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  std::uint64_t n_docs() const { return n_docs_; }

  /// SHA-256 of serialize(); identifies the id assignment in model files.
  std::string hash() const;

 private:
  void index();

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> doc_freq_;
  std::unordered_map<std::string, TermId> ids_;
  std::uint64_t n_docs_ = 0;
};

/// Compressed-row documents x terms matrix.
class SparseDocTermMatrix {
 public:
  SparseDocTermMatrix() = default;
  SparseDocTermMatrix(std::size_t n_cols, const std::vector<SparseRow>& rows);

  std::size_t n_rows() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return entries_.size(); }
  std::span<const Entry> row(std::size_t i) const;

  /// Sum of the values in row i (document length for count matrices).
  double row_sum(std::size_t i) const;

  Eigen::SparseMatrix<double, Eigen::RowMajor> to_eigen() const;

  /// Header `n_rows n_cols nnz`, then `row col value` ascending.
  std::string serialize() const;
  static SparseDocTermMatrix parse(std::string_view text);

  friend bool operator==(const SparseDocTermMatrix&, const SparseDocTermMatrix&) = default;

 private:
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> entries_;
};

/// Counts of in-vocabulary tokens; unknown tokens are dropped.
SparseRow doc_to_bow(const preprocess::Tokens& tokens, const Vocabulary& vocab);

SparseDocTermMatrix bow_matrix(const std::vector<preprocess::TokenizedDoc>& docs,
                               const Vocabulary& vocab);

/// tf * ln(n_docs / doc_freq), then each nonzero row scaled to unit L2 norm.
SparseDocTermMatrix tfidf_weight(const SparseDocTermMatrix& counts, const Vocabulary& vocab);

}  // namespace topiclab::corpus
