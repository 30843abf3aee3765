#include "topiclab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::corpus {

Vocabulary Vocabulary::build(const std::vector<preprocess::TokenizedDoc>& docs,
                             std::uint64_t no_below, double no_above) {
  if (!(no_above > 0.0 && no_above <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "no_above must be in (0, 1]");
  }
  std::map<std::string, std::uint64_t> df;
  for (const auto& d : docs) {
    std::set<std::string_view> seen(d.tokens.begin(), d.tokens.end());
    for (auto t : seen) ++df[std::string(t)];
  }
  Vocabulary v;
  v.n_docs_ = docs.size();
  const double upper = no_above * static_cast<double>(docs.size());
  for (const auto& [token, count] : df) {
    if (count < no_below || static_cast<double>(count) > upper) continue;
    v.tokens_.push_back(token);
    v.doc_freq_.push_back(count);
  }
  if (v.tokens_.empty()) throw Error(ErrorCode::EmptyVocabulary, "no token survived filtering");
  v.index();
  return v;
}

void Vocabulary::index() {
  ids_.clear();
  for (TermId i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], i);
}

std::optional<TermId> Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::serialize() const {
  std::string out = "# n_docs=" + std::to_string(n_docs_) + "\n";
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += std::to_string(i) + "\t" + tokens_[i] + "\t" + std::to_string(doc_freq_[i]) + "\n";
  }
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  Vocabulary v;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# n_docs=", 0) == 0) {
      v.n_docs_ = std::stoull(line.substr(9));
      continue;
    }
    if (line.front() == '#') continue;
    const auto parts = util::split(line, '\t');
    if (parts.size() != 3 || std::stoull(parts[0]) != v.tokens_.size()) {
      throw Error(ErrorCode::MalformedRecord,
                  "vocabulary line " + std::to_string(line_no) + " is malformed or out of order");
    }
    v.tokens_.push_back(parts[1]);
    v.doc_freq_.push_back(std::stoull(parts[2]));
  }
  if (v.tokens_.empty()) throw Error(ErrorCode::EmptyVocabulary, "vocabulary file has no entries");
  v.index();
  return v;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return parse(util::read_file(path));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  util::write_file_atomic(path, serialize());
}

std::string Vocabulary::hash() const { return util::sha256_hex(serialize()); }

SparseDocTermMatrix::SparseDocTermMatrix(std::size_t n_cols, const std::vector<SparseRow>& rows)
    : n_cols_(n_cols) {
  row_ptr_.reserve(rows.size() + 1);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].term >= n_cols || (i > 0 && r[i].term <= r[i - 1].term) || !std::isfinite(r[i].value)) {
        throw Error(ErrorCode::Dimension, "row entries must be finite with increasing term ids < n_cols");
      }
    }
    entries_.insert(entries_.end(), r.begin(), r.end());
    row_ptr_.push_back(entries_.size());
  }
}

std::span<const Entry> SparseDocTermMatrix::row(std::size_t i) const {
  return std::span<const Entry>(entries_).subspan(row_ptr_.at(i), row_ptr_.at(i + 1) - row_ptr_[i]);
}

double SparseDocTermMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (const auto& e : row(i)) s += e.value;
  return s;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> SparseDocTermMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries_.size());
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (const auto& e : row(r)) {
      trips.emplace_back(static_cast<int>(r), static_cast<int>(e.term), e.value);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(static_cast<Eigen::Index>(n_rows()),
                                                 static_cast<Eigen::Index>(n_cols_));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

std::string SparseDocTermMatrix::serialize() const {
  std::string out = std::to_string(n_rows()) + " " + std::to_string(n_cols_) + " " +
                    std::to_string(nnz()) + "\n";
  char buf[64];
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (const auto& e : row(r)) {
      std::snprintf(buf, sizeof buf, "%zu %u %.17g\n", r, e.term, e.value);
      out += buf;
    }
  }
  return out;
}

SparseDocTermMatrix SparseDocTermMatrix::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n_rows = 0, n_cols = 0, nnz = 0;
  if (!(in >> n_rows >> n_cols >> nnz)) {
    throw Error(ErrorCode::MalformedRecord, "matrix header must be 'n_rows n_cols nnz'");
  }
  std::vector<SparseRow> rows(n_rows);
  for (std::size_t i = 0; i < nnz; ++i) {
    std::size_t r = 0;
    TermId c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v) || r >= n_rows) {
      throw Error(ErrorCode::MalformedRecord, "bad matrix triplet #" + std::to_string(i + 1));
    }
    rows[r].push_back({c, v});
  }
  return SparseDocTermMatrix(n_cols, rows);
}

SparseRow doc_to_bow(const preprocess::Tokens& tokens, const Vocabulary& vocab) {
  std::map<TermId, double> counts;
  for (const auto& t : tokens) {
    if (auto id = vocab.id(t)) counts[*id] += 1.0;
  }
  SparseRow row;
  row.reserve(counts.size());
  for (const auto& [term, count] : counts) row.push_back({term, count});
  return row;
}

SparseDocTermMatrix bow_matrix(const std::vector<preprocess::TokenizedDoc>& docs,
                               const Vocabulary& vocab) {
  std::vector<SparseRow> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(doc_to_bow(d.tokens, vocab));
  return SparseDocTermMatrix(vocab.size(), rows);
}

SparseDocTermMatrix tfidf_weight(const SparseDocTermMatrix& counts, const Vocabulary& vocab) {
  if (counts.n_cols() != vocab.size()) {
    throw Error(ErrorCode::Dimension, "count matrix columns do not match vocabulary size");
  }
  const double n_docs = static_cast<double>(vocab.n_docs());
  std::vector<SparseRow> rows(counts.n_rows());
  for (std::size_t r = 0; r < counts.n_rows(); ++r) {
    double norm2 = 0.0;
    for (const auto& e : counts.row(r)) {
      const double idf = std::log(n_docs / static_cast<double>(vocab.doc_freq(e.term)));
      const double w = e.value * idf;
      if (w == 0.0) continue;
      rows[r].push_back({e.term, w});
      norm2 += w * w;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& e : rows[r]) e.value *= inv;
    }
  }
  return SparseDocTermMatrix(counts.n_cols(), rows);
}

}  // namespace topiclab::corpus
