#include "topiclab/corpus.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "temp_dir.hpp"
#include "topiclab/error.hpp"

using namespace topiclab;
using namespace topiclab::corpus;
using preprocess::TokenizedDoc;

namespace {

std::vector<TokenizedDoc> small_docs() {
  return {{"a", {"yoga", "vegan", "yoga"}},
          {"b", {"yoga", "run"}},
          {"c", {"vegan", "run", "tea"}},
          {"d", {"run", "tea", "yoga"}},
          {"e", {"mat"}}};
}

}  // namespace

TEST(Vocabulary, DocFrequencyFilters) {
  // df: yoga 3, run 3, vegan 2, tea 2, mat 1; 0.5 * 5 = 2.5.
  const auto v = Vocabulary::build(small_docs(), 2, 0.5);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"tea", "vegan"}));
  EXPECT_EQ(v.doc_freq(*v.id("tea")), 2u);
  EXPECT_FALSE(v.id("yoga"));
  EXPECT_EQ(v.n_docs(), 5u);

  const auto all = Vocabulary::build(small_docs(), 1, 1.0);
  EXPECT_EQ(all.tokens(), (std::vector<std::string>{"mat", "run", "tea", "vegan", "yoga"}));
}

TEST(Vocabulary, EmptyThrows) {
  try {
    Vocabulary::build(small_docs(), 10, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyVocabulary);
  }
}

TEST(Vocabulary, FileRoundTripAndHash) {
  TempDir dir;
  const auto v = Vocabulary::build(small_docs(), 1, 1.0);
  v.save(dir / "v.tsv");
  const auto back = Vocabulary::load(dir / "v.tsv");
  EXPECT_EQ(back.tokens(), v.tokens());
  EXPECT_EQ(back.n_docs(), v.n_docs());
  EXPECT_EQ(back.hash(), v.hash());
  EXPECT_NE(Vocabulary::build(small_docs(), 2, 1.0).hash(), v.hash());
}

TEST(Bow, CountsAndDropsUnknown) {
  const auto v = Vocabulary::build(small_docs(), 1, 1.0);
  const auto row = doc_to_bow({"yoga", "zebra", "yoga", "mat"}, v);
  ASSERT_EQ(row.size(), 2u);
  EXPECT_EQ(row[0], (Entry{*v.id("mat"), 1.0}));
  EXPECT_EQ(row[1], (Entry{*v.id("yoga"), 2.0}));
  EXPECT_TRUE(doc_to_bow({}, v).empty());
}

TEST(Bow, MatrixShapeAndSums) {
  const auto docs = small_docs();
  const auto v = Vocabulary::build(docs, 1, 1.0);
  const auto x = bow_matrix(docs, v);
  EXPECT_EQ(x.n_rows(), 5u);
  EXPECT_EQ(x.n_cols(), 5u);
  for (std::size_t i = 0; i < docs.size(); ++i) EXPECT_DOUBLE_EQ(x.row_sum(i), docs[i].tokens.size());
  const auto e = x.to_eigen();
  EXPECT_DOUBLE_EQ(e.coeff(0, *v.id("yoga")), 2.0);
  EXPECT_EQ(SparseDocTermMatrix::parse(x.serialize()), x);
}

TEST(Tfidf, MatchesHandComputation) {
  const auto docs = small_docs();
  const auto v = Vocabulary::build(docs, 1, 1.0);
  const auto w = tfidf_weight(bow_matrix(docs, v), v);
  // Doc a: yoga tf 2 df 3, vegan tf 1 df 2.
  const double y = 2.0 * std::log(5.0 / 3.0);
  const double g = 1.0 * std::log(5.0 / 2.0);
  const double norm = std::hypot(y, g);
  const auto e = w.to_eigen();
  EXPECT_NEAR(e.coeff(0, *v.id("yoga")), y / norm, 1e-12);
  EXPECT_NEAR(e.coeff(0, *v.id("vegan")), g / norm, 1e-12);
  for (std::size_t i = 0; i < w.n_rows(); ++i) {
    double ss = 0.0;
    for (const auto& en : w.row(i)) ss += en.value * en.value;
    EXPECT_NEAR(ss, 1.0, 1e-12);
  }
}

TEST(Tfidf, TermInEveryDocLeavesZeroRow) {
  const std::vector<TokenizedDoc> docs = {{"1", {"om"}}, {"2", {"om"}}};
  const auto v = Vocabulary::build(docs, 1, 1.0);
  const auto w = tfidf_weight(bow_matrix(docs, v), v);
  for (std::size_t i = 0; i < w.n_rows(); ++i) EXPECT_DOUBLE_EQ(w.row_sum(i), 0.0);
}
