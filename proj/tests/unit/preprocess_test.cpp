#include "topiclab/preprocess.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <regex>

#include "temp_dir.hpp"
#include "topiclab/error.hpp"

using namespace topiclab;
using namespace topiclab::preprocess;

namespace {

// Every pair seen three times scores 2 * V / 9 > 0.1.
PhraseModel tiny_model(const std::vector<Tokens>& pattern) {
  PhraseModel m(1, 0.1);
  for (int i = 0; i < 3; ++i) {
    for (const auto& d : pattern) m.add_document(d);
  }
  return m;
}

std::vector<std::string> read_all_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

TEST(CleanText, Examples) {
  EXPECT_EQ(clean_text("RT @user: Yoga time\nnow  http://t.co/x"), "Yoga time now");
  EXPECT_EQ(clean_text("contact me a@b.com please"), "contact me please");
  EXPECT_EQ(clean_text(""), "");
}

TEST(CleanText, KeepsRtInsideWords) {
  EXPECT_EQ(clean_text("ART class RT"), "ART class");
  EXPECT_EQ(clean_text("visit www.example.com/x today"), "visit today");
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Yoga time now"), (Tokens{"yoga", "time", "now"}));
  EXPECT_EQ(tokenize("don't stop!!!"), (Tokens{"don", "stop"}));
  EXPECT_EQ(tokenize("a bb cccccccccccccccc"), (Tokens{"bb"}));
  EXPECT_EQ(tokenize("fifteen15letter ccccccccccccccc"), (Tokens{"fifteen", "letter", "ccccccccccccccc"}));
}

TEST(Stopwords, Examples) {
  const auto stops = StopwordSet::english();
  EXPECT_EQ(remove_stopwords({"the", "yoga", "for"}, stops), (Tokens{"yoga"}));
  EXPECT_EQ(remove_stopwords({"yoga", "vegan"}, stops), (Tokens{"yoga", "vegan"}));
  EXPECT_TRUE(remove_stopwords({}, stops).empty());
}

TEST(Stopwords, RequiresCoreWords) {
  EXPECT_THROW(StopwordSet({"and"}), Error);
  EXPECT_THROW(StopwordSet(std::vector<std::string>{}), Error);
  const StopwordSet s({"The", " for", "or"});
  EXPECT_TRUE(s.contains("the"));
  EXPECT_EQ(s.size(), 3u);
}

TEST(Porter, Examples) {
  EXPECT_EQ(porter_stem("connections"), "connect");
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("sky"), "sky");
  EXPECT_EQ(porter_stem("connected"), "connect");
  EXPECT_EQ(porter_stem("connecting"), "connect");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("generalizations"), "gener");
}

TEST(Porter, ReferenceVocabulary) {
  const auto voc = read_all_lines(std::string(TOPICLAB_TEST_DATA) + "/porter_voc.txt");
  const auto expected = read_all_lines(std::string(TOPICLAB_TEST_DATA) + "/porter_output.txt");
  ASSERT_EQ(voc.size(), expected.size());
  ASSERT_GT(voc.size(), 20000u);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < voc.size(); ++i) {
    if (porter_stem(voc[i]) != expected[i]) {
      if (++mismatches <= 10) ADD_FAILURE() << voc[i] << " -> " << porter_stem(voc[i]) << ", want " << expected[i];
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Phrases, ScoreFormula) {
  // c_ab = 6, c_a = c_b = 10, V = 100.
  PhraseModel m(5, 10.0);
  for (int i = 0; i < 6; ++i) m.add_document({"aa", "bb"});
  for (int i = 0; i < 4; ++i) m.add_document({"aa"});
  for (int i = 0; i < 4; ++i) m.add_document({"bb"});
  for (int i = 0; i < 98; ++i) m.add_document({"w" + std::to_string(i)});
  ASSERT_EQ(m.vocab_size(), 100u);
  EXPECT_DOUBLE_EQ(m.score("aa", "bb"), 1.0);
  EXPECT_FALSE(m.accepts("aa", "bb"));
}

TEST(Phrases, BelowMinCountRejected) {
  PhraseModel m(5, 10.0);
  for (int i = 0; i < 4; ++i) m.add_document({"aa", "bb"});
  EXPECT_LE(m.score("aa", "bb"), 0.0);
  EXPECT_FALSE(m.accepts("aa", "bb"));
}

TEST(Phrases, FrequentPairAccepted) {
  std::vector<Tokens> docs;
  for (int i = 0; i < 30; ++i) docs.push_back({"every", "woman", "w" + std::to_string(i)});
  for (int i = 0; i < 600; ++i) docs.push_back({"x" + std::to_string(i)});
  const auto m = learn_phrases(docs);
  EXPECT_TRUE(m.accepts("every", "woman"));
  EXPECT_FALSE(m.accepts("woman", "every"));
  const auto p = m.phrases();
  EXPECT_NE(std::find(p.begin(), p.end(), "every_woman"), p.end());
}

TEST(Phrases, InvalidParameters) {
  EXPECT_THROW(PhraseModel(0, 10.0), Error);
  EXPECT_THROW(PhraseModel(5, 0.0), Error);
}

TEST(ApplyPhrases, Examples) {
  const auto m = tiny_model({{"every", "woman"}, {"cooks"}});
  EXPECT_EQ(apply_phrases({"every", "woman", "cooks"}, m), (Tokens{"every_woman", "cooks"}));
  EXPECT_EQ(apply_phrases({"woman", "every"}, m), (Tokens{"woman", "every"}));

  const auto abc = tiny_model({{"a", "b", "c"}});
  ASSERT_TRUE(abc.accepts("a", "b"));
  ASSERT_TRUE(abc.accepts("b", "c"));
  EXPECT_EQ(apply_phrases({"a", "b", "c"}, abc), (Tokens{"a_b", "c"}));
}

TEST(ApplyPhrases, LongJoinStaysApart) {
  const auto m = tiny_model({{"meditation", "retreat"}});
  ASSERT_TRUE(m.accepts("meditation", "retreat"));
  EXPECT_EQ(apply_phrases({"meditation", "retreat"}, m), (Tokens{"meditation", "retreat"}));
}

TEST(PreprocessDoc, Examples) {
  const auto stops = StopwordSet::english();
  const PhraseModel none(5, 10.0);
  EXPECT_EQ(preprocess_doc({"1", "", "RT Learning yoga with the friends"}, stops, none).tokens,
            (Tokens{"learn", "yoga", "friend"}));
  const auto empty = preprocess_doc({"2", "", ""}, stops, none);
  EXPECT_EQ(empty.doc_id, "2");
  EXPECT_TRUE(empty.tokens.empty());

  const auto m = tiny_model({{"every", "woman"}, {"cooks"}});
  EXPECT_EQ(preprocess_doc({"3", "", "every woman cooks"}, stops, m).tokens,
            (Tokens{"every_woman", "cook"}));
}

TEST(PreprocessCorpus, TokenInvariantsAndDeterminism) {
  std::vector<ingest::Document> docs;
  const std::vector<std::string> texts = {
      "RT @coach: Morning #Yoga flow!! http://t.co/abc with 3 friends",
      "Every woman deserves a vegan breakfast, every woman!",
      "Email me at someone@example.org about the Vegan Retreat 2018",
      "don't stop stretching; supercalifragilistic words are dropped",
      "every woman every woman every woman every woman every woman every woman"};
  for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back({std::to_string(i), "", texts[i]});
  const auto stops = StopwordSet::english();
  const auto a = preprocess_corpus(docs, stops, {1, 0.1});
  const auto b = preprocess_corpus(docs, stops, {1, 0.1});
  EXPECT_EQ(a, b);
  const std::regex shape("[a-z_]{2,15}");
  for (const auto& d : a) {
    for (const auto& t : d.tokens) {
      EXPECT_TRUE(std::regex_match(t, shape)) << t;
      EXPECT_FALSE(stops.contains(t)) << t;
    }
  }
}

TEST(TokenizedFile, RoundTrip) {
  TempDir dir;
  const std::vector<TokenizedDoc> docs = {{"1", {"yoga", "every_woman"}}, {"2", {}}};
  write_tokenized(dir / "t.jsonl", docs);
  EXPECT_EQ(read_tokenized(dir / "t.jsonl"), docs);
}

TEST(TokenizedFile, MalformedLineNamesPosition) {
  TempDir dir;
  {
    std::ofstream out(dir / "bad.jsonl");
    out << R"({"doc_id":"1","tokens":[]})" << "\n" << "{oops\n";
  }
  try {
    read_tokenized(dir / "bad.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}
