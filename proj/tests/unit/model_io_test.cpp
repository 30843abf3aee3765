#include "topiclab/model_io.hpp"

#include <gtest/gtest.h>

#include "temp_dir.hpp"
#include "topiclab/error.hpp"
#include "topiclab/synth.hpp"
#include "topiclab/util.hpp"

using namespace topiclab;
using namespace topiclab::model_io;

namespace {

corpus::SparseDocTermMatrix small_bow(std::uint64_t seed) {
  synth::SynthOptions o;
  o.n_docs = 60;
  o.k = 2;
  o.vocab_size = 40;
  const auto s = synth::generate(o, seed);
  return corpus::bow_matrix(s.docs, corpus::Vocabulary::build(s.docs, 1, 1.0));
}

}  // namespace

TEST(ModelIo, LdaRoundTripIsExact) {
  TempDir dir;
  lda::LdaOptions o;
  o.n_iters = 10;
  auto m = lda::train_lda(small_bow(1), 3, 1, o);
  m.vocab_hash = "h";
  save(dir / "m.tlab", m);
  const auto back = load_lda(dir / "m.tlab");
  EXPECT_EQ(back.k, 3);
  EXPECT_EQ(back.alpha, m.alpha);
  EXPECT_EQ(back.phi, m.phi);
  EXPECT_EQ(back.theta_train, m.theta_train);
  EXPECT_EQ(back.topic_word_counts, m.topic_word_counts);
  EXPECT_EQ(back.vocab_hash, "h");
  EXPECT_EQ(back.seed, 1u);
  EXPECT_EQ(serialize(back), serialize(m));
}

TEST(ModelIo, NmfAndLsaRoundTrip) {
  const auto bow = small_bow(2);
  auto n = nmf::train_nmf(bow, 2, 4);
  const auto nb = std::get<nmf::NmfModel>(parse(serialize(n)));
  EXPECT_EQ(nb.h, n.h);
  EXPECT_EQ(nb.objective_trace, n.objective_trace);

  const auto l = lsa::train_lsa(bow, 2, 4);
  const auto lb = std::get<lsa::LsaModel>(parse(serialize(l)));
  EXPECT_EQ(lb.singular_values, l.singular_values);
  EXPECT_EQ(lb.term_loadings, l.term_loadings);
}

TEST(ModelIo, Errors) {
  TempDir dir;
  EXPECT_THROW(parse("{}"), Error);
  try {
    parse("TLAB1\n{\"type\":\"lda\"");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Malformed);
  }
  save(dir / "n.tlab", nmf::train_nmf(small_bow(3), 2, 1));
  EXPECT_THROW(load_lda(dir / "n.tlab"), Error);
  try {
    load(dir / "absent.tlab");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(ModelIo, FileHashIsContentHash) {
  TempDir dir;
  util::write_file_atomic(dir / "x", "abc");
  EXPECT_EQ(file_hash(dir / "x"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
