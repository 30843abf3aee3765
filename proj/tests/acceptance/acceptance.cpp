// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: topiclab_acceptance [criterion numbers...]

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "topiclab/broker.hpp"
#include "topiclab/broker_net.hpp"
#include "topiclab/cli.hpp"
#include "topiclab/coherence.hpp"
#include "topiclab/corpus.hpp"
#include "topiclab/embedding.hpp"
#include "topiclab/eval.hpp"
#include "topiclab/lda.hpp"
#include "topiclab/lsa.hpp"
#include "topiclab/model_io.hpp"
#include "topiclab/nmf.hpp"
#include "topiclab/preprocess.hpp"
#include "topiclab/synth.hpp"
#include "topiclab/util.hpp"
#include "topiclab/visexport.hpp"

namespace fs = std::filesystem;
using namespace topiclab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("topiclab-acceptance-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (code != 0) std::fprintf(stderr, "cli %s failed: %s\n", args.front().c_str(), err.str().c_str());
  return code;
}

Eigen::MatrixXd uniform_matrix(int n, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = u(rng);
  return x;
}

// 1. synth + select-k picks the planted k.
Outcome synthetic_k_selection() {
  ScratchDir dir("k");
  const auto start = Clock::now();
  int hits = 0;
  std::string picks;
  for (int seed = 1; seed <= 10; ++seed) {
    const std::string s = std::to_string(seed);
    const auto tokens = dir / ("tokens" + s + ".jsonl");
    if (run_cli({"synth", "--seed", s, "--docs", "2000", "--k", "4", "--vocab-size", "500", "--alpha", "0.1",
                 "--out-tokens", tokens}) != 0) {
      return {false, "synth failed"};
    }
    std::string out;
    if (run_cli({"select-k", "--algo", "lda", "--measure", "cv", "--krange", "2..8", "--seed", s, "--in", tokens},
                &out) != 0) {
      return {false, "select-k failed"};
    }
    const auto pos = out.find("best_k=");
    const int best = pos == std::string::npos ? -1 : std::stoi(out.substr(pos + 7));
    picks += (picks.empty() ? "" : ",") + std::to_string(best);
    if (best == 4) ++hits;
  }
  const double secs = seconds_since(start);
  return {hits >= 8 && secs < 300.0,
          std::to_string(hits) + "/10 seeds chose k=4 [" + picks + "]" + fmt(", %.1f s (limit 300)", secs)};
}

// 2. LDA recovers the planted topic-word rows.
Outcome lda_recovery() {
  synth::SynthOptions o;
  const auto corpus = synth::generate(o, 42);
  const auto start = Clock::now();
  const auto vocab = corpus::Vocabulary::build(corpus.docs, 1, 1.0);
  const auto bow = corpus::bow_matrix(corpus.docs, vocab);
  const auto model = lda::train_lda(bow, 4, 42);
  const double secs = seconds_since(start);
  Eigen::MatrixXd planted = Eigen::MatrixXd::Zero(4, static_cast<Eigen::Index>(vocab.size()));
  for (int j = 0; j < o.vocab_size; ++j) {
    if (const auto id = vocab.id(corpus.vocab[static_cast<std::size_t>(j)])) planted.col(*id) = corpus.phi.col(j);
  }
  const double cos = synth::best_pairing_cosine(planted, model.phi);
  return {cos >= 0.8 && secs < 60.0, fmt("mean best-pairing cosine %.4f (>= 0.8), %.1f s (limit 60)", cos, secs)};
}

// 3. NMF objective never increases.
Outcome nmf_monotone() {
  std::mt19937_64 rng(3);
  int runs = 0, increases = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto v = uniform_matrix(50, 40, rng);
    for (int k : {2, 5}) {
      const auto m = nmf::train_nmf(v, k, static_cast<std::uint64_t>(i));
      ++runs;
      for (std::size_t t = 1; t < m.objective_trace.size(); ++t) {
        const double rise = m.objective_trace[t] - m.objective_trace[t - 1];
        worst = std::max(worst, rise);
        if (rise > 1e-10) ++increases;
      }
    }
  }
  return {increases == 0, std::to_string(runs) + " runs, " + std::to_string(increases) +
                              " increasing iterations" + fmt(", largest rise %.3g", worst)};
}

// 4. LSA against a Jacobi eigenvalue oracle.
Outcome lsa_oracle() {
  std::mt19937_64 rng(4);
  double worst_sv = 0.0, worst_ey = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto x = uniform_matrix(30, 20, rng);
    const auto sv = oracle::singular_values(x);
    const auto r = lsa::truncated_svd(x, 3, static_cast<std::uint64_t>(i));
    for (int j = 0; j < 3; ++j) {
      worst_sv = std::max(worst_sv, std::abs(r.s(j) - sv[static_cast<std::size_t>(j)]) / sv[static_cast<std::size_t>(j)]);
    }
    double tail = 0.0;
    for (std::size_t j = 3; j < sv.size(); ++j) tail += sv[j] * sv[j];
    const double residual = (x - r.u * r.s.asDiagonal() * r.v.transpose()).norm();
    worst_ey = std::max(worst_ey, std::abs(residual - std::sqrt(tail)) / std::sqrt(tail));
  }
  return {worst_sv <= 1e-6 && worst_ey <= 1e-6,
          fmt("max relative singular value error %.3g, Eckart-Young error %.3g (limit 1e-6)", worst_sv, worst_ey)};
}

// 5. Coherence measures against direct-formula oracles.
Outcome coherence_oracles() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const int n_terms = std::uniform_int_distribution<int>(2, 12)(rng);
    const int n_docs = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<std::string> terms;
    for (int t = 0; t < n_terms; ++t) terms.push_back("w" + std::to_string(t));
    coherence::Docs docs;
    for (int d = 0; d < n_docs; ++d) {
      preprocess::Tokens doc;
      const int len = std::uniform_int_distribution<int>(1, 20)(rng);
      for (int i = 0; i < len; ++i) doc.push_back(terms[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n_terms - 1)(rng))]);
      docs.push_back(doc);
    }
    coherence::TopTerms topics;
    for (int t = 0; t < 3; ++t) {
      auto pool = terms;
      pool.push_back("unseen");
      std::shuffle(pool.begin(), pool.end(), rng);
      const int size = std::uniform_int_distribution<int>(1, std::min<int>(6, static_cast<int>(pool.size())))(rng);
      topics.emplace_back(pool.begin(), pool.begin() + size);
    }
    const int window = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto um = coherence::umass_scores(topics, docs);
    const auto um_ref = oracle::umass(topics, docs);
    const auto cv = coherence::cv_scores(topics, docs, window);
    const auto cv_ref = oracle::cv(topics, docs, static_cast<std::size_t>(window));
    for (std::size_t t = 0; t < topics.size(); ++t) {
      worst = std::max({worst, std::abs(um[t] - um_ref[t]), std::abs(cv[t] - cv_ref[t])});
    }
  }
  return {worst <= 1e-10, fmt("50 corpora, max |optimized - oracle| %.3g (limit 1e-10)", worst)};
}

// 6. SGNS gradient against central differences.
Outcome sgns_gradient() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 0.5);
  auto vec = [&](int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = g(rng);
    return v;
  };
  auto rel = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
  };
  double worst = 0.0;
  for (int p = 0; p < 20; ++p) {
    const int dim = 10;
    const auto v = vec(dim);
    const auto u = vec(dim);
    std::vector<Eigen::VectorXd> negs;
    for (int i = 0; i < 5; ++i) negs.push_back(vec(dim));
    const auto grad = embedding::sgns_pair_gradient(v, u, negs);
    worst = std::max(worst, rel(grad.d_center, oracle::numeric_gradient(
                                                   [&](const Eigen::VectorXd& x) { return embedding::sgns_pair_loss(x, u, negs); }, v)));
    worst = std::max(worst, rel(grad.d_context, oracle::numeric_gradient(
                                                    [&](const Eigen::VectorXd& x) { return embedding::sgns_pair_loss(v, x, negs); }, u)));
    for (std::size_t n = 0; n < negs.size(); ++n) {
      worst = std::max(worst, rel(grad.d_negatives[n], oracle::numeric_gradient(
                                                           [&](const Eigen::VectorXd& x) {
                                                             auto copy = negs;
                                                             copy[n] = x;
                                                             return embedding::sgns_pair_loss(v, u, copy);
                                                           },
                                                           negs[n])));
    }
  }
  return {worst < 1e-4, fmt("20 points, max relative error %.3g (limit 1e-4)", worst)};
}

// 7. Random guessing converges to 1/k.
Outcome random_baseline() {
  const auto start = Clock::now();
  const double mean = eval::random_baseline(4, 500, 1000, 42);
  const double secs = seconds_since(start);
  return {std::abs(mean - 0.25) <= 0.02 && secs < 5.0, fmt("mean accuracy %.4f (0.25 +/- 0.02), %.2f s (limit 5)", mean, secs)};
}

// 8. Porter stemmer against the reference vocabulary.
Outcome porter_reference() {
  std::ifstream voc(std::string(TOPICLAB_TEST_DATA) + "/porter_voc.txt");
  std::ifstream expected(std::string(TOPICLAB_TEST_DATA) + "/porter_output.txt");
  std::size_t total = 0, wrong = 0;
  std::string w, s, first_wrong;
  while (std::getline(voc, w) && std::getline(expected, s)) {
    if (w.empty()) continue;
    ++total;
    if (preprocess::porter_stem(w) != s) {
      if (first_wrong.empty()) first_wrong = w;
      ++wrong;
    }
  }
  ++total;
  if (preprocess::porter_stem("connections") != "connect") {
    ++wrong;
    if (first_wrong.empty()) first_wrong = "connections";
  }
  return {total > 20000 && wrong == 0, std::to_string(total - wrong) + "/" + std::to_string(total) + " entries match" +
                                            (first_wrong.empty() ? "" : ", first mismatch " + first_wrong)};
}

// 9. Broker under concurrent producers.
Outcome broker_stress() {
  broker::Broker b;
  broker::BrokerServer server(b, broker::Endpoint{"127.0.0.1", 0});
  server.start();
  const auto start = Clock::now();
  const std::vector<std::string> topics = {"alpha", "beta", "gamma"};
  std::atomic<int> failures{0};
  std::vector<std::thread> producers;
  for (int p = 0; p < 4; ++p) {
    producers.emplace_back([&, p] {
      try {
        broker::BrokerClient client(broker::Endpoint{"127.0.0.1", server.port()});
        for (int i = 0; i < 2500; ++i) {
          client.publish(topics[static_cast<std::size_t>((i + p) % 3)], std::to_string(p) + ":" + std::to_string(i));
        }
      } catch (const std::exception&) {
        ++failures;
      }
    });
  }
  for (auto& t : producers) t.join();

  broker::BrokerClient reader(broker::Endpoint{"127.0.0.1", server.port()});
  std::size_t total = 0;
  bool dense = true, ordered = true;
  for (const auto& topic : topics) {
    const auto records = reader.fetch_all(topic, 0);
    std::map<int, int> last;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].offset != i) dense = false;
      const auto colon = records[i].payload.find(':');
      const int p = std::stoi(records[i].payload.substr(0, colon));
      const int seq = std::stoi(records[i].payload.substr(colon + 1));
      if (last.count(p) && last[p] >= seq) ordered = false;
      last[p] = seq;
    }
    total += records.size();
  }
  server.stop();
  const double secs = seconds_since(start);
  return {failures == 0 && total == 10000 && dense && ordered && secs < 30.0,
          std::to_string(total) + "/10000 recovered, offsets " + (dense ? "dense" : "NOT dense") + ", producer order " +
              (ordered ? "kept" : "BROKEN") + fmt(", %.1f s (limit 30)", secs)};
}

// 10. The whole pipeline twice, byte for byte.
Outcome pipeline_determinism() {
  ScratchDir dir("det");
  if (run_cli({"synth", "--seed", "10", "--docs", "300", "--k", "4", "--vocab-size", "200", "--out-records",
               dir / "records.jsonl"}) != 0) {
    return {false, "synth failed"};
  }
  const std::vector<std::string> outputs = {"docs.jsonl", "tokens.jsonl", "model.tlab", "model.tlab.vocab.tsv",
                                            "assign.csv", "report.csv", "vis.json"};
  std::vector<std::map<std::string, std::string>> runs;
  for (int round = 0; round < 2; ++round) {
    const std::string r = "run" + std::to_string(round) + "_";
    broker::Broker b;
    broker::BrokerServer server(b, broker::Endpoint{"127.0.0.1", 0});
    server.start();
    const std::string address = "127.0.0.1:" + std::to_string(server.port());
    const bool ok =
        run_cli({"ingest", "--broker", address, "--topic", "tweets", "--in", dir / "records.jsonl"}) == 0 &&
        run_cli({"consume", "--broker", address, "--topic", "tweets", "--out", dir / (r + "docs.jsonl")}) == 0 &&
        run_cli({"preprocess", "--in", dir / (r + "docs.jsonl"), "--out", dir / (r + "tokens.jsonl")}) == 0 &&
        run_cli({"train", "--algo", "lda", "--k", "4", "--seed", "7", "--iters", "200", "--in",
                 dir / (r + "tokens.jsonl"), "--out", dir / (r + "model.tlab")}) == 0 &&
        run_cli({"infer", "--model", dir / (r + "model.tlab"), "--in", dir / (r + "tokens.jsonl"), "--seed", "7",
                 "--out", dir / (r + "assign.csv")}) == 0;
    server.stop();
    if (!ok) return {false, "pipeline step failed in run " + std::to_string(round + 1)};

    // Gold labels: the first 100 documents labelled with their predicted
    // topic shifted by one, tied to this run's model file.
    const auto assigned = eval::parse_assignments(util::read_file(dir / (r + "assign.csv")));
    eval::AnnotationFile gold{model_io::file_hash(dir / (r + "model.tlab")), {}};
    for (std::size_t i = 0; i < std::min<std::size_t>(100, assigned.size()); ++i) {
      gold.annotations.push_back({assigned[i].doc_id, (assigned[i].dominant_topic + static_cast<int>(i % 2)) % 4 + 1});
    }
    eval::write_annotations(dir / (r + "gold.csv"), gold);
    if (run_cli({"eval", "--assignments", dir / (r + "assign.csv"), "--gold", dir / (r + "gold.csv"), "--model",
                 dir / (r + "model.tlab"), "--out", dir / (r + "report.csv")}) != 0 ||
        run_cli({"export-vis", "--model", dir / (r + "model.tlab"), "--in", dir / (r + "tokens.jsonl"), "--seed", "7",
                 "--out", dir / (r + "vis.json")}) != 0) {
      return {false, "eval/export-vis failed in run " + std::to_string(round + 1)};
    }
    std::map<std::string, std::string> files;
    for (const auto& name : outputs) files[name] = util::read_file(dir / (r + name));
    runs.push_back(std::move(files));
  }
  std::string differing;
  std::size_t bytes = 0;
  for (const auto& name : outputs) {
    bytes += runs[0][name].size();
    if (runs[0][name] != runs[1][name] || runs[0][name].empty()) differing += " " + name;
  }
  return {differing.empty(), differing.empty()
                                 ? std::to_string(outputs.size()) + " output files identical (" + std::to_string(bytes) + " bytes)"
                                 : "differing or empty:" + differing};
}

// 11. Vis export invariants on a trained model.
Outcome vis_invariants() {
  synth::SynthOptions o;
  o.n_docs = 500;
  const auto corpus = synth::generate(o, 11);
  const auto vocab = corpus::Vocabulary::build(corpus.docs, 2, 0.5);
  const auto bow = corpus::bow_matrix(corpus.docs, vocab);
  lda::LdaOptions lo;
  lo.n_iters = 200;
  auto model = lda::train_lda(bow, 4, 11, lo);
  model.vocab_hash = vocab.hash();
  const auto vis = visexport::export_vis(model, vocab, bow, 0.6, 30);
  const auto vis1 = visexport::export_vis(model, vocab, bow, 1.0, 30);

  double sum = 0.0;
  for (const auto& t : vis.topics) sum += t.proportion;
  bool js_ok = true;
  for (Eigen::Index a = 0; a < vis.distances.rows(); ++a) {
    if (vis.distances(a, a) != 0.0) js_ok = false;
    for (Eigen::Index b = 0; b < vis.distances.cols(); ++b) {
      if (vis.distances(a, b) != vis.distances(b, a) || vis.distances(a, b) > std::log(2.0) || vis.distances(a, b) < 0.0) {
        js_ok = false;
      }
    }
  }
  bool ranking_ok = true;
  for (int t = 0; t < 4; ++t) {
    const auto top = lda::top_terms_lda(model, t, 30);
    for (std::size_t i = 0; i < top.size(); ++i) {
      if (vis1.per_topic_terms[static_cast<std::size_t>(t)][i].term != vocab.token(top[i].first)) ranking_ok = false;
    }
  }
  const bool sum_ok = std::abs(sum - 1.0) <= 1e-9;
  return {sum_ok && js_ok && ranking_ok,
          fmt("proportion sum - 1 = %.3g", sum - 1.0) + ", JS matrix " + (js_ok ? "valid" : "INVALID") +
              ", lambda=1 ranking " + (ranking_ok ? "equals phi ranking" : "DIFFERS from phi ranking")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"synthetic end-to-end k selection", synthetic_k_selection},
      {"LDA planted-topic recovery", lda_recovery},
      {"NMF objective monotonicity", nmf_monotone},
      {"LSA singular value oracle", lsa_oracle},
      {"coherence brute-force oracles", coherence_oracles},
      {"SGNS gradient check", sgns_gradient},
      {"random baseline", random_baseline},
      {"Porter reference vocabulary", porter_reference},
      {"broker stress", broker_stress},
      {"pipeline determinism", pipeline_determinism},
      {"vis export invariants", vis_invariants},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(number)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", number, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
