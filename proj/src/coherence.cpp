#include "topiclab/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <unordered_map>

#include "topiclab/error.hpp"

namespace topiclab::coherence {

namespace {

constexpr double kEps = 1e-12;

// Ids for the union of all topic terms, so counting can ignore the rest.
struct TermIndex {
  std::unordered_map<std::string, int> ids;
  std::vector<std::vector<int>> topics;

  explicit TermIndex(const TopTerms& top) {
    for (const auto& terms : top) {
      auto& row = topics.emplace_back();
      for (const auto& t : terms) {
        const auto [it, inserted] = ids.emplace(t, static_cast<int>(ids.size()));
        row.push_back(it->second);
      }
    }
  }
  int size() const { return static_cast<int>(ids.size()); }

  std::vector<int> encode(const preprocess::Tokens& doc) const {
    std::vector<int> out;
    out.reserve(doc.size());
    for (const auto& t : doc) {
      const auto it = ids.find(t);
      out.push_back(it == ids.end() ? -1 : it->second);
    }
    return out;
  }
};

// Occurrence counts over a set of boolean "documents" (windows or whole
// documents): single[i] and the symmetric pair table.
struct CoCounts {
  int n_terms;
  std::uint64_t n_units = 0;
  std::vector<std::uint64_t> single;
  std::vector<std::uint64_t> pair;

  explicit CoCounts(int n) : n_terms(n), single(n, 0), pair(static_cast<std::size_t>(n) * n, 0) {}

  void add_unit(const std::vector<int>& present) {
    ++n_units;
    for (std::size_t a = 0; a < present.size(); ++a) {
      ++single[present[a]];
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        ++pair[static_cast<std::size_t>(present[a]) * n_terms + present[b]];
        ++pair[static_cast<std::size_t>(present[b]) * n_terms + present[a]];
      }
    }
  }
  std::uint64_t joint(int a, int b) const {
    return a == b ? single[a] : pair[static_cast<std::size_t>(a) * n_terms + b];
  }
};

std::vector<int> distinct_present(const std::vector<int>& ids) {
  std::vector<int> out;
  for (int id : ids) {
    if (id >= 0) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double vec_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Lsa: return "lsa";
    case Algorithm::Nmf: return "nmf";
    case Algorithm::Lda: return "lda";
  }
  return "?";
}

std::string to_string(Measure measure) {
  switch (measure) {
    case Measure::UMass: return "umass";
    case Measure::Cv: return "cv";
    case Measure::TcW2v: return "tcw2v";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "lsa") return Algorithm::Lsa;
  if (name == "nmf") return Algorithm::Nmf;
  if (name == "lda") return Algorithm::Lda;
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

Measure parse_measure(std::string_view name) {
  if (name == "umass") return Measure::UMass;
  if (name == "cv") return Measure::Cv;
  if (name == "tcw2v") return Measure::TcW2v;
  throw Error(ErrorCode::InvalidArgument, "unknown coherence measure '" + std::string(name) + "'");
}

Measure default_measure(Algorithm algorithm) {
  return algorithm == Algorithm::Nmf ? Measure::TcW2v : Measure::Cv;
}

CoherenceReport make_report(Algorithm algorithm, Measure measure, std::vector<double> per_topic) {
  CoherenceReport r{algorithm, measure, std::move(per_topic), 0.0};
  if (!r.per_topic.empty()) {
    r.aggregate = std::accumulate(r.per_topic.begin(), r.per_topic.end(), 0.0) /
                  static_cast<double>(r.per_topic.size());
  }
  return r;
}

std::vector<double> umass_scores(const TopTerms& topics, const Docs& docs) {
  const TermIndex index(topics);
  CoCounts counts(index.size());
  for (const auto& doc : docs) counts.add_unit(distinct_present(index.encode(doc)));

  std::vector<double> scores;
  for (const auto& ids : index.topics) {
    std::vector<int> present;
    for (int id : ids) {
      if (counts.single[id] > 0) present.push_back(id);
    }
    double c = 0.0;
    for (std::size_t m = 1; m < present.size(); ++m) {
      for (std::size_t l = 0; l < m; ++l) {
        c += std::log((static_cast<double>(counts.joint(present[m], present[l])) + 1.0) /
                      static_cast<double>(counts.single[present[l]]));
      }
    }
    scores.push_back(c);
  }
  return scores;
}

double npmi(double p_ij, double p_i, double p_j) {
  if (p_i * p_j == 0.0) return 0.0;
  if (p_ij >= 1.0) return 1.0;
  return std::log((p_ij + kEps) / (p_i * p_j)) / -std::log(p_ij + kEps);
}

std::vector<double> cv_scores(const TopTerms& topics, const Docs& docs, int window) {
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  const TermIndex index(topics);
  CoCounts counts(index.size());
  const auto w = static_cast<std::size_t>(window);
  std::vector<int> in_window(static_cast<std::size_t>(index.size()), 0);
  std::vector<int> present;
  for (const auto& doc : docs) {
    const auto ids = index.encode(doc);
    if (ids.size() <= w) {
      counts.add_unit(distinct_present(ids));
      continue;
    }
    // Slide one token at a time, keeping per-term occurrence counts.
    for (std::size_t i = 0; i < w; ++i) {
      if (ids[i] >= 0) ++in_window[ids[i]];
    }
    for (std::size_t start = 0;; ++start) {
      present.clear();
      for (int t = 0; t < index.size(); ++t) {
        if (in_window[t] > 0) present.push_back(t);
      }
      counts.add_unit(present);
      if (start + w >= ids.size()) break;
      if (ids[start] >= 0) --in_window[ids[start]];
      if (ids[start + w] >= 0) ++in_window[ids[start + w]];
    }
    std::fill(in_window.begin(), in_window.end(), 0);
  }

  const double n = static_cast<double>(counts.n_units);
  auto p = [&](std::uint64_t c) { return n > 0.0 ? static_cast<double>(c) / n : 0.0; };
  std::vector<double> scores;
  for (const auto& ids : index.topics) {
    const std::size_t s = ids.size();
    std::vector<std::vector<double>> vecs(s, std::vector<double>(s));
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t b = 0; b < s; ++b) {
        vecs[a][b] = npmi(p(counts.joint(ids[a], ids[b])), p(counts.single[ids[a]]),
                          p(counts.single[ids[b]]));
      }
    }
    std::vector<double> total(s, 0.0);
    for (const auto& v : vecs) {
      for (std::size_t b = 0; b < s; ++b) total[b] += v[b];
    }
    double sum = 0.0;
    for (const auto& v : vecs) sum += vec_cosine(v, total);
    scores.push_back(s == 0 ? 0.0 : sum / static_cast<double>(s));
  }
  return scores;
}

std::vector<double> tcw2v_scores(const TopTerms& topics, const embedding::EmbeddingTable& emb) {
  std::vector<double> scores;
  for (const auto& terms : topics) {
    std::vector<Eigen::VectorXd> vecs;
    for (const auto& t : terms) {
      if (auto v = emb.vector(t)) vecs.push_back(std::move(*v));
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      for (std::size_t j = i + 1; j < vecs.size(); ++j) {
        sum += embedding::cosine(vecs[i], vecs[j]);
        ++pairs;
      }
    }
    scores.push_back(pairs == 0 ? 0.0 : sum / static_cast<double>(pairs));
  }
  return scores;
}

CoherenceReport umass_coherence(const TopTerms& topics, const Docs& docs, Algorithm algorithm) {
  return make_report(algorithm, Measure::UMass, umass_scores(topics, docs));
}

CoherenceReport cv_coherence(const TopTerms& topics, const Docs& docs, int window,
                             Algorithm algorithm) {
  return make_report(algorithm, Measure::Cv, cv_scores(topics, docs, window));
}

CoherenceReport tcw2v_coherence(const TopTerms& topics, const embedding::EmbeddingTable& emb,
                                Algorithm algorithm) {
  return make_report(algorithm, Measure::TcW2v, tcw2v_scores(topics, emb));
}

namespace {

template <typename Ranked>
TopTerms to_tokens(int k, const corpus::Vocabulary& vocab, Ranked ranked) {
  TopTerms out;
  for (int t = 0; t < k; ++t) {
    auto& terms = out.emplace_back();
    for (const auto& [id, weight] : ranked(t)) terms.push_back(vocab.token(id));
  }
  return out;
}

}  // namespace

TopTerms top_terms(const lsa::LsaModel& model, const corpus::Vocabulary& vocab, std::size_t n) {
  return to_tokens(model.k, vocab, [&](int t) { return lsa::top_terms_lsa(model, t, n); });
}

TopTerms top_terms(const nmf::NmfModel& model, const corpus::Vocabulary& vocab, std::size_t n) {
  return to_tokens(model.k, vocab, [&](int t) { return nmf::top_terms_nmf(model, t, n); });
}

TopTerms top_terms(const lda::LdaModel& model, const corpus::Vocabulary& vocab, std::size_t n) {
  return to_tokens(model.k, vocab, [&](int t) { return lda::top_terms_lda(model, t, n); });
}

int best_k(const std::map<int, double>& scores) {
  if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no scores to select from");
  auto best = scores.begin();
  for (auto it = scores.begin(); it != scores.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

KSelectionResult select_k(Algorithm algorithm, const std::vector<int>& ks, Measure measure,
                          const std::vector<preprocess::TokenizedDoc>& docs,
                          const corpus::Vocabulary& vocab, std::uint64_t seed,
                          const SweepOptions& options) {
  if (ks.empty()) throw Error(ErrorCode::InvalidArgument, "empty k range");
  Docs texts;
  texts.reserve(docs.size());
  for (const auto& d : docs) texts.push_back(d.tokens);

  const auto counts = corpus::bow_matrix(docs, vocab);
  const auto weighted = algorithm == Algorithm::Lda ? corpus::SparseDocTermMatrix{}
                                                    : corpus::tfidf_weight(counts, vocab);
  std::optional<embedding::EmbeddingTable> emb;
  if (measure == Measure::TcW2v) emb = embedding::train_sgns(texts, options.sgns, seed);

  auto score_one = [&](int k) {
    TopTerms top;
    switch (algorithm) {
      case Algorithm::Lsa:
        top = top_terms(lsa::train_lsa(weighted, k, seed, options.svd), vocab, options.top_n);
        break;
      case Algorithm::Nmf:
        top = top_terms(nmf::train_nmf(weighted, k, seed, options.nmf), vocab, options.top_n);
        break;
      case Algorithm::Lda:
        top = top_terms(lda::train_lda(counts, k, seed, options.lda), vocab, options.top_n);
        break;
    }
    switch (measure) {
      case Measure::UMass: return umass_coherence(top, texts, algorithm);
      case Measure::Cv: return cv_coherence(top, texts, options.cv_window, algorithm);
      case Measure::TcW2v: return tcw2v_coherence(top, *emb, algorithm);
    }
    return CoherenceReport{};
  };

  KSelectionResult result;
  result.algorithm = algorithm;
  result.measure = measure;
  if (options.parallel) {
    std::vector<std::pair<int, std::future<CoherenceReport>>> jobs;
    for (int k : ks) jobs.emplace_back(k, std::async(std::launch::async, score_one, k));
    for (auto& [k, job] : jobs) result.reports[k] = job.get();
  } else {
    for (int k : ks) result.reports[k] = score_one(k);
  }
  for (const auto& [k, report] : result.reports) result.scores[k] = report.aggregate;
  result.best_k = best_k(result.scores);
  return result;
}

}  // namespace topiclab::coherence
