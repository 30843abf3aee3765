#include "topiclab/synth.hpp"

#include <algorithm>
#include <functional>
#include <nlohmann/json.hpp>
#include <random>

#include "topiclab/embedding.hpp"
#include "topiclab/error.hpp"

namespace topiclab::synth {

using nlohmann::json;

namespace {

constexpr std::string_view kAlphabet = "bcdfghjklmnpqrtvwxz";

std::size_t sample(const std::vector<double>& cumulative, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, cumulative.back());
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), unif(rng));
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(const Eigen::VectorXd& p) {
  std::vector<double> c(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) c[static_cast<std::size_t>(i)] = acc += p(i);
  return c;
}

}  // namespace

std::string synth_word(int i) {
  const int base = static_cast<int>(kAlphabet.size());
  if (i < 0 || i >= base * base * base) throw Error(ErrorCode::InvalidArgument, "synthetic word index out of range");
  std::string w = "t";
  w += kAlphabet[static_cast<std::size_t>(i / (base * base))];
  w += kAlphabet[static_cast<std::size_t>((i / base) % base)];
  w += kAlphabet[static_cast<std::size_t>(i % base)];
  return w;
}

SynthCorpus generate(const SynthOptions& o, std::uint64_t seed) {
  if (o.k < 1 || o.vocab_size < o.k || o.n_docs < 1 || o.min_len < 1 || o.max_len < o.min_len ||
      !(o.alpha > 0.0) || o.noise < 0.0 || o.noise > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid synthetic corpus options");
  }
  SynthCorpus c;
  for (int i = 0; i < o.vocab_size; ++i) c.vocab.push_back(synth_word(i));

  c.phi = Eigen::MatrixXd::Constant(o.k, o.vocab_size, o.noise / o.vocab_size);
  for (int t = 0; t < o.k; ++t) {
    const int lo = t * o.vocab_size / o.k;
    const int hi = (t + 1) * o.vocab_size / o.k;
    double norm = 0.0;
    for (int r = 0; r < hi - lo; ++r) norm += 1.0 / (r + 1.0);
    for (int r = 0; r < hi - lo; ++r) c.phi(t, lo + r) += (1.0 - o.noise) / (r + 1.0) / norm;
  }

  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(o.alpha, 1.0);
  std::uniform_int_distribution<int> length(o.min_len, o.max_len);
  std::vector<std::vector<double>> word_cdf;
  for (int t = 0; t < o.k; ++t) word_cdf.push_back(cumulate(c.phi.row(t).transpose()));

  c.theta.resize(o.n_docs, o.k);
  for (int d = 0; d < o.n_docs; ++d) {
    Eigen::VectorXd theta(o.k);
    for (int t = 0; t < o.k; ++t) theta(t) = gamma(rng);
    const double s = theta.sum();
    theta = s > 0.0 ? Eigen::VectorXd(theta / s) : Eigen::VectorXd::Constant(o.k, 1.0 / o.k);
    c.theta.row(d) = theta.transpose();
    const auto topic_cdf = cumulate(theta);

    preprocess::TokenizedDoc doc;
    doc.doc_id = std::to_string(1000000 + d);
    const int len = length(rng);
    for (int i = 0; i < len; ++i) {
      const auto t = sample(topic_cdf, rng);
      doc.tokens.push_back(c.vocab[sample(word_cdf[t], rng)]);
    }
    c.docs.push_back(std::move(doc));
  }
  return c;
}

std::string to_records(const SynthCorpus& corpus, const std::string& keyword_tag) {
  std::string out;
  for (const auto& doc : corpus.docs) {
    std::string text;
    for (const auto& t : doc.tokens) text += t + " ";
    text += keyword_tag;
    out += json{{"id_str", doc.doc_id},
                {"created_at", "Mon Jan 01 00:00:00 +0000 2018"},
                {"text", text}}
               .dump() +
           "\n";
  }
  return out;
}

std::string phi_to_json(const SynthCorpus& corpus) {
  json rows = json::array();
  for (Eigen::Index t = 0; t < corpus.phi.rows(); ++t) {
    rows.push_back(std::vector<double>(corpus.phi.row(t).begin(), corpus.phi.row(t).end()));
  }
  return json{{"vocab", corpus.vocab}, {"phi", rows}}.dump() + "\n";
}

double best_pairing_cosine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || a.rows() > b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::Dimension, "cannot pair topic matrices of these shapes");
  }
  Eigen::MatrixXd cos(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      cos(i, j) = embedding::cosine(a.row(i).transpose(), b.row(j).transpose());
    }
  }
  std::vector<bool> used(static_cast<std::size_t>(b.rows()), false);
  double best = -1e300;
  std::function<void(Eigen::Index, double)> search = [&](Eigen::Index i, double sum) {
    if (i == a.rows()) {
      best = std::max(best, sum);
      return;
    }
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      search(i + 1, sum + cos(i, j));
      used[static_cast<std::size_t>(j)] = false;
    }
  };
  search(0, 0.0);
  return best / static_cast<double>(a.rows());
}

}  // namespace topiclab::synth
