#include "topiclab/visexport.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::visexport {

using nlohmann::json;

namespace {

// Sum of p ln(p / m), with 0 ln 0 = 0.
double kl_part(const Eigen::VectorXd& p, const Eigen::VectorXd& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) s += p(i) * std::log(p(i) / m(i));
  }
  return s;
}

std::vector<std::size_t> ranked(std::size_t n, std::size_t keep,
                                const std::function<bool(std::size_t, std::size_t)>& before) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), before);
  ids.resize(std::min(keep, n));
  return ids;
}

double number_or_neg_inf(const json& j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

double js_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const Eigen::VectorXd m = 0.5 * (p + q);
  const double js = 0.5 * kl_part(p, m) + 0.5 * kl_part(q, m);
  return std::clamp(js, 0.0, std::log(2.0));
}

Eigen::MatrixXd js_matrix(const Eigen::MatrixXd& phi) {
  const Eigen::Index k = phi.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      d(a, b) = d(b, a) = js_divergence(phi.row(a).transpose(), phi.row(b).transpose());
    }
  }
  return d;
}

Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& distances) {
  const Eigen::Index k = distances.rows();
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(k, 2);
  if (k < 2) return coords;
  const Eigen::MatrixXd j =
      Eigen::MatrixXd::Identity(k, k) - Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(k));
  const Eigen::MatrixXd b = -0.5 * j * distances.cwiseAbs2() * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  // Eigenvalues come back ascending.
  for (Eigen::Index axis = 0; axis < std::min<Eigen::Index>(2, k); ++axis) {
    const Eigen::Index idx = k - 1 - axis;
    const double lambda = std::max(0.0, eig.eigenvalues()(idx));
    Eigen::VectorXd v = eig.eigenvectors().col(idx) * std::sqrt(lambda);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (std::abs(v(i)) > 1e-15) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    coords.col(axis) = v;
  }
  return coords;
}

Eigen::MatrixXd topic_given_term(const Eigen::MatrixXd& phi, const Eigen::VectorXd& proportions) {
  Eigen::MatrixXd joint = proportions.asDiagonal() * phi;
  for (Eigen::Index w = 0; w < joint.cols(); ++w) {
    const double s = joint.col(w).sum();
    if (s > 0.0) joint.col(w) /= s;
  }
  return joint;
}

double relevance(double phi, double p_w, double lambda) {
  if (lambda >= 1.0) return std::log(phi);
  if (p_w <= 0.0) return -std::numeric_limits<double>::infinity();
  return lambda * std::log(phi) + (1.0 - lambda) * std::log(phi / p_w);
}

VisExport export_vis(const lda::LdaModel& model, const corpus::Vocabulary& vocab,
                     const corpus::SparseDocTermMatrix& bow, const Eigen::MatrixXd& theta,
                     double lambda, std::size_t n_terms) {
  const Eigen::Index k = model.k;
  const auto m = static_cast<Eigen::Index>(vocab.size());
  if ((!model.vocab_hash.empty() && model.vocab_hash != vocab.hash()) || model.phi.cols() != m ||
      static_cast<Eigen::Index>(bow.n_cols()) != m) {
    throw Error(ErrorCode::VocabularyMismatch, "model, vocabulary and corpus disagree");
  }
  if (theta.rows() != static_cast<Eigen::Index>(bow.n_rows()) || theta.cols() != k) {
    throw Error(ErrorCode::Dimension, "theta does not match the corpus documents");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");
  }

  Eigen::VectorXd term_counts = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(k);
  double total = 0.0;
  for (std::size_t d = 0; d < bow.n_rows(); ++d) {
    const double len = bow.row_sum(d);
    for (const auto& e : bow.row(d)) term_counts(e.term) += e.value;
    weighted += len * theta.row(static_cast<Eigen::Index>(d)).transpose();
    total += len;
  }
  if (total <= 0.0) throw Error(ErrorCode::EmptyCorpus, "corpus has no tokens");
  const Eigen::VectorXd proportions = weighted / total;
  const Eigen::VectorXd p_w = term_counts / total;

  VisExport vis;
  vis.lambda = lambda;
  vis.distances = js_matrix(model.phi);
  const Eigen::MatrixXd coords = classical_mds(vis.distances);
  for (Eigen::Index t = 0; t < k; ++t) {
    vis.topics.push_back({static_cast<int>(t + 1), proportions(t), coords(t, 0), coords(t, 1)});
  }

  const Eigen::MatrixXd p_t_w = topic_given_term(model.phi, proportions);
  Eigen::VectorXd saliency = Eigen::VectorXd::Zero(m);
  for (Eigen::Index w = 0; w < m; ++w) {
    double kl = 0.0;
    for (Eigen::Index t = 0; t < k; ++t) {
      const double p = p_t_w(t, w);
      if (p > 0.0 && proportions(t) > 0.0) kl += p * std::log(p / proportions(t));
    }
    saliency(w) = std::max(0.0, p_w(w) * kl);
  }
  for (auto w : ranked(static_cast<std::size_t>(m), n_terms,
                       [&](std::size_t a, std::size_t b) {
                         return saliency(static_cast<Eigen::Index>(a)) > saliency(static_cast<Eigen::Index>(b));
                       })) {
    const auto i = static_cast<Eigen::Index>(w);
    vis.default_terms.push_back({vocab.token(static_cast<corpus::TermId>(w)), saliency(i),
                                 term_counts(i), term_counts(i)});
  }

  for (Eigen::Index t = 0; t < k; ++t) {
    Eigen::VectorXd rel(m);
    for (Eigen::Index w = 0; w < m; ++w) rel(w) = relevance(model.phi(t, w), p_w(w), lambda);
    auto& rows = vis.per_topic_terms.emplace_back();
    for (auto w : ranked(static_cast<std::size_t>(m), n_terms, [&](std::size_t a, std::size_t b) {
           const auto ia = static_cast<Eigen::Index>(a);
           const auto ib = static_cast<Eigen::Index>(b);
           if (rel(ia) != rel(ib)) return rel(ia) > rel(ib);
           return model.phi(t, ia) > model.phi(t, ib);
         })) {
      const auto i = static_cast<Eigen::Index>(w);
      rows.push_back({vocab.token(static_cast<corpus::TermId>(w)), rel(i),
                      p_t_w(t, i) * term_counts(i), term_counts(i)});
    }
  }
  return vis;
}

VisExport export_vis(const lda::LdaModel& model, const corpus::Vocabulary& vocab,
                     const corpus::SparseDocTermMatrix& bow, double lambda, std::size_t n_terms) {
  return export_vis(model, vocab, bow, model.theta_train, lambda, n_terms);
}

std::string to_json(const VisExport& vis) {
  json j;
  j["lambda"] = vis.lambda;
  j["topics"] = json::array();
  for (const auto& t : vis.topics) {
    j["topics"].push_back({{"id", t.id}, {"proportion", t.proportion}, {"x", t.x}, {"y", t.y}});
  }
  auto terms = [](const std::vector<TermRow>& rows, const char* score_key) {
    json out = json::array();
    for (const auto& r : rows) {
      json row = {{"term", r.term},
                  {"topic_frequency", r.topic_frequency},
                  {"corpus_frequency", r.corpus_frequency}};
      row[score_key] = std::isfinite(r.score) ? json(r.score) : json(nullptr);
      out.push_back(std::move(row));
    }
    return out;
  };
  j["default_terms"] = terms(vis.default_terms, "saliency");
  j["per_topic_terms"] = json::array();
  for (std::size_t t = 0; t < vis.per_topic_terms.size(); ++t) {
    j["per_topic_terms"].push_back(
        {{"topic", t + 1}, {"terms", terms(vis.per_topic_terms[t], "relevance")}});
  }
  j["distances"] = json::array();
  for (Eigen::Index a = 0; a < vis.distances.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < vis.distances.cols(); ++b) row.push_back(vis.distances(a, b));
    j["distances"].push_back(std::move(row));
  }
  return j.dump(1) + "\n";
}

VisExport from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    VisExport vis;
    vis.lambda = j.at("lambda").get<double>();
    for (const auto& t : j.at("topics")) {
      vis.topics.push_back({t.at("id").get<int>(), t.at("proportion").get<double>(),
                            t.at("x").get<double>(), t.at("y").get<double>()});
    }
    auto terms = [](const json& rows, const char* score_key) {
      std::vector<TermRow> out;
      for (const auto& r : rows) {
        out.push_back({r.at("term").get<std::string>(), number_or_neg_inf(r.at(score_key)),
                       r.at("topic_frequency").get<double>(), r.at("corpus_frequency").get<double>()});
      }
      return out;
    };
    vis.default_terms = terms(j.at("default_terms"), "saliency");
    for (const auto& t : j.at("per_topic_terms")) {
      vis.per_topic_terms.push_back(terms(t.at("terms"), "relevance"));
    }
    const auto& d = j.at("distances");
    vis.distances.resize(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t a = 0; a < d.size(); ++a) {
      for (std::size_t b = 0; b < d.size(); ++b) {
        vis.distances(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            d.at(a).at(b).get<double>();
      }
    }
    return vis;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("bad vis file: ") + e.what());
  }
}

void write_vis_file(const VisExport& vis, const std::filesystem::path& path) {
  util::write_file_atomic(path, to_json(vis));
}

VisExport read_vis_file(const std::filesystem::path& path) { return from_json(util::read_file(path)); }

}  // namespace topiclab::visexport
