#include "topiclab/model_io.hpp"

#include <nlohmann/json.hpp>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::model_io {

using nlohmann::json;

namespace {

template <typename Matrix>
json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Matrix>
Matrix matrix_from_json(const json& j, Eigen::Index cols_if_empty = 0) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : cols_if_empty;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::Malformed, "ragged matrix in model file");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<typename Matrix::Scalar>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

json to_json(const lsa::LsaModel& m) {
  return {{"type", "lsa"},
          {"k", m.k},
          {"seed", m.seed},
          {"vocab_hash", m.vocab_hash},
          {"singular_values", vector_to_json(m.singular_values)},
          {"term_loadings", matrix_to_json(m.term_loadings)}};
}

json to_json(const nmf::NmfModel& m) {
  json j = {{"type", "nmf"},
            {"k", m.k},
            {"seed", m.seed},
            {"vocab_hash", m.vocab_hash},
            {"n_iters", m.n_iters},
            {"objective_trace", m.objective_trace},
            {"h", matrix_to_json(m.h)}};
  if (m.w.size() > 0) j["w"] = matrix_to_json(m.w);
  return j;
}

json to_json(const lda::LdaModel& m) {
  return {{"type", "lda"},
          {"k", m.k},
          {"seed", m.seed},
          {"vocab_hash", m.vocab_hash},
          {"n_iters", m.n_iters},
          {"alpha", m.alpha},
          {"beta", m.beta},
          {"topic_counts", m.topic_counts},
          {"topic_word_counts", matrix_to_json(m.topic_word_counts)},
          {"theta_train", matrix_to_json(m.theta_train)}};
}

AnyModel from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "lsa") {
    lsa::LsaModel m;
    m.k = j.at("k").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocab_hash = j.at("vocab_hash").get<std::string>();
    m.singular_values = vector_from_json(j.at("singular_values"));
    m.term_loadings = matrix_from_json<Eigen::MatrixXd>(j.at("term_loadings"));
    return m;
  }
  if (type == "nmf") {
    nmf::NmfModel m;
    m.k = j.at("k").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocab_hash = j.at("vocab_hash").get<std::string>();
    m.n_iters = j.at("n_iters").get<int>();
    m.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    m.h = matrix_from_json<Eigen::MatrixXd>(j.at("h"));
    if (j.contains("w")) m.w = matrix_from_json<Eigen::MatrixXd>(j.at("w"), m.k);
    return m;
  }
  if (type == "lda") {
    lda::LdaModel m;
    m.k = j.at("k").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocab_hash = j.at("vocab_hash").get<std::string>();
    m.n_iters = j.at("n_iters").get<int>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.topic_counts = j.at("topic_counts").get<std::vector<std::int64_t>>();
    m.topic_word_counts = matrix_from_json<lda::CountMatrix>(j.at("topic_word_counts"));
    m.theta_train = matrix_from_json<Eigen::MatrixXd>(j.at("theta_train"), m.k);
    if (m.topic_word_counts.rows() != m.k ||
        static_cast<int>(m.topic_counts.size()) != m.k) {
      throw Error(ErrorCode::Malformed, "LDA counts do not match k");
    }
    m.phi = lda::phi_from_counts(m.topic_word_counts, m.topic_counts, m.beta);
    return m;
  }
  throw Error(ErrorCode::Malformed, "unknown model type '" + type + "'");
}

}  // namespace

std::string serialize(const AnyModel& model) {
  const json body = std::visit([](const auto& m) { return to_json(m); }, model);
  return std::string(kMagic) + "\n" + body.dump() + "\n";
}

AnyModel parse(std::string_view text) {
  const auto nl = text.find('\n');
  if (nl == std::string_view::npos || text.substr(0, nl) != kMagic) {
    throw Error(ErrorCode::Malformed, "not a model file (missing TLAB1 header)");
  }
  try {
    return from_json(json::parse(text.substr(nl + 1)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("bad model body: ") + e.what());
  }
}

void save(const std::filesystem::path& path, const AnyModel& model) {
  util::write_file_atomic(path, serialize(model));
}

AnyModel load(const std::filesystem::path& path) {
  try {
    return parse(util::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

lda::LdaModel load_lda(const std::filesystem::path& path) {
  auto model = load(path);
  if (auto* m = std::get_if<lda::LdaModel>(&model)) return std::move(*m);
  throw Error(ErrorCode::InvalidArgument, path.string() + " does not hold an LDA model");
}

std::string file_hash(const std::filesystem::path& path) {
  return util::sha256_hex(util::read_file(path));
}

}  // namespace topiclab::model_io
