#include "topiclab/nmf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "topiclab/error.hpp"

namespace topiclab::nmf {

namespace {

using SparseRowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;

bool has_negative(const Eigen::MatrixXd& v) { return (v.array() < 0.0).any(); }

bool has_negative(const SparseRowMajor& v) {
  for (Eigen::Index r = 0; r < v.outerSize(); ++r) {
    for (SparseRowMajor::InnerIterator it(v, r); it; ++it) {
      if (it.value() < 0.0) return true;
    }
  }
  return false;
}

double objective(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w, const Eigen::MatrixXd& h) {
  return 0.5 * (v - w * h).squaredNorm();
}

// 0.5 * (||V||^2 - 2 <V, WH> + tr(W'W HH')), with <V, WH> summed over the
// stored entries only.
double objective(const SparseRowMajor& v, const Eigen::MatrixXd& w, const Eigen::MatrixXd& h) {
  double vv = 0.0;
  double cross = 0.0;
  for (Eigen::Index r = 0; r < v.outerSize(); ++r) {
    for (SparseRowMajor::InnerIterator it(v, r); it; ++it) {
      vv += it.value() * it.value();
      cross += it.value() * w.row(r).dot(h.col(it.col()));
    }
  }
  const double wh = ((w.transpose() * w).cwiseProduct(h * h.transpose())).sum();
  return std::max(0.0, 0.5 * (vv - 2.0 * cross + wh));
}

template <typename Matrix>
NmfModel train_impl(const Matrix& v, int k, std::uint64_t seed, const NmfOptions& options) {
  const Eigen::Index n = v.rows();
  const Eigen::Index m = v.cols();
  if (k < 1 || k > std::min(n, m)) {
    throw Error(ErrorCode::Dimension, "k=" + std::to_string(k) + " must lie in [1, min(n, m)]");
  }
  if (options.max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (has_negative(v)) throw Error(ErrorCode::NegativeInput, "NMF input has negative entries");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  NmfModel model;
  model.k = k;
  model.seed = seed;
  model.w.resize(n, k);
  model.h.resize(k, m);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) model.w(i, j) = unif(rng);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) model.h(i, j) = unif(rng);
  }

  auto& w = model.w;
  auto& h = model.h;
  const double eps = options.eps;
  for (int it = 0; it < options.max_iters; ++it) {
    const Eigen::MatrixXd wt_v = (v.transpose() * w).transpose();  // k x m
    const Eigen::MatrixXd wt_w_h = (w.transpose() * w) * h;
    h = h.cwiseProduct(wt_v).cwiseQuotient((wt_w_h.array() + eps).matrix());

    const Eigen::MatrixXd v_ht = v * h.transpose();  // n x k
    const Eigen::MatrixXd w_h_ht = w * (h * h.transpose());
    w = w.cwiseProduct(v_ht).cwiseQuotient((w_h_ht.array() + eps).matrix());

    const double obj = objective(v, w, h);
    model.objective_trace.push_back(obj);
    model.n_iters = it + 1;
    if (model.objective_trace.size() >= 2) {
      const double prev = model.objective_trace[model.objective_trace.size() - 2];
      if (prev <= 0.0 || (prev - obj) / prev < options.tol) break;
    } else if (obj == 0.0) {
      break;
    }
  }

  for (Eigen::Index t = 0; t < k; ++t) {
    const double s = h.row(t).sum();
    if (s > 0.0) {
      h.row(t) /= s;
      w.col(t) *= s;
    }
  }
  return model;
}

}  // namespace

NmfModel train_nmf(const Eigen::MatrixXd& v, int k, std::uint64_t seed,
                   const NmfOptions& options) {
  return train_impl(v, k, seed, options);
}

NmfModel train_nmf(const SparseRowMajor& v, int k, std::uint64_t seed,
                   const NmfOptions& options) {
  return train_impl(v, k, seed, options);
}

NmfModel train_nmf(const corpus::SparseDocTermMatrix& v, int k, std::uint64_t seed,
                   const NmfOptions& options) {
  return train_impl(v.to_eigen(), k, seed, options);
}

std::vector<std::pair<corpus::TermId, double>> top_terms_nmf(const NmfModel& model, int topic,
                                                             std::size_t n) {
  if (topic < 0 || topic >= model.k) {
    throw Error(ErrorCode::Index, "topic " + std::to_string(topic) + " out of range");
  }
  const auto row = model.h.row(topic);
  std::vector<corpus::TermId> ids(static_cast<std::size_t>(row.size()));
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](corpus::TermId a, corpus::TermId b) { return row(a) > row(b); });
  ids.resize(std::min(n, ids.size()));
  std::vector<std::pair<corpus::TermId, double>> out;
  out.reserve(ids.size());
  for (auto id : ids) out.emplace_back(id, row(id));
  return out;
}

std::size_t shared_top_terms(const NmfModel& model, std::size_t n) {
  std::map<corpus::TermId, int> seen;
  for (int t = 0; t < model.k; ++t) {
    for (const auto& [id, weight] : top_terms_nmf(model, t, n)) ++seen[id];
  }
  return static_cast<std::size_t>(
      std::count_if(seen.begin(), seen.end(), [](const auto& kv) { return kv.second > 1; }));
}

}  // namespace topiclab::nmf
