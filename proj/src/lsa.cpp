#include "topiclab/lsa.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <random>

#include "topiclab/error.hpp"

namespace topiclab::lsa {

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

void fix_signs(TruncatedSvd& svd) {
  for (Eigen::Index c = 0; c < svd.v.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < svd.v.rows(); ++r) {
      const double a = std::abs(svd.v(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (svd.v(best, c) < 0.0) {
      svd.v.col(c) *= -1.0;
      svd.u.col(c) *= -1.0;
    }
  }
}

TruncatedSvd take_leading(const Eigen::MatrixXd& u, const Eigen::VectorXd& s,
                          const Eigen::MatrixXd& v, int k) {
  TruncatedSvd out{u.leftCols(k), s.head(k), v.leftCols(k)};
  fix_signs(out);
  return out;
}

template <typename Matrix>
TruncatedSvd svd_impl(const Matrix& x, int k, std::uint64_t seed, const SvdOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  const Eigen::Index small = std::min(n, m);
  if (k < 1 || k > small) {
    throw Error(ErrorCode::Dimension, "k=" + std::to_string(k) + " must lie in [1, " +
                                          std::to_string(small) + "]");
  }

  if (small <= options.dense_threshold) {
    const Eigen::MatrixXd dense = x;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return take_leading(svd.matrixU(), svd.singularValues(), svd.matrixV(), k);
  }

  // Randomized range finder with power iterations.
  const Eigen::Index l = std::min<Eigen::Index>(k + options.oversampling, small);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd omega(m, l);
  for (Eigen::Index j = 0; j < l; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) omega(i, j) = normal(rng);
  }
  Eigen::MatrixXd q = orthonormal_basis(x * omega);
  for (int it = 0; it < options.power_iterations; ++it) {
    const Eigen::MatrixXd z = orthonormal_basis(x.transpose() * q);
    q = orthonormal_basis(x * z);
  }
  const Eigen::MatrixXd b = (x.transpose() * q).transpose();  // l x m
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd u = q * svd.matrixU();
  return take_leading(u, svd.singularValues(), svd.matrixV(), k);
}

}  // namespace

TruncatedSvd truncated_svd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& x, int k,
                           std::uint64_t seed, const SvdOptions& options) {
  return svd_impl(x, k, seed, options);
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& x, int k, std::uint64_t seed,
                           const SvdOptions& options) {
  return svd_impl(x, k, seed, options);
}

LsaModel train_lsa(const corpus::SparseDocTermMatrix& x, int k, std::uint64_t seed,
                   const SvdOptions& options) {
  const auto svd = truncated_svd(x.to_eigen(), k, seed, options);
  LsaModel model;
  model.k = k;
  model.seed = seed;
  model.singular_values = svd.s;
  model.term_loadings = svd.v.transpose();
  model.doc_projections = svd.u * svd.s.asDiagonal();
  return model;
}

std::vector<std::pair<corpus::TermId, double>> top_terms_lsa(const LsaModel& model, int topic,
                                                             std::size_t n) {
  if (topic < 0 || topic >= model.k) {
    throw Error(ErrorCode::Index, "topic " + std::to_string(topic) + " out of range");
  }
  const auto row = model.term_loadings.row(topic);
  std::vector<corpus::TermId> ids(static_cast<std::size_t>(row.size()));
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](corpus::TermId a, corpus::TermId b) {
    return std::abs(row(a)) > std::abs(row(b));
  });
  ids.resize(std::min(n, ids.size()));
  std::vector<std::pair<corpus::TermId, double>> out;
  out.reserve(ids.size());
  for (auto id : ids) out.emplace_back(id, row(id));
  return out;
}

}  // namespace topiclab::lsa
