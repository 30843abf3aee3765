#include "topiclab/lsa.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "topiclab/error.hpp"

using namespace topiclab;
using namespace topiclab::lsa;

namespace {

Eigen::MatrixXd random_matrix(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = u(rng);
  return x;
}

corpus::SparseDocTermMatrix to_sparse(const Eigen::MatrixXd& x) {
  std::vector<corpus::SparseRow> rows(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (x(i, j) != 0.0) rows[static_cast<std::size_t>(i)].push_back({static_cast<corpus::TermId>(j), x(i, j)});
  return corpus::SparseDocTermMatrix(static_cast<std::size_t>(x.cols()), rows);
}

}  // namespace

TEST(TruncatedSvd, Identity) {
  const auto r = truncated_svd(Eigen::MatrixXd::Identity(5, 5), 3, 1);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.s(i), 1.0, 1e-12);
}

TEST(TruncatedSvd, RankOne) {
  Eigen::VectorXd a(4), b(3);
  a << 1, 2, 3, 4;
  b << 2, 0, 1;
  const Eigen::MatrixXd x = a * b.transpose();
  const auto r = truncated_svd(x, 2, 7);
  EXPECT_NEAR(r.s(0), a.norm() * b.norm(), 1e-10);
  EXPECT_NEAR(r.s(1), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.v.col(0).dot(b.normalized())), 1.0, 1e-10);
}

TEST(TruncatedSvd, MatchesPowerIterationOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = random_matrix(30, 20, seed);
    const auto want = oracle::singular_values(x);
    const auto r = truncated_svd(x, 3, seed);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.s(i), want[static_cast<std::size_t>(i)], 1e-6 * want[static_cast<std::size_t>(i)]);
  }
}

TEST(TruncatedSvd, RandomizedPathOnLargeSparse) {
  // Low-rank plus small noise so the randomized range finder is accurate.
  const Eigen::MatrixXd x = random_matrix(200, 3, 11) * random_matrix(3, 150, 12) + 1e-3 * random_matrix(200, 150, 13);
  const Eigen::SparseMatrix<double, Eigen::RowMajor> sp = x.sparseView();
  const auto r = truncated_svd(sp, 3, 5);
  const auto want = oracle::singular_values(x);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.s(i), want[static_cast<std::size_t>(i)], 1e-6 * want[static_cast<std::size_t>(i)]);
}

TEST(TruncatedSvd, EckartYoungAndOrthonormality) {
  const auto x = random_matrix(30, 20, 3);
  const auto r = truncated_svd(x, 4, 3);
  const Eigen::JacobiSVD<Eigen::MatrixXd> full(x);
  const auto& s = full.singularValues();
  const double expected = std::sqrt(s.tail(s.size() - 4).squaredNorm());
  const Eigen::MatrixXd approx = r.u * r.s.asDiagonal() * r.v.transpose();
  EXPECT_NEAR((x - approx).norm(), expected, 1e-8 * x.norm());
  EXPECT_TRUE((r.v.transpose() * r.v).isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-10));
  EXPECT_TRUE((r.u.transpose() * r.u).isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-10));
  for (int i = 1; i < 4; ++i) EXPECT_GE(r.s(i - 1), r.s(i));
}

TEST(TruncatedSvd, SignConvention) {
  const auto r = truncated_svd(random_matrix(12, 9, 4), 3, 4);
  for (int c = 0; c < 3; ++c) {
    Eigen::Index arg = 0;
    r.v.col(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(r.v(arg, c), 0.0);
  }
}

TEST(TruncatedSvd, BadRankThrows) {
  EXPECT_THROW(truncated_svd(random_matrix(5, 4, 1), 5, 1), Error);
  EXPECT_THROW(truncated_svd(random_matrix(5, 4, 1), 0, 1), Error);
}

TEST(Lsa, DeterministicAndProjections) {
  // Exactly rank 3, so the randomized path is exact too.
  const Eigen::MatrixXd x = random_matrix(80, 3, 9) * random_matrix(3, 70, 10);
  const auto a = train_lsa(to_sparse(x), 3, 42);
  const auto b = train_lsa(to_sparse(x), 3, 42);
  EXPECT_EQ(a.singular_values, b.singular_values);
  EXPECT_EQ(a.term_loadings, b.term_loadings);
  EXPECT_EQ(a.term_loadings.rows(), 3);
  EXPECT_EQ(a.term_loadings.cols(), 70);
  EXPECT_TRUE(a.doc_projections.isApprox(x * a.term_loadings.transpose(), 1e-8));
}

TEST(Lsa, TopTermsByMagnitude) {
  LsaModel m;
  m.k = 1;
  m.term_loadings.resize(1, 4);
  m.term_loadings << 0.1, -0.7, 0.7, 0.2;
  const auto top = top_terms_lsa(m, 0, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].first, 1u);
  EXPECT_EQ(top[1].first, 2u);
  EXPECT_EQ(top[2].first, 3u);
}
