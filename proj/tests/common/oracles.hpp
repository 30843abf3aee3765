#pragma once

// Slow, direct implementations used as independent references by the unit
// and acceptance tests. Nothing here calls into the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Doc = std::vector<std::string>;
using Topic = std::vector<std::string>;

inline std::set<std::string> as_set(Doc::const_iterator first, Doc::const_iterator last) {
  return std::set<std::string>(first, last);
}

inline std::size_t doc_count(const std::vector<std::set<std::string>>& units,
                             const std::vector<std::string>& terms) {
  std::size_t n = 0;
  for (const auto& u : units) {
    if (std::all_of(terms.begin(), terms.end(), [&](const std::string& t) { return u.count(t) > 0; })) ++n;
  }
  return n;
}

// UMass: sum over m >= 2, l < m of ln((D(w_m, w_l) + 1) / D(w_l)) after
// dropping terms that occur in no document.
inline std::vector<double> umass(const std::vector<Topic>& topics, const std::vector<Doc>& docs) {
  std::vector<std::set<std::string>> units;
  for (const auto& d : docs) units.push_back(as_set(d.begin(), d.end()));
  std::vector<double> out;
  for (const auto& topic : topics) {
    Topic kept;
    for (const auto& t : topic) {
      if (doc_count(units, {t}) > 0) kept.push_back(t);
    }
    double c = 0.0;
    for (std::size_t m = 1; m < kept.size(); ++m) {
      for (std::size_t l = 0; l < m; ++l) {
        c += std::log((static_cast<double>(doc_count(units, {kept[m], kept[l]})) + 1.0) /
                      static_cast<double>(doc_count(units, {kept[l]})));
      }
    }
    out.push_back(c);
  }
  return out;
}

// c_v over explicit boolean windows: a document no longer than the window is
// one window, otherwise every run of `window` consecutive tokens is one.
inline std::vector<double> cv(const std::vector<Topic>& topics, const std::vector<Doc>& docs,
                              std::size_t window) {
  std::vector<std::set<std::string>> units;
  for (const auto& d : docs) {
    if (d.size() <= window) {
      units.push_back(as_set(d.begin(), d.end()));
    } else {
      for (std::size_t i = 0; i + window <= d.size(); ++i) {
        units.push_back(as_set(d.begin() + static_cast<long>(i), d.begin() + static_cast<long>(i + window)));
      }
    }
  }
  const double n = static_cast<double>(units.size());
  const double eps = 1e-12;
  std::vector<double> out;
  for (const auto& topic : topics) {
    const std::size_t s = topic.size();
    std::vector<std::vector<double>> vec(s, std::vector<double>(s, 0.0));
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        const double pi = static_cast<double>(doc_count(units, {topic[i]})) / n;
        const double pj = static_cast<double>(doc_count(units, {topic[j]})) / n;
        const double pij = static_cast<double>(doc_count(units, {topic[i], topic[j]})) / n;
        if (pi == 0.0 || pj == 0.0) {
          vec[i][j] = 0.0;
        } else if (pij == 1.0) {
          vec[i][j] = 1.0;
        } else {
          vec[i][j] = std::log((pij + eps) / (pi * pj)) / -std::log(pij + eps);
        }
      }
    }
    std::vector<double> sum(s, 0.0);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) sum[j] += vec[i][j];
    double score = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        dot += vec[i][j] * sum[j];
        na += vec[i][j] * vec[i][j];
        nb += sum[j] * sum[j];
      }
      score += (na == 0.0 || nb == 0.0) ? 0.0 : dot / std::sqrt(na * nb);
    }
    out.push_back(s == 0 ? 0.0 : score / static_cast<double>(s));
  }
  return out;
}

// All singular values, descending, from cyclic Jacobi rotations on X^T X.
inline std::vector<double> singular_values(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.cols();
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = x.col(i).dot(x.col(j));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      diag += a[i][i] * a[i][i];
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) off += a[i][j] * a[i][j];
    }
    if (off <= 1e-30 * diag) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::sqrt(std::max(a[i][i], 0.0)));
  std::sort(out.rbegin(), out.rend());
  return out;
}

// Central differences of f at x.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x, down = x;
    up(i) += h;
    down(i) -= h;
    g(i) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

}  // namespace oracle
