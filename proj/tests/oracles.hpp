#pragma once

// Slow reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline std::vector<std::string> word_ngrams(const std::vector<std::string>& tokens, int n) {
  std::vector<std::string> out;
  const int len = static_cast<int>(tokens.size());
  for (int start = 0; start < len; ++start) {
    if (start + n > len) break;
    std::string gram;
    for (int k = 0; k < n; ++k) {
      if (k) gram += ' ';
      gram += tokens[static_cast<std::size_t>(start + k)];
    }
    out.push_back(gram);
  }
  return out;
}

// Tokens are ASCII in the generators that feed this.
inline std::vector<std::string> char_ngrams(const std::vector<std::string>& tokens, int n) {
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    for (int start = 0; start + n <= static_cast<int>(tok.size()); ++start) {
      out.push_back("c:" + tok.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(n)));
    }
  }
  return out;
}

// Pearson chi-square of each column against the class, using summed feature
// mass as observed counts.
inline std::vector<double> chi2(const Dense& x, const std::vector<int>& y, std::size_t cols) {
  std::vector<double> scores(cols, 0.0);
  const double n = static_cast<double>(y.size());
  double n1 = 0;
  for (int v : y) n1 += v;
  const double p[2] = {(n - n1) / n, n1 / n};
  for (std::size_t j = 0; j < cols; ++j) {
    double obs[2] = {0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) obs[y[i]] += x[i][j];
    const double total = obs[0] + obs[1];
    double s = 0;
    for (int c = 0; c < 2; ++c) {
      const double e = p[c] * total;
      if (e > 0) s += (obs[c] - e) * (obs[c] - e) / e;
    }
    scores[j] = s;
  }
  return scores;
}

inline std::vector<std::size_t> k_best(const std::vector<double>& scores, std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  idx.resize(std::min(k, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double segment_distance(const std::vector<double>& p, const std::vector<double>& a,
                               const std::vector<double>& b) {
  std::vector<double> ab(a.size()), ap(a.size());
  double len2 = 0, t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab[i] = b[i] - a[i];
    ap[i] = p[i] - a[i];
    len2 += ab[i] * ab[i];
    t += ab[i] * ap[i];
  }
  t = len2 > 0 ? std::clamp(t / len2, 0.0, 1.0) : 0.0;
  std::vector<double> proj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) proj[i] = a[i] + t * ab[i];
  return std::sqrt(sq_dist(p, proj));
}

// Distance to the k-th nearest other row of `rows` from row i.
inline double kth_neighbor_distance(const Dense& rows, std::size_t i, std::size_t k) {
  std::vector<double> d;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (j != i) d.push_back(sq_dist(rows[i], rows[j]));
  }
  std::sort(d.begin(), d.end());
  return d[std::min(k, d.size()) - 1];
}

// ---- SVM dual --------------------------------------------------------------

// Q_ij = y_i y_j K_ij with y in {-1,+1}.
inline Dense q_matrix(const Dense& gram, const std::vector<double>& y) {
  Dense q = gram;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) q[i][j] *= y[i] * y[j];
  return q;
}

inline double dual_objective(const Dense& q, const std::vector<double>& a) {
  double quad = 0, lin = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lin += a[i];
    for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * q[i][j] * a[j];
  }
  return 0.5 * quad - lin;
}

// Euclidean projection onto {0 <= a <= C, y'a = 0}: a = clip(v - lambda y),
// with lambda found by bisection on the monotone constraint residual.
inline std::vector<double> project(const std::vector<double>& v, const std::vector<double>& y, double C) {
  auto at = [&](double lambda) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::clamp(v[i] - lambda * y[i], 0.0, C);
    return a;
  };
  auto residual = [&](double lambda) {
    const auto a = at(lambda);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += y[i] * a[i];
    return s;
  };
  double lo = -1.0, hi = 1.0;
  while (residual(lo) < 0) lo *= 2;
  while (residual(hi) > 0) hi *= 2;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0) lo = mid;
    else hi = mid;
  }
  return at(0.5 * (lo + hi));
}

// Accelerated projected gradient on the dual, run for a fixed large budget.
// For indefinite Q this only finds a stationary point.
inline std::vector<double> solve_dual(const Dense& q, const std::vector<double>& y, double C,
                                      int iterations = 50000, std::vector<double> start = {}) {
  const std::size_t n = q.size();
  double lip = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(q[i][j]);
    lip = std::max(lip, row);
  }
  const double step = 1.0 / std::max(lip, 1e-12);
  std::vector<double> a = start.empty() ? std::vector<double>(n, 0.0) : start, z = a, prev = a;
  double t = 1;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> g(n, -1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i] += q[i][j] * z[j];
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] - step * g[i];
    prev = a;
    a = project(v, y, C);
    const double t_next = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    for (std::size_t i = 0; i < n; ++i) z[i] = a[i] + (t - 1) / t_next * (a[i] - prev[i]);
    t = t_next;
    // Restart momentum when the objective goes up.
    if (dual_objective(q, a) > dual_objective(q, prev)) {
      z = a;
      t = 1;
    }
    double moved = 0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(a[i] - prev[i]));
    if (moved < 1e-13) break;
  }
  return a;
}

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double min_eigenvalue(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, a[i][i]);
  return lo;
}

// ---- AdaBoost --------------------------------------------------------------

struct StumpChoice {
  std::size_t feature = 0;
  double threshold = 0;
  int polarity = 1;
  double error = std::numeric_limits<double>::infinity();
};

inline int stump_vote(const std::vector<double>& row, std::size_t f, double thr, int pol) {
  const bool above = row[f] > thr;
  return (pol == 1 ? above : !above) ? 1 : -1;
}

// Every feature, every midpoint between adjacent distinct values, both polarities.
inline StumpChoice best_stump(const Dense& x, const std::vector<int>& y, const std::vector<double>& w) {
  StumpChoice best;
  const std::size_t cols = x.empty() ? 0 : x[0].size();
  for (std::size_t f = 0; f < cols; ++f) {
    std::vector<double> vals;
    for (const auto& r : x) vals.push_back(r[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double thr = 0.5 * (vals[k] + vals[k + 1]);
      for (int pol : {1, -1}) {
        double err = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const int truth = y[i] == 1 ? 1 : -1;
          if (stump_vote(x[i], f, thr, pol) != truth) err += w[i];
        }
        if (err < best.error) best = {f, thr, pol, err};
      }
    }
  }
  return best;
}

// ---- numerics --------------------------------------------------------------

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_stdev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-10});
  return std::abs(a - b) / scale;
}

}  // namespace oracle
