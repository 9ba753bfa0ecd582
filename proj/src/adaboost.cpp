#include "hatepipe/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "hatepipe/error.hpp"

namespace hatepipe {

namespace {

double value_at(RowView x, std::size_t feature) {
  auto it = std::lower_bound(x.indices.begin(), x.indices.end(), static_cast<std::uint32_t>(feature));
  if (it == x.indices.end() || *it != feature) return 0.0;
  return x.values[static_cast<std::size_t>(it - x.indices.begin())];
}

// Column-major copy: per feature, non-zero (value, row) pairs sorted by value.
struct SortedColumns {
  std::vector<std::vector<std::pair<double, std::uint32_t>>> entries;
  std::size_t rows = 0;

  explicit SortedColumns(const FeatureMatrix& x) : entries(x.cols()), rows(x.rows()) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto r = x.row(i);
      for (std::size_t k = 0; k < r.nnz(); ++k) {
        entries[r.indices[k]].emplace_back(r.values[k], static_cast<std::uint32_t>(i));
      }
    }
    for (auto& col : entries) std::sort(col.begin(), col.end());
  }
};

bool better(double err, double best) { return err < best - 1e-12 * std::max(1.0, std::abs(best)); }

StumpFit fit_sorted(const SortedColumns& cols, std::span<const int> y, std::span<const double> w,
                    const FeatureMatrix& x) {
  double total[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < y.size(); ++i) total[y[i]] += w[i];

  StumpFit best;
  bool found = false;
  best.error = std::numeric_limits<double>::infinity();

  struct Group {
    double value;
    double w0, w1;
  };
  std::vector<Group> groups;
  for (std::size_t f = 0; f < cols.entries.size(); ++f) {
    const auto& col = cols.entries[f];
    groups.clear();
    double nz[2] = {0.0, 0.0};
    for (const auto& [v, row] : col) nz[y[row]] += w[row];
    const bool has_zero = col.size() < cols.rows;
    bool zero_emitted = !has_zero;
    auto push = [&](double v, double w0, double w1) {
      if (!groups.empty() && groups.back().value == v) {
        groups.back().w0 += w0;
        groups.back().w1 += w1;
      } else {
        groups.push_back({v, w0, w1});
      }
    };
    for (const auto& [v, row] : col) {
      if (!zero_emitted && v > 0.0) {
        push(0.0, total[0] - nz[0], total[1] - nz[1]);
        zero_emitted = true;
      }
      push(v, y[row] == 0 ? w[row] : 0.0, y[row] == 1 ? w[row] : 0.0);
    }
    if (!zero_emitted) push(0.0, total[0] - nz[0], total[1] - nz[1]);

    double left[2] = {0.0, 0.0};
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      left[0] += groups[g].w0;
      left[1] += groups[g].w1;
      const double thr = 0.5 * (groups[g].value + groups[g + 1].value);
      const double err_pos = left[1] + (total[0] - left[0]);
      const double err_neg = left[0] + (total[1] - left[1]);
      if (!found || better(err_pos, best.error)) {
        best = {{f, thr, 1}, err_pos};
        found = true;
      }
      if (better(err_neg, best.error)) best = {{f, thr, -1}, err_neg};
    }
  }
  if (!found) {
    // Every feature is constant: predict the weighted-majority class everywhere.
    const double v = x.rows() > 0 && x.cols() > 0 ? value_at(x.row(0), 0) : 0.0;
    if (total[1] > total[0]) best = {{0, v, -1}, total[0]};
    else best = {{0, v, 1}, total[1]};
  }
  best.error = std::clamp(best.error, 0.0, 1.0);
  return best;
}

void check_labels(std::span<const int> y, std::size_t rows) {
  if (y.size() != rows) throw ArgumentError("label count does not match matrix rows");
  for (int v : y) {
    if (v != 0 && v != 1) throw ArgumentError("labels must be 0 or 1");
  }
}

}  // namespace

int Stump::vote(RowView x) const { return value_at(x, feature) > threshold ? polarity : -polarity; }

StumpFit stump_fit(const FeatureMatrix& x, std::span<const int> y, std::span<const double> weights) {
  check_labels(y, x.rows());
  if (weights.size() != x.rows()) throw ArgumentError("stump_fit: weight count does not match matrix rows");
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw ArgumentError("stump_fit: weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("stump_fit: weights must sum to 1");
  return fit_sorted(SortedColumns(x), y, weights, x);
}

AdaBoostModel adaboost_train(const FeatureMatrix& x, std::span<const int> y, const AdaBoostParams& params) {
  check_labels(y, x.rows());
  if (x.rows() < 2) throw ValidationError("adaboost: need at least 2 training rows");
  if (std::find(y.begin(), y.end(), 0) == y.end() || std::find(y.begin(), y.end(), 1) == y.end()) {
    throw ValidationError("adaboost: training labels contain a single class");
  }
  if (params.n_estimators == 0) throw ArgumentError("adaboost: n_estimators must be >= 1");

  const std::size_t n = x.rows();
  const SortedColumns cols(x);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  AdaBoostModel model;
  model.n_features = x.cols();
  std::vector<int> votes(n);

  for (std::size_t round = 0; round < params.n_estimators; ++round) {
    const auto fit = fit_sorted(cols, y, w, x);
    if (fit.error >= 0.5 - 1e-12 && !model.stumps.empty()) break;
    const double err = std::clamp(fit.error, 1e-10, 1.0 - 1e-10);
    const double alpha = params.learning_rate * 0.5 * std::log((1.0 - err) / err);
    model.stumps.push_back(fit.stump);
    model.stage_weights.push_back(alpha);
    if (fit.error >= 0.5 - 1e-12 || fit.error <= 0.0) break;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = y[i] == 1 ? 1.0 : -1.0;
      w[i] *= std::exp(-alpha * yi * fit.stump.vote(x.row(i)));
      total += w[i];
    }
    for (auto& v : w) v /= total;
  }
  return model;
}

double adaboost_decision(const AdaBoostModel& model, RowView x, std::size_t rounds) {
  double s = 0.0;
  const std::size_t m = std::min(rounds, model.stumps.size());
  for (std::size_t t = 0; t < m; ++t) s += model.stage_weights[t] * model.stumps[t].vote(x);
  return s;
}

int adaboost_predict(const AdaBoostModel& model, RowView x) { return adaboost_decision(model, x) > 0.0 ? 1 : 0; }

std::vector<double> adaboost_decisions(const AdaBoostModel& model, const FeatureMatrix& x) {
  if (x.cols() != model.n_features) {
    throw ShapeError("adaboost: feature width " + std::to_string(x.cols()) + " does not match model width " +
                        std::to_string(model.n_features));
  }
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = adaboost_decision(model, x.row(i));
  return out;
}

}  // namespace hatepipe
