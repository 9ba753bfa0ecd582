#include "hatepipe/resample.hpp"

#include <algorithm>
#include <numeric>

#include "hatepipe/error.hpp"
#include "hatepipe/random.hpp"

namespace hatepipe {

std::vector<std::vector<std::size_t>> knn_minority(const FeatureMatrix& x_min, std::size_t k) {
  const std::size_t m = x_min.rows();
  if (m == 0) throw ArgumentError("knn_minority: no rows");
  if (k == 0) throw ArgumentError("knn_minority: k must be >= 1");
  k = std::min(k, m - 1);
  std::vector<std::vector<std::size_t>> neighbors(m);
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) dist.emplace_back(squared_distance(x_min.row(i), x_min.row(j)), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    neighbors[i].reserve(k);
    for (std::size_t t = 0; t < k; ++t) neighbors[i].push_back(dist[t].second);
  }
  return neighbors;
}

namespace {

void interpolate(RowView a, RowView b, double u, std::vector<std::uint32_t>& idx, std::vector<double>& val) {
  idx.clear();
  val.clear();
  std::size_t i = 0, j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    std::uint32_t c;
    double va = 0.0, vb = 0.0;
    if (j == b.nnz() || (i < a.nnz() && a.indices[i] < b.indices[j])) {
      c = a.indices[i];
      va = a.values[i++];
    } else if (i == a.nnz() || b.indices[j] < a.indices[i]) {
      c = b.indices[j];
      vb = b.values[j++];
    } else {
      c = a.indices[i];
      va = a.values[i++];
      vb = b.values[j++];
    }
    idx.push_back(c);
    val.push_back(va + u * (vb - va));
  }
}

}  // namespace

SmoteResult smote(const FeatureMatrix& x, std::span<const int> y, const SmoteConfig& cfg) {
  if (y.size() != x.rows()) throw ArgumentError("smote: label count does not match matrix rows");
  if (cfg.k_neighbors == 0) throw ArgumentError("smote: k_neighbors must be >= 1");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw ArgumentError("smote: labels must be 0 or 1");
    by_class[static_cast<std::size_t>(y[i])].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) throw ValidationError("smote: both classes must be present");

  SmoteResult out{x, std::vector<int>(y.begin(), y.end()), {}};
  if (by_class[0].size() == by_class[1].size()) return out;

  const int minority_label = by_class[0].size() < by_class[1].size() ? 0 : 1;
  const auto& minority = by_class[static_cast<std::size_t>(minority_label)];
  const auto& majority = by_class[static_cast<std::size_t>(1 - minority_label)];
  if (minority.size() < 2) throw ValidationError("smote: minority class needs at least 2 rows");

  FeatureMatrix x_min(x.cols());
  for (auto i : minority) x_min.add_row(x.row(i));
  const auto neighbors = knn_minority(x_min, cfg.k_neighbors);

  const std::size_t needed = majority.size() - minority.size();
  out.origins.reserve(needed);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t s = 0; s < needed; ++s) {
    Rng rng(derive_seed(cfg.seed, s));
    const auto p = static_cast<std::size_t>(rng.below(minority.size()));
    const auto& nn = neighbors[p];
    const auto q = nn[static_cast<std::size_t>(rng.below(nn.size()))];
    const double u = rng.uniform();
    interpolate(x_min.row(p), x_min.row(q), u, idx, val);
    out.x.add_row(idx, val);
    out.y.push_back(minority_label);
    out.origins.push_back({minority[p], minority[q], u});
  }
  return out;
}

}  // namespace hatepipe
