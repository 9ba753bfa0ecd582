#include "hatepipe/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hatepipe/error.hpp"

namespace hatepipe {

std::string to_string(WeightingMode mode) {
  switch (mode) {
    case WeightingMode::count: return "count";
    case WeightingMode::binary: return "binary";
    case WeightingMode::freq: return "freq";
    case WeightingMode::tfidf: return "tfidf";
  }
  return "?";
}

WeightingMode parse_weighting_mode(std::string_view name) {
  if (name == "count") return WeightingMode::count;
  if (name == "binary") return WeightingMode::binary;
  if (name == "freq") return WeightingMode::freq;
  if (name == "tfidf") return WeightingMode::tfidf;
  throw ArgumentError("unknown weighting mode '" + std::string(name) + "' (expected count, binary, freq or tfidf)");
}

double dot(RowView a, RowView b) {
  if (a.nnz() == 0 || b.nnz() == 0) return 0.0;
  // Fully dense rows of equal width: indices are 0..n-1 on both sides.
  if (a.nnz() == b.nnz() && a.indices.back() + 1 == a.nnz() && b.indices.back() + 1 == b.nnz()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.nnz(); ++i) s += a.values[i] * b.values[i];
    return s;
  }
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.nnz() && j < b.nnz()) {
    if (a.indices[i] < b.indices[j]) ++i;
    else if (a.indices[i] > b.indices[j]) ++j;
    else s += a.values[i++] * b.values[j++];
  }
  return s;
}

double squared_norm(RowView a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return s;
}

double squared_distance(RowView a, RowView b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    double d;
    if (j == b.nnz() || (i < a.nnz() && a.indices[i] < b.indices[j])) {
      d = a.values[i++];
    } else if (i == a.nnz() || b.indices[j] < a.indices[i]) {
      d = b.values[j++];
    } else {
      d = a.values[i++] - b.values[j++];
    }
    s += d * d;
  }
  return s;
}

FeatureMatrix FeatureMatrix::from_dense(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  FeatureMatrix m(cols);
  for (const auto& r : rows) m.add_dense_row(r);
  return m;
}

void FeatureMatrix::add_row(std::span<const std::uint32_t> indices, std::span<const double> values) {
  if (indices.size() != values.size()) throw ArgumentError("row indices/values length mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= cols_) throw ArgumentError("column index out of range");
    if (k > 0 && indices[k] <= indices[k - 1]) throw ArgumentError("row indices must be strictly increasing");
    if (!std::isfinite(values[k])) throw ArgumentError("non-finite feature value");
    if (values[k] == 0.0) continue;
    indices_.push_back(indices[k]);
    values_.push_back(values[k]);
  }
  row_ptr_.push_back(values_.size());
}

void FeatureMatrix::add_dense_row(std::span<const double> values) {
  if (values.size() != cols_) throw ArgumentError("dense row width mismatch");
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) throw ArgumentError("non-finite feature value");
    if (values[j] == 0.0) continue;
    indices_.push_back(static_cast<std::uint32_t>(j));
    values_.push_back(values[j]);
  }
  row_ptr_.push_back(values_.size());
}

RowView FeatureMatrix::row(std::size_t i) const {
  const auto b = row_ptr_.at(i), e = row_ptr_.at(i + 1);
  return {std::span<const std::uint32_t>(indices_.data() + b, e - b),
          std::span<const double>(values_.data() + b, e - b)};
}

double FeatureMatrix::at(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  auto it = std::lower_bound(r.indices.begin(), r.indices.end(), static_cast<std::uint32_t>(j));
  if (it == r.indices.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.indices.begin())];
}

std::vector<double> FeatureMatrix::dense_row(std::size_t i) const {
  std::vector<double> out(cols_, 0.0);
  const auto r = row(i);
  for (std::size_t k = 0; k < r.nnz(); ++k) out[r.indices[k]] = r.values[k];
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> columns) const {
  std::vector<std::int64_t> remap(cols_, -1);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= cols_) throw ArgumentError("selected column out of range");
    remap[columns[k]] = static_cast<std::int64_t>(k);
  }
  FeatureMatrix out(columns.size());
  out.mode = mode;
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < rows(); ++i) {
    entries.clear();
    const auto r = row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      const auto m = remap[r.indices[k]];
      if (m >= 0) entries.emplace_back(static_cast<std::uint32_t>(m), r.values[k]);
    }
    std::sort(entries.begin(), entries.end());
    idx.clear();
    val.clear();
    for (const auto& [c, v] : entries) {
      idx.push_back(c);
      val.push_back(v);
    }
    out.add_row(idx, val);
  }
  return out;
}

}  // namespace hatepipe
