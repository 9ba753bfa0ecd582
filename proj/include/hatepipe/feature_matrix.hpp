#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hatepipe {

enum class WeightingMode { count, binary, freq, tfidf };

std::string to_string(WeightingMode mode);
// Throws ArgumentError on unknown names.
WeightingMode parse_weighting_mode(std::string_view name);

// Read-only view of one sparse row; indices strictly increasing.
struct RowView {
  std::span<const std::uint32_t> indices;
  std::span<const double> values;

  std::size_t nnz() const { return indices.size(); }
};

double dot(RowView a, RowView b);
double squared_norm(RowView a);
double squared_distance(RowView a, RowView b);

// Row-major compressed sparse matrix. Dense data (embedding features) is
// stored with every column present.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(std::size_t cols = 0) : cols_(cols) {}

  static FeatureMatrix from_dense(const std::vector<std::vector<double>>& rows, std::size_t cols);

  // `indices` must be strictly increasing and < cols(). Explicit zeros are dropped.
  void add_row(std::span<const std::uint32_t> indices, std::span<const double> values);
  void add_dense_row(std::span<const double> values);
  void add_row(RowView row) { add_row(row.indices, row.values); }

  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  RowView row(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> dense_row(std::size_t i) const;

  // Keeps the given columns (in the given order), renumbered 0..k-1.
  FeatureMatrix select_columns(std::span<const std::size_t> columns) const;

  std::optional<WeightingMode> mode;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t cols_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

}  // namespace hatepipe
