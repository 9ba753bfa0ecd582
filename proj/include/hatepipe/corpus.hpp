#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hatepipe {

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;  // empty until preprocessing
  std::optional<int> label;         // 0 or 1 when present
};

// Column-name mapping for on-disk datasets. The canonical layout is a UTF-8
// CSV with header `id,text,label`; TSV is selected through `delimiter`.
struct DatasetSchema {
  std::string id_column = "id";
  std::string text_column = "text";
  std::string label_column = "label";
  char delimiter = ',';
  std::string positive_label_name = "positive";

  // Canonical schema with the delimiter chosen from the extension (.tsv / .tsv.gz -> tab).
  static DatasetSchema for_path(const std::filesystem::path& path);
};

// A corpus where every document is labeled. Counts always agree with the documents.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  // Throws ValidationError on missing/out-of-range labels, empty or duplicate ids.
  LabeledDataset(std::vector<Document> documents, std::string positive_label_name);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const std::array<std::size_t, 2>& counts() const { return counts_; }
  const std::string& positive_label_name() const { return positive_label_name_; }
  std::vector<int> labels() const;

 private:
  std::vector<Document> documents_;
  std::string positive_label_name_;
  std::array<std::size_t, 2> counts_{0, 0};
};

struct ClassDistribution {
  std::array<std::size_t, 2> counts{0, 0};
  std::array<double, 2> ratios{0.0, 0.0};
};

// RFC 4180 record parsing (quoted fields may contain delimiters, quotes and newlines).
std::vector<std::vector<std::string>> parse_delimited(std::string_view text, char delimiter);
std::string format_delimited_field(std::string_view field, char delimiter);

LabeledDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema = {});

// Like load_dataset, but the label column is optional and labels may be absent.
std::vector<Document> load_documents(const std::filesystem::path& path, const DatasetSchema& schema = {});

// Writes the canonical `id,text,label` layout.
std::string serialize_dataset(const LabeledDataset& ds, char delimiter = ',');
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path, char delimiter = ',');

ClassDistribution class_distribution(const LabeledDataset& ds);

}  // namespace hatepipe
