#include "hatepipe/corpus.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "hatepipe/error.hpp"
#include "hatepipe/io.hpp"
#include "hatepipe/utf8.hpp"

namespace hatepipe {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct ColumnIndex {
  std::size_t id;
  std::size_t text;
  std::optional<std::size_t> label;
};

ColumnIndex resolve_columns(const std::vector<std::string>& header, const DatasetSchema& schema,
                            bool label_required, const std::filesystem::path& path) {
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  auto require = [&](const std::string& name) {
    auto idx = find(name);
    if (!idx) throw ValidationError(path.string() + ": missing column '" + name + "'");
    return *idx;
  };
  ColumnIndex cols{require(schema.id_column), require(schema.text_column), find(schema.label_column)};
  if (label_required && !cols.label) {
    throw ValidationError(path.string() + ": missing column '" + schema.label_column + "'");
  }
  return cols;
}

std::optional<int> parse_label(std::string_view cell, std::size_t row, const std::filesystem::path& path,
                               bool allow_empty) {
  cell = trim(cell);
  if (cell.empty() && allow_empty) return std::nullopt;
  if (cell == "0") return 0;
  if (cell == "1") return 1;
  throw ValidationError(path.string() + ": row " + std::to_string(row) + ": label must be 0 or 1, got '" +
                        std::string(cell) + "'");
}

std::vector<Document> read_documents(const std::filesystem::path& path, const DatasetSchema& schema,
                                     bool label_required) {
  const std::string text = io::read_file(path);
  if (!utf8::is_valid(text)) throw ParseError(path.string() + ": file is not valid UTF-8");
  auto records = parse_delimited(text, schema.delimiter);
  if (!label_required && text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  if (records.empty()) throw ValidationError(path.string() + ": missing header row");
  const auto cols = resolve_columns(records.front(), schema, label_required, path);
  const std::size_t needed = std::max({cols.id, cols.text, cols.label.value_or(0)}) + 1;

  std::vector<Document> docs;
  docs.reserve(records.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    if (rec.size() < needed) {
      throw ValidationError(path.string() + ": row " + std::to_string(r) + ": expected at least " +
                            std::to_string(needed) + " fields, got " + std::to_string(rec.size()));
    }
    Document doc;
    doc.id = std::string(trim(rec[cols.id]));
    if (doc.id.empty()) throw ValidationError(path.string() + ": row " + std::to_string(r) + ": empty id");
    if (!seen.insert(doc.id).second) {
      throw ValidationError(path.string() + ": row " + std::to_string(r) + ": duplicate id '" + doc.id + "'");
    }
    doc.raw_text = std::move(rec[cols.text]);
    if (cols.label) doc.label = parse_label(rec[*cols.label], r, path, !label_required);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace

DatasetSchema DatasetSchema::for_path(const std::filesystem::path& path) {
  DatasetSchema schema;
  auto p = path;
  if (p.extension() == ".gz") p.replace_extension();
  if (p.extension() == ".tsv") schema.delimiter = '\t';
  return schema;
}

LabeledDataset::LabeledDataset(std::vector<Document> documents, std::string positive_label_name)
    : documents_(std::move(documents)), positive_label_name_(std::move(positive_label_name)) {
  std::unordered_set<std::string_view> ids;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& d = documents_[i];
    if (d.id.empty()) throw ValidationError("document " + std::to_string(i) + " has an empty id");
    if (!ids.insert(d.id).second) throw ValidationError("duplicate document id '" + d.id + "'");
    if (!d.label) throw ValidationError("document '" + d.id + "' has no label");
    if (*d.label != 0 && *d.label != 1) {
      throw ValidationError("document '" + d.id + "' has label " + std::to_string(*d.label));
    }
    ++counts_[static_cast<std::size_t>(*d.label)];
  }
}

std::vector<int> LabeledDataset::labels() const {
  std::vector<int> y;
  y.reserve(documents_.size());
  for (const auto& d : documents_) y.push_back(*d.label);
  return y;
}

std::vector<std::vector<std::string>> parse_delimited(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field");
  if (field_started || !record.empty()) end_record();
  return records;
}

std::string format_delimited_field(std::string_view field, char delimiter) {
  const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos ||
                            (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

LabeledDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
  return LabeledDataset(read_documents(path, schema, true), schema.positive_label_name);
}

std::vector<Document> load_documents(const std::filesystem::path& path, const DatasetSchema& schema) {
  return read_documents(path, schema, false);
}

std::string serialize_dataset(const LabeledDataset& ds, char delimiter) {
  std::string out = "id";
  out += delimiter;
  out += "text";
  out += delimiter;
  out += "label\n";
  for (const auto& d : ds.documents()) {
    out += format_delimited_field(d.id, delimiter);
    out += delimiter;
    out += format_delimited_field(d.raw_text, delimiter);
    out += delimiter;
    out += std::to_string(*d.label);
    out += '\n';
  }
  return out;
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path, char delimiter) {
  io::write_file(path, serialize_dataset(ds, delimiter));
}

ClassDistribution class_distribution(const LabeledDataset& ds) {
  if (ds.empty()) throw ValidationError("class distribution of an empty dataset");
  ClassDistribution dist;
  dist.counts = ds.counts();
  const double n = static_cast<double>(ds.size());
  dist.ratios[0] = static_cast<double>(dist.counts[0]) / n;
  dist.ratios[1] = static_cast<double>(dist.counts[1]) / n;
  return dist;
}

}  // namespace hatepipe
