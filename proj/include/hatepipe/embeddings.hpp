#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hatepipe/corpus.hpp"
#include "hatepipe/feature_matrix.hpp"
#include "hatepipe/features.hpp"

namespace hatepipe {

// Pre-trained word vectors. Lookups are exact string matches.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  // Returns false (and keeps the existing vector) when `word` is already present.
  bool add(const std::string& word, std::span<const double> vec);

  std::optional<std::span<const double>> lookup(const std::string& word) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  std::size_t duplicates_skipped() const { return duplicates_; }
  const std::vector<std::string>& words() const { return words_; }

  // word2vec text format (header `<n_words> <dim>`).
  std::string to_text() const;

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_ = 0;
};

EmbeddingTable parse_embeddings(std::string_view text, const std::string& source = "<memory>");
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Column-wise mean of the resolvable term vectors. A multi-word term missing
// from the table resolves to the mean of its known component words. Returns
// the zero vector when nothing resolves.
std::vector<double> doc_vector(std::span<const std::string> terms, const EmbeddingTable& table);

// One dense row per document over the concatenated word n-gram stream.
// `zero_rows`, when given, receives the number of fully unresolved documents.
FeatureMatrix vectorize_dataset_w2v(const std::vector<Document>& docs, const NgramSpec& spec,
                                    const EmbeddingTable& table, std::size_t* zero_rows = nullptr);

}  // namespace hatepipe
