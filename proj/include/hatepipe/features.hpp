#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hatepipe/corpus.hpp"
#include "hatepipe/feature_matrix.hpp"

namespace hatepipe {

inline constexpr int kMaxWordOrder = 4;
inline constexpr int kMaxCharOrder = 3;
inline constexpr std::string_view kCharPrefix = "c:";

struct NgramSpec {
  std::set<int> word_orders;
  std::set<int> char_orders;

  // Throws ArgumentError when both sets are empty or an order is out of range.
  void validate() const;
  friend bool operator==(const NgramSpec&, const NgramSpec&) = default;
};

// "1,2,3" <-> {1,2,3}; empty string or "none" is the empty set.
std::set<int> parse_orders(std::string_view text);
std::string format_orders(const std::set<int>& orders);

std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int n);
// Per-token code-point windows tagged with the `c:` namespace.
std::vector<std::string> char_ngrams(std::span<const std::string> tokens, int n);
// Word orders ascending, then char orders ascending.
std::vector<std::string> term_stream(std::span<const std::string> tokens, const NgramSpec& spec);

class Vocabulary {
 public:
  Vocabulary() = default;
  // `terms` must be sorted and unique; doc_freq parallel to terms.
  Vocabulary(NgramSpec spec, std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
             std::size_t n_docs_fit, std::size_t min_count, std::size_t raw_term_count);

  std::optional<std::size_t> index_of(const std::string& term) const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  std::size_t n_docs_fit() const { return n_docs_fit_; }
  std::size_t min_count() const { return min_count_; }
  // Distinct terms before the min_count filter.
  std::size_t raw_term_count() const { return raw_term_count_; }
  const NgramSpec& spec() const { return spec_; }

  // TSV `term<TAB>index<TAB>doc_freq` after a `#`-prefixed header line.
  std::string to_tsv() const;
  static Vocabulary from_tsv(std::string_view text, NgramSpec spec);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.spec_ == b.spec_ && a.terms_ == b.terms_ && a.doc_freq_ == b.doc_freq_ &&
           a.n_docs_fit_ == b.n_docs_fit_ && a.min_count_ == b.min_count_ &&
           a.raw_term_count_ == b.raw_term_count_;
  }

 private:
  NgramSpec spec_;
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t n_docs_fit_ = 0;
  std::size_t min_count_ = 1;
  std::size_t raw_term_count_ = 0;
};

// Fits on the given (training) documents only. min_count applies to corpus
// occurrence counts; indices are assigned in lexicographic term order.
Vocabulary build_vocabulary(const std::vector<Document>& docs, const NgramSpec& spec, std::size_t min_count = 1);

// tf-idf: (1 + ln count) * ln(1 + n_docs_fit / (1 + doc_freq)).
double tfidf_weight(std::size_t count, std::size_t doc_freq, std::size_t n_docs_fit);

FeatureMatrix vectorize(const std::vector<Document>& docs, const Vocabulary& vocab, WeightingMode mode);

std::vector<double> chi2_scores(const FeatureMatrix& x, std::span<const int> y);

struct KBestSelection {
  std::vector<std::size_t> columns;  // ascending original indices
  FeatureMatrix reduced;
};

// Top-k chi-square columns; ties go to the lower column index. k is clamped to cols().
KBestSelection select_k_best(const FeatureMatrix& x, std::span<const int> y, std::size_t k);

}  // namespace hatepipe
