#include "hatepipe/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "hatepipe/error.hpp"
#include "hatepipe/io.hpp"
#include "hatepipe/utf8.hpp"

namespace hatepipe {

void NgramSpec::validate() const {
  if (word_orders.empty() && char_orders.empty()) throw ArgumentError("n-gram spec has no word or char orders");
  for (int n : word_orders) {
    if (n < 1 || n > kMaxWordOrder) throw ArgumentError("word n-gram order " + std::to_string(n) + " outside 1..4");
  }
  for (int n : char_orders) {
    if (n < 1 || n > kMaxCharOrder) throw ArgumentError("char n-gram order " + std::to_string(n) + " outside 1..3");
  }
}

std::set<int> parse_orders(std::string_view text) {
  std::set<int> out;
  if (text.empty() || text == "none" || text == "-") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    int n = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), n);
    if (ec != std::errc{} || p != part.data() + part.size()) {
      throw ArgumentError("bad n-gram order list '" + std::string(text) + "'");
    }
    out.insert(n);
    start = end + 1;
  }
  return out;
}

std::string format_orders(const std::set<int>& orders) {
  std::string out;
  for (int n : orders) {
    if (!out.empty()) out += ',';
    out += std::to_string(n);
  }
  return out;
}

std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int n) {
  if (n < 1) throw ArgumentError("word n-gram order must be >= 1");
  std::vector<std::string> out;
  const auto order = static_cast<std::size_t>(n);
  if (tokens.size() < order) return out;
  out.reserve(tokens.size() - order + 1);
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string term = tokens[i];
    for (std::size_t k = 1; k < order; ++k) {
      term += ' ';
      term += tokens[i + k];
    }
    out.push_back(std::move(term));
  }
  return out;
}

std::vector<std::string> char_ngrams(std::span<const std::string> tokens, int n) {
  if (n < 1) throw ArgumentError("char n-gram order must be >= 1");
  std::vector<std::string> out;
  const auto order = static_cast<std::size_t>(n);
  for (const auto& tok : tokens) {
    const auto cps = utf8::decode(tok);
    if (cps.size() < order) continue;
    for (std::size_t i = 0; i + order <= cps.size(); ++i) {
      std::string term(kCharPrefix);
      term += utf8::encode(std::u32string_view(cps).substr(i, order));
      out.push_back(std::move(term));
    }
  }
  return out;
}

std::vector<std::string> term_stream(std::span<const std::string> tokens, const NgramSpec& spec) {
  std::vector<std::string> out;
  for (int n : spec.word_orders) {
    auto part = word_ngrams(tokens, n);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  for (int n : spec.char_orders) {
    auto part = char_ngrams(tokens, n);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

Vocabulary::Vocabulary(NgramSpec spec, std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
                       std::size_t n_docs_fit, std::size_t min_count, std::size_t raw_term_count)
    : spec_(std::move(spec)),
      terms_(std::move(terms)),
      doc_freq_(std::move(doc_freq)),
      n_docs_fit_(n_docs_fit),
      min_count_(min_count),
      raw_term_count_(raw_term_count) {
  if (terms_.size() != doc_freq_.size()) throw ArgumentError("vocabulary terms/doc_freq length mismatch");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) throw ArgumentError("vocabulary terms must be sorted and unique");
    index_.emplace(terms_[i], i);
  }
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::to_tsv() const {
  std::string out = "# n_docs_fit=" + std::to_string(n_docs_fit_) + " min_count=" + std::to_string(min_count_) +
                    " raw_terms=" + std::to_string(raw_term_count_) + "\n";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out += terms_[i];
    out += '\t';
    out += std::to_string(i);
    out += '\t';
    out += std::to_string(doc_freq_[i]);
    out += '\n';
  }
  return out;
}

namespace {

std::size_t parse_size(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError("vocabulary: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::size_t header_field(std::string_view header, std::string_view key) {
  const std::string needle = std::string(key) + "=";
  auto pos = header.find(needle);
  if (pos == std::string_view::npos) throw ParseError("vocabulary header lacks " + std::string(key));
  auto rest = header.substr(pos + needle.size());
  return parse_size(rest.substr(0, rest.find(' ')), key);
}

}  // namespace

Vocabulary Vocabulary::from_tsv(std::string_view text, NgramSpec spec) {
  auto ls = io::lines(text);
  if (ls.empty() || ls.front().empty() || ls.front().front() != '#') throw ParseError("vocabulary: missing header");
  const auto n_docs = header_field(ls.front(), "n_docs_fit");
  const auto min_count = header_field(ls.front(), "min_count");
  const auto raw = header_field(ls.front(), "raw_terms");
  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].empty()) continue;
    const auto t1 = ls[i].find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : ls[i].find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw ParseError("vocabulary line " + std::to_string(i + 1) + ": expected 3 fields");
    if (parse_size(ls[i].substr(t1 + 1, t2 - t1 - 1), "index") != terms.size()) {
      throw ParseError("vocabulary line " + std::to_string(i + 1) + ": indices must be dense and ordered");
    }
    terms.emplace_back(ls[i].substr(0, t1));
    df.push_back(parse_size(ls[i].substr(t2 + 1), "doc_freq"));
  }
  return Vocabulary(std::move(spec), std::move(terms), std::move(df), n_docs, min_count, raw);
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, const NgramSpec& spec, std::size_t min_count) {
  spec.validate();
  if (min_count < 1) throw ArgumentError("min_count must be >= 1");
  if (docs.empty()) throw ValidationError("cannot build a vocabulary from an empty corpus");
  struct Stats {
    std::size_t count = 0;
    std::size_t df = 0;
    std::size_t last_doc = SIZE_MAX;
  };
  std::unordered_map<std::string, Stats> stats;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& term : term_stream(docs[d].tokens, spec)) {
      auto& s = stats[std::move(term)];
      ++s.count;
      if (s.last_doc != d) {
        ++s.df;
        s.last_doc = d;
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, s] : stats) {
    if (s.count >= min_count) kept.emplace_back(term, s.df);
  }
  if (kept.empty()) {
    throw ValidationError("vocabulary is empty after applying min_count=" + std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end());
  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  terms.reserve(kept.size());
  df.reserve(kept.size());
  for (auto& [t, f] : kept) {
    terms.push_back(std::move(t));
    df.push_back(f);
  }
  return Vocabulary(spec, std::move(terms), std::move(df), docs.size(), min_count, stats.size());
}

double tfidf_weight(std::size_t count, std::size_t doc_freq, std::size_t n_docs_fit) {
  if (count == 0) return 0.0;
  const double tf = 1.0 + std::log(static_cast<double>(count));
  const double idf = std::log(1.0 + static_cast<double>(n_docs_fit) / (1.0 + static_cast<double>(doc_freq)));
  return tf * idf;
}

FeatureMatrix vectorize(const std::vector<Document>& docs, const Vocabulary& vocab, WeightingMode mode) {
  FeatureMatrix x(vocab.size());
  x.mode = mode;
  std::map<std::uint32_t, std::size_t> counts;
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (const auto& doc : docs) {
    counts.clear();
    std::size_t total = 0;
    for (const auto& term : term_stream(doc.tokens, vocab.spec())) {
      if (auto i = vocab.index_of(term)) {
        ++counts[static_cast<std::uint32_t>(*i)];
        ++total;
      }
    }
    idx.clear();
    val.clear();
    for (const auto& [i, c] : counts) {
      idx.push_back(i);
      switch (mode) {
        case WeightingMode::count: val.push_back(static_cast<double>(c)); break;
        case WeightingMode::binary: val.push_back(1.0); break;
        case WeightingMode::freq: val.push_back(static_cast<double>(c) / static_cast<double>(total)); break;
        case WeightingMode::tfidf: val.push_back(tfidf_weight(c, vocab.doc_freq()[i], vocab.n_docs_fit())); break;
      }
    }
    x.add_row(idx, val);
  }
  return x;
}

std::vector<double> chi2_scores(const FeatureMatrix& x, std::span<const int> y) {
  if (y.size() != x.rows()) throw ArgumentError("chi2: label count does not match matrix rows");
  std::array<double, 2> class_rows{0.0, 0.0};
  for (int label : y) {
    if (label != 0 && label != 1) throw ArgumentError("chi2: labels must be 0 or 1");
    class_rows[static_cast<std::size_t>(label)] += 1.0;
  }
  const double n = static_cast<double>(y.size());
  std::vector<std::array<double, 2>> observed(x.cols(), {0.0, 0.0});
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      if (r.values[k] < 0.0) throw ArgumentError("chi2: negative feature value");
      observed[r.indices[k]][static_cast<std::size_t>(y[i])] += r.values[k];
    }
  }
  std::vector<double> scores(x.cols(), 0.0);
  if (n == 0.0) return scores;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double total = observed[j][0] + observed[j][1];
    if (total == 0.0) continue;
    double s = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = class_rows[c] / n * total;
      if (expected <= 0.0) continue;
      const double d = observed[j][c] - expected;
      s += d * d / expected;
    }
    scores[j] = s;
  }
  return scores;
}

KBestSelection select_k_best(const FeatureMatrix& x, std::span<const int> y, std::size_t k) {
  if (k == 0) throw ArgumentError("select_k_best: k must be >= 1");
  const auto scores = chi2_scores(x, y);
  std::vector<std::size_t> order(x.cols());
  std::iota(order.begin(), order.end(), 0);
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  KBestSelection out{order, x.select_columns(order)};
  return out;
}

}  // namespace hatepipe
