#include "hatepipe/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "hatepipe/error.hpp"
#include "hatepipe/io.hpp"

namespace hatepipe {

bool EmbeddingTable::add(const std::string& word, std::span<const double> vec) {
  if (vec.size() != dim_) throw ArgumentError("embedding for '" + word + "' has wrong dimensionality");
  for (double v : vec) {
    if (!std::isfinite(v)) throw ArgumentError("embedding for '" + word + "' has a non-finite component");
  }
  if (index_.count(word)) {
    ++duplicates_;
    return false;
  }
  index_.emplace(word, words_.size());
  words_.push_back(word);
  data_.insert(data_.end(), vec.begin(), vec.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::lookup(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

std::string EmbeddingTable::to_text() const {
  std::string out = std::to_string(words_.size()) + " " + std::to_string(dim_) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out += words_[i];
    for (std::size_t d = 0; d < dim_; ++d) {
      std::snprintf(buf, sizeof buf, " %.17g", data_[i * dim_ + d]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

EmbeddingTable parse_embeddings(std::string_view text, const std::string& source) {
  const auto ls = io::lines(text);
  auto fail = [&](std::size_t line_no, const std::string& msg) {
    return ParseError(source + ": line " + std::to_string(line_no) + ": " + msg);
  };
  if (ls.empty()) throw fail(1, "missing header");
  const auto header = split_spaces(ls[0]);
  std::size_t n_words = 0, dim = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), n_words).ec != std::errc{} ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), dim).ec != std::errc{} || dim == 0) {
    throw fail(1, "expected header '<n_words> <dim>'");
  }
  EmbeddingTable table(dim);
  std::vector<double> vec(dim);
  std::size_t rows = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].empty()) continue;
    const auto fields = split_spaces(ls[i]);
    if (fields.size() != dim + 1) {
      throw fail(i + 1, "expected " + std::to_string(dim) + " components, got " +
                            std::to_string(fields.size() == 0 ? 0 : fields.size() - 1));
    }
    for (std::size_t d = 0; d < dim; ++d) {
      const auto f = fields[d + 1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[d]);
      if (ec != std::errc{} || p != f.data() + f.size()) throw fail(i + 1, "bad number '" + std::string(f) + "'");
      if (!std::isfinite(vec[d])) throw fail(i + 1, "non-finite component");
    }
    table.add(std::string(fields[0]), vec);
    ++rows;
  }
  if (rows != n_words) {
    throw fail(ls.size(), "header declares " + std::to_string(n_words) + " words, file has " + std::to_string(rows));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(io::read_file(path), path.string());
}

std::vector<double> doc_vector(std::span<const std::string> terms, const EmbeddingTable& table) {
  const std::size_t dim = table.dim();
  std::vector<double> sum(dim, 0.0);
  std::vector<double> part(dim);
  std::size_t resolved = 0;
  for (const auto& term : terms) {
    if (auto v = table.lookup(term)) {
      for (std::size_t d = 0; d < dim; ++d) sum[d] += (*v)[d];
      ++resolved;
      continue;
    }
    if (term.find(' ') == std::string::npos) continue;
    std::fill(part.begin(), part.end(), 0.0);
    std::size_t known = 0;
    std::size_t start = 0;
    while (start <= term.size()) {
      auto end = term.find(' ', start);
      if (end == std::string::npos) end = term.size();
      if (auto v = table.lookup(term.substr(start, end - start))) {
        for (std::size_t d = 0; d < dim; ++d) part[d] += (*v)[d];
        ++known;
      }
      start = end + 1;
    }
    if (known == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) sum[d] += part[d] / static_cast<double>(known);
    ++resolved;
  }
  if (resolved > 0) {
    for (auto& s : sum) s /= static_cast<double>(resolved);
  }
  return sum;
}

FeatureMatrix vectorize_dataset_w2v(const std::vector<Document>& docs, const NgramSpec& spec,
                                    const EmbeddingTable& table, std::size_t* zero_rows) {
  if (!spec.char_orders.empty()) {
    throw ArgumentError("word2vec features cannot use character n-grams (no vectors exist for characters)");
  }
  spec.validate();
  FeatureMatrix x(table.dim());
  std::size_t zeros = 0;
  for (const auto& doc : docs) {
    const auto v = doc_vector(term_stream(doc.tokens, spec), table);
    bool all_zero = true;
    for (double c : v) all_zero &= c == 0.0;
    zeros += all_zero;
    x.add_dense_row(v);
  }
  if (zero_rows) *zero_rows = zeros;
  return x;
}

}  // namespace hatepipe
