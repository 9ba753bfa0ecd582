#include "hatepipe/preprocess.hpp"

#include <algorithm>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "hatepipe/error.hpp"
#include "hatepipe/io.hpp"
#include "hatepipe/utf8.hpp"

namespace hatepipe {

namespace {

std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  if (norm->isNormalized(src, status) && U_SUCCESS(status)) return std::string(s);
  status = U_ZERO_ERROR;
  const icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) throw Error(std::string("NFC normalization failed: ") + u_errorName(status));
  std::string out;
  dst.toUTF8String(out);
  return out;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Stable form of a resource entry: same transformation documents go through.
std::string canonical(std::string_view s) { return normalize_text(remove_diacritics(s)); }

}  // namespace

bool is_diacritic(char32_t cp) { return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670; }

FoldingTable::FoldingTable(std::map<char32_t, char32_t> mapping) : mapping_(std::move(mapping)) {}

const FoldingTable& FoldingTable::urdu_default() {
  static const FoldingTable table({
      {0x064A, 0x06CC},
      {0x0649, 0x06CC},
      {0x0643, 0x06A9},
      {0x0629, 0x06C3},
      {0x0647, 0x06C1},
      {0x06D5, 0x06C1},
  });
  return table;
}

FoldingTable FoldingTable::parse(std::string_view text) {
  std::map<char32_t, char32_t> mapping;
  std::size_t line_no = 0;
  for (auto line : io::lines(text)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("folding table line " + std::to_string(line_no) + ": expected two tab-separated fields");
    }
    try {
      mapping[utf8::parse_codepoint(strip(line.substr(0, tab)))] = utf8::parse_codepoint(strip(line.substr(tab + 1)));
    } catch (const ParseError& e) {
      throw ParseError("folding table line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return FoldingTable(std::move(mapping));
}

FoldingTable FoldingTable::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

char32_t FoldingTable::fold(char32_t cp) const {
  auto it = mapping_.find(cp);
  return it == mapping_.end() ? cp : it->second;
}

std::string remove_diacritics(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : utf8::decode(s)) {
    if (!is_diacritic(cp)) utf8::append(out, cp);
  }
  return out;
}

std::string normalize_text(std::string_view s, const FoldingTable& folding) {
  std::u32string cps = utf8::decode(nfc(s));
  bool changed = false;
  for (auto& cp : cps) {
    const char32_t f = folding.fold(cp);
    changed |= f != cp;
    cp = f;
  }
  std::string folded = utf8::encode(cps);
  return changed ? nfc(folded) : folded;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : utf8::decode(s)) {
    if (u_isUWhiteSpace(static_cast<UChar32>(cp))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      utf8::append(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

StopwordList::StopwordList(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    auto c = canonical(w);
    if (!c.empty()) words_.insert(std::move(c));
  }
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  const auto text = io::read_file(path);
  std::vector<std::string> words;
  for (auto line : io::lines(text)) {
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    if (!utf8::is_valid(line)) throw ParseError(path.string() + ": invalid UTF-8");
    words.emplace_back(line);
  }
  return StopwordList(words);
}

LemmaLexicon::LemmaLexicon(const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [surface, lemma] : entries) {
    surface_to_lemma_.emplace(canonical(surface), canonical(lemma));
  }
}

LemmaLexicon LemmaLexicon::load(const std::filesystem::path& path) {
  const auto text = io::read_file(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t line_no = 0;
  for (auto line : io::lines(text)) {
    ++line_no;
    if (strip(line).empty() || strip(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": expected surface<TAB>lemma");
    }
    auto surface = strip(line.substr(0, tab));
    auto lemma = strip(line.substr(tab + 1));
    if (!utf8::is_valid(surface) || !utf8::is_valid(lemma)) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": invalid UTF-8");
    }
    entries.emplace_back(surface, lemma);
  }
  return LemmaLexicon(entries);
}

const std::string& LemmaLexicon::lookup(const std::string& token) const {
  auto it = surface_to_lemma_.find(token);
  return it == surface_to_lemma_.end() ? token : it->second;
}

std::vector<std::pair<std::string, std::string>> LemmaLexicon::entries() const {
  std::vector<std::pair<std::string, std::string>> out(surface_to_lemma_.begin(), surface_to_lemma_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens, const StopwordList& list) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!list.contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<std::string> lemmatize(const std::vector<std::string>& tokens, const LemmaLexicon& lex) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lex.lookup(t));
  return out;
}

std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& cfg,
                                         const StopwordList& list, const LemmaLexicon& lex,
                                         const FoldingTable& folding) {
  auto tokens = tokenize(normalize_text(remove_diacritics(text), folding));
  if (cfg.remove_stopwords) tokens = remove_stopwords(tokens, list);
  if (cfg.lemmatize) tokens = lemmatize(tokens, lex);
  return tokens;
}

Document preprocess_document(const Document& doc, const PreprocessConfig& cfg, const StopwordList& list,
                             const LemmaLexicon& lex, const FoldingTable& folding) {
  Document out = doc;
  out.tokens = preprocess_text(doc.raw_text, cfg, list, lex, folding);
  return out;
}

std::vector<Document> preprocess_documents(const std::vector<Document>& docs, const PreprocessConfig& cfg,
                                           const StopwordList& list, const LemmaLexicon& lex,
                                           const FoldingTable& folding) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(preprocess_document(d, cfg, list, lex, folding));
  return out;
}

LabeledDataset preprocess_dataset(const LabeledDataset& ds, const PreprocessConfig& cfg,
                                  const StopwordList& list, const LemmaLexicon& lex,
                                  const FoldingTable& folding) {
  return LabeledDataset(preprocess_documents(ds.documents(), cfg, list, lex, folding), ds.positive_label_name());
}

}  // namespace hatepipe
