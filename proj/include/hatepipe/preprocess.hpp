#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hatepipe/corpus.hpp"

namespace hatepipe {

// Arabic harakat U+064B..U+065F and superscript alef U+0670.
bool is_diacritic(char32_t cp);

// Code-point substitutions applied after NFC to fold Arabic letters onto
// their Urdu counterparts.
class FoldingTable {
 public:
  FoldingTable() = default;
  explicit FoldingTable(std::map<char32_t, char32_t> mapping);

  // Yeh/Alef-maksura -> Farsi Yeh, Kaf -> Keheh, Teh marbuta -> Teh marbuta goal,
  // Heh / Ae -> Heh goal. Identical to data/urdu_folding.tsv.
  static const FoldingTable& urdu_default();
  // TSV `U+XXXX<TAB>U+XXXX`; `#` comments and blank lines ignored.
  static FoldingTable load(const std::filesystem::path& path);
  static FoldingTable parse(std::string_view text);

  char32_t fold(char32_t cp) const;
  const std::map<char32_t, char32_t>& mapping() const { return mapping_; }

 private:
  std::map<char32_t, char32_t> mapping_;
};

std::string remove_diacritics(std::string_view s);

// NFC, then Urdu folding, then NFC again so that folded letters recompose.
std::string normalize_text(std::string_view s, const FoldingTable& folding = FoldingTable::urdu_default());

// Maximal runs of non-whitespace code points (Unicode White_Space).
std::vector<std::string> tokenize(std::string_view s);

class StopwordList {
 public:
  StopwordList() = default;
  // Entries are passed through diacritic removal and normalization.
  explicit StopwordList(const std::vector<std::string>& words);
  // One token per line, `#` comments ignored.
  static StopwordList load(const std::filesystem::path& path);

  bool contains(const std::string& token) const { return words_.count(token) != 0; }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

class LemmaLexicon {
 public:
  LemmaLexicon() = default;
  explicit LemmaLexicon(const std::vector<std::pair<std::string, std::string>>& entries);
  // TSV `surface<TAB>lemma`.
  static LemmaLexicon load(const std::filesystem::path& path);

  // Identity on misses.
  const std::string& lookup(const std::string& token) const;
  std::size_t size() const { return surface_to_lemma_.size(); }
  // Sorted by surface form.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  std::unordered_map<std::string, std::string> surface_to_lemma_;
};

struct PreprocessConfig {
  bool remove_stopwords = false;
  bool lemmatize = false;

  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens, const StopwordList& list);
std::vector<std::string> lemmatize(const std::vector<std::string>& tokens, const LemmaLexicon& lex);

// Full token pipeline for one text: diacritics -> normalize -> tokenize ->
// [stopwords] -> [lemmas].
std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& cfg,
                                         const StopwordList& list, const LemmaLexicon& lex,
                                         const FoldingTable& folding = FoldingTable::urdu_default());

Document preprocess_document(const Document& doc, const PreprocessConfig& cfg, const StopwordList& list,
                             const LemmaLexicon& lex,
                             const FoldingTable& folding = FoldingTable::urdu_default());

std::vector<Document> preprocess_documents(const std::vector<Document>& docs, const PreprocessConfig& cfg,
                                           const StopwordList& list, const LemmaLexicon& lex,
                                           const FoldingTable& folding = FoldingTable::urdu_default());

LabeledDataset preprocess_dataset(const LabeledDataset& ds, const PreprocessConfig& cfg,
                                  const StopwordList& list, const LemmaLexicon& lex,
                                  const FoldingTable& folding = FoldingTable::urdu_default());

}  // namespace hatepipe
