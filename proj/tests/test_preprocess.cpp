#include <doctest.h>

#include "hatepipe/error.hpp"
#include "hatepipe/preprocess.hpp"
#include "hatepipe/random.hpp"
#include "hatepipe/utf8.hpp"
#include "support.hpp"

using namespace hatepipe;

namespace {

std::string cp(char32_t c) { return utf8::encode(std::u32string(1, c)); }

std::string random_string(Rng& rng, const std::vector<char32_t>& alphabet, std::size_t max_len) {
  std::u32string s;
  const auto len = rng.below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return utf8::encode(s);
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("diacritic removal") {
  CHECK(remove_diacritics("ک" + cp(0x0650) + "تاب") == "کتاب");
  CHECK(remove_diacritics("abc") == "abc");
  CHECK(remove_diacritics(cp(0x064B) + cp(0x0650) + cp(0x0670)) == "");
  CHECK(is_diacritic(0x064B));
  CHECK(is_diacritic(0x065F));
  CHECK(is_diacritic(0x0670));
  CHECK_FALSE(is_diacritic(0x064A));
  CHECK_FALSE(is_diacritic(0x0660));
}

TEST_CASE("urdu folding") {
  CHECK(normalize_text(cp(0x064A)) == cp(0x06CC));
  CHECK(normalize_text(cp(0x0643)) == cp(0x06A9));
  CHECK(normalize_text(cp(0x0649)) == cp(0x06CC));
  CHECK(normalize_text(cp(0x0629)) == cp(0x06C3));
  CHECK(normalize_text(cp(0x0647)) == cp(0x06C1));
  CHECK(normalize_text(cp(0x06D5)) == cp(0x06C1));
  const std::string urdu = "یہ ایک کتاب ہے";
  CHECK(normalize_text(urdu) == urdu);
}

TEST_CASE("default folding table matches the shipped data file") {
  const auto file = FoldingTable::load(std::filesystem::path(HATEPIPE_SOURCE_DIR) / "data" / "urdu_folding.tsv");
  CHECK(file.mapping() == FoldingTable::urdu_default().mapping());
  CHECK_THROWS_AS(FoldingTable::parse("U+0643\tnope\n"), ParseError);
}

TEST_CASE("nfc composition") {
  // alef + madda above composes to alef with madda
  CHECK(normalize_text(cp(0x0627) + cp(0x0653)) == cp(0x0622));
  CHECK(normalize_text("e\xCC\x81") == "\xC3\xA9");
}

TEST_CASE("tokenize") {
  CHECK(tokenize("ا ب ج") == std::vector<std::string>{"ا", "ب", "ج"});
  CHECK(tokenize("  a   b ") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a\tb\nc\xC2\xA0" "d") == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("stopwords") {
  const StopwordList the({"the"});
  CHECK(remove_stopwords({"x", "the", "y"}, the) == std::vector<std::string>{"x", "y"});
  CHECK(remove_stopwords({"x", "y"}, StopwordList{}) == std::vector<std::string>{"x", "y"});
  CHECK(remove_stopwords({"the", "the"}, the).empty());
  // entries are normalized on load
  const StopwordList folded({cp(0x0643) + cp(0x0650)});
  CHECK(folded.contains(cp(0x06A9)));
}

TEST_CASE("lemmas") {
  const LemmaLexicon lex(std::vector<std::pair<std::string, std::string>>{{"running", "run"}});
  CHECK(lemmatize({"running"}, lex) == std::vector<std::string>{"run"});
  CHECK(lemmatize({"xyz"}, lex) == std::vector<std::string>{"xyz"});
  CHECK(lemmatize({}, lex).empty());
  testing::TempDir dir;
  const auto loaded = LemmaLexicon::load(dir.write("l.tsv", "# comment\nrunning\trun\nate\teat\n"));
  CHECK(loaded.size() == 2);
  CHECK(loaded.lookup("ate") == "eat");
  CHECK_THROWS_AS(LemmaLexicon::load(dir / "missing.tsv"), ResourceError);
  CHECK_THROWS_AS(StopwordList::load(dir / "missing.txt"), ResourceError);
}

TEST_CASE("document pipeline") {
  const StopwordList stop({"the", "a"});
  const LemmaLexicon lex(std::vector<std::pair<std::string, std::string>>{{"cats", "cat"}, {"the", "lemma-of-the"}});
  const std::string text = "the  cats " + cp(0x0643) + cp(0x0650) + " a";
  const auto plain = preprocess_text(text, {false, false}, stop, lex);
  CHECK(plain == tokenize(normalize_text(remove_diacritics(text))));
  CHECK(preprocess_text("the a the", {true, true}, stop, lex).empty());
  // stopwords are removed before lemmas can rewrite them
  CHECK(preprocess_text("the cats", {true, true}, stop, lex) == std::vector<std::string>{"cat"});
  CHECK(preprocess_text("the cats", {false, true}, stop, lex) ==
        std::vector<std::string>{"lemma-of-the", "cat"});

  const auto d = preprocess_document(testing::doc("x", "the cats", 1), {true, false}, stop, lex);
  CHECK(d.tokens == std::vector<std::string>{"cats"});
  CHECK(d.raw_text == "the cats");
  CHECK(d.label == 1);
}

TEST_CASE("token counts") {
  Rng rng(11);
  const std::vector<char32_t> letters{U'a', U'b', U'c', U' ', 0x0627, 0x0628, 0x064A};
  const StopwordList stop({"a", "b"});
  const LemmaLexicon lex(std::vector<std::pair<std::string, std::string>>{{"c", "cc"}, {"ab", "x"}});
  for (int i = 0; i < 200; ++i) {
    const auto s = random_string(rng, letters, 20);
    const auto toks = tokenize(normalize_text(remove_diacritics(s)));
    CHECK(remove_stopwords(toks, stop).size() <= toks.size());
    CHECK(lemmatize(toks, lex).size() == toks.size());
  }
}

TEST_CASE("normalization is idempotent") {
  Rng rng(5);
  std::vector<char32_t> pool;
  for (char32_t c = 0x0600; c <= 0x06FF; ++c) pool.push_back(c);
  for (char32_t c : {U'a', U'e', U' ', char32_t{0x0301}, char32_t{0x0308}, char32_t{0x00E9}, char32_t{0x1E9B},
                     char32_t{0x0323}, char32_t{0xAC00}, char32_t{0x1100}, char32_t{0x1161}, char32_t{0x200C}}) {
    pool.push_back(c);
  }
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_string(rng, pool, 12);
    const auto once = normalize_text(s);
    CHECK(normalize_text(once) == once);
  }
}

TEST_CASE("diacritic removal commutes with normalization") {
  // U+0653..U+0655 compose with the preceding letter under NFC
  std::vector<char32_t> pool;
  for (const auto& [from, to] : FoldingTable::urdu_default().mapping()) {
    pool.push_back(from);
    pool.push_back(to);
  }
  for (char32_t c = 0x064B; c <= 0x065F; ++c) {
    if (c < 0x0653 || c > 0x0655) pool.push_back(c);
  }
  for (char32_t c : {char32_t{0x0670}, char32_t{0x0627}, char32_t{0x0628}, char32_t{0x06D2}, char32_t{0x0648},
                     char32_t{' '}}) {
    pool.push_back(c);
  }
  // every single code point and every ordered pair
  for (char32_t a : pool) {
    const auto s = utf8::encode(std::u32string(1, a));
    CHECK(remove_diacritics(normalize_text(s)) == normalize_text(remove_diacritics(s)));
    for (char32_t b : pool) {
      const auto t = utf8::encode(std::u32string{a, b});
      CHECK(remove_diacritics(normalize_text(t)) == normalize_text(remove_diacritics(t)));
    }
  }
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_string(rng, pool, 15);
    CHECK(remove_diacritics(normalize_text(s)) == normalize_text(remove_diacritics(s)));
  }
}

}
