#include <doctest.h>

#include "hatepipe/embeddings.hpp"
#include "hatepipe/error.hpp"
#include "hatepipe/random.hpp"
#include "support.hpp"

using namespace hatepipe;

namespace {

EmbeddingTable abc_table() {
  return parse_embeddings("3 2\na 1 2\nb 3 -4\nc 0.5 0.5\n");
}

}  // namespace

TEST_SUITE("embeddings") {

TEST_CASE("parse text format") {
  const auto t = parse_embeddings("2 3\nx 1 2 3\ny -1 0 0.5\n");
  CHECK(t.size() == 2);
  CHECK(t.dim() == 3);
  const auto y = t.lookup("y");
  REQUIRE(y.has_value());
  CHECK((*y)[2] == 0.5);
  CHECK_FALSE(t.lookup("z").has_value());
  CHECK(parse_embeddings(t.to_text()).to_text() == t.to_text());
}

TEST_CASE("errors carry the line number") {
  try {
    parse_embeddings("2 3\nx 1 2 3\ny 1 2\n", "vec.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("vec.txt") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_embeddings(""), ParseError);
  CHECK_THROWS_AS(parse_embeddings("1 2\nx 1 nan\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("1 2\nx 1 q\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("3 2\nx 1 2\n"), ParseError);
  testing::TempDir dir;
  CHECK_THROWS_AS(load_embeddings(dir / "none.txt"), ResourceError);
}

TEST_CASE("duplicates keep the first vector") {
  const auto t = parse_embeddings("2 1\nx 1\nx 2\n");
  CHECK(t.size() == 1);
  CHECK(t.duplicates_skipped() == 1);
  CHECK((*t.lookup("x"))[0] == 1.0);
}

TEST_CASE("large table") {
  Rng rng(1);
  std::string text = "100000 4\n";
  for (int i = 0; i < 100000; ++i) {
    text += "w" + std::to_string(i);
    for (int d = 0; d < 4; ++d) text += " " + std::to_string(rng.uniform(-1, 1));
    text += '\n';
  }
  testing::TempDir dir;
  CHECK(load_embeddings(dir.write("big.txt", text)).size() == 100000);
}

TEST_CASE("document vectors") {
  const auto t = abc_table();
  CHECK(doc_vector(std::vector<std::string>{"a"}, t) == std::vector<double>{1, 2});
  CHECK(doc_vector(std::vector<std::string>{"a", "b"}, t) == std::vector<double>{2, -1});
  CHECK(doc_vector(std::vector<std::string>{"q", "r"}, t) == std::vector<double>{0, 0});
  CHECK(doc_vector(std::vector<std::string>{}, t) == std::vector<double>{0, 0});
  // unknown terms are skipped, not averaged in as zeros
  CHECK(doc_vector(std::vector<std::string>{"a", "zzz"}, t) == std::vector<double>{1, 2});
  // a missing bigram falls back to the mean of its words
  CHECK(doc_vector(std::vector<std::string>{"a b"}, t) == std::vector<double>{2, -1});
  CHECK(doc_vector(std::vector<std::string>{"a zzz"}, t) == std::vector<double>{1, 2});
}

TEST_CASE("document vectors do not depend on term order") {
  const auto t = abc_table();
  std::vector<std::string> terms{"a", "b", "c", "a b", "q", "c"};
  const auto base = doc_vector(terms, t);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    rng.shuffle(terms.begin(), terms.end());
    const auto v = doc_vector(terms, t);
    for (std::size_t d = 0; d < v.size(); ++d) CHECK(v[d] == doctest::Approx(base[d]).epsilon(1e-14));
  }
}

TEST_CASE("dataset vectors") {
  const auto t = abc_table();
  auto docs = testing::token_docs({"a", "a b", ""});
  const auto x1 = vectorize_dataset_w2v(docs, NgramSpec{{1}, {}}, t);
  CHECK(x1.cols() == 2);
  CHECK(x1.dense_row(0) == std::vector<double>{1, 2});
  std::size_t zero_rows = 0;
  const auto x12 = vectorize_dataset_w2v(docs, NgramSpec{{1, 2}, {}}, t, &zero_rows);
  // mean of a, b and the fallback (a+b)/2 is (a+b)/2
  const auto r = x12.dense_row(1);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(-1.0));
  CHECK(x12.dense_row(2) == std::vector<double>{0, 0});
  CHECK(zero_rows == 1);
  CHECK_THROWS_AS(vectorize_dataset_w2v(docs, NgramSpec{{1}, {2}}, t), ArgumentError);
}

}
