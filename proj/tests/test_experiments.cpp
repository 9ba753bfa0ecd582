#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "hatepipe/error.hpp"
#include "hatepipe/experiments.hpp"
#include "hatepipe/synthdata.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hatepipe;

namespace {

SynthSpec small_spec(std::uint64_t seed, std::size_t per_class, double p_marker = 0.95) {
  SynthSpec s;
  s.n_docs = {per_class, per_class};
  s.noise_vocab = 200;
  s.p_marker = p_marker;
  s.seed = seed;
  s.id_prefix = "s" + std::to_string(seed) + "-";
  return s;
}

Resources synth_resources() {
  ResourcePaths p;
  p.stopwords = testing::data_dir() / "synth_stopwords.txt";
  p.lemmas = testing::data_dir() / "synth_lemmas.tsv";
  return Resources::load(p, {true, true, false});
}

void check_same(const EvalResult& a, const EvalResult& b) {
  CHECK(a.config_text == b.config_text);
  CHECK(a.confusion == b.confusion);
  CHECK(a.f1_positive == b.f1_positive);
  CHECK(a.f1_macro == b.f1_macro);
  CHECK(a.vocab_size == b.vocab_size);
  CHECK(a.vector_size == b.vector_size);
  CHECK(a.error == b.error);
}

EvalResult fake(const std::string& cfg_text, double f1) {
  auto cfg = PipelineConfig::parse(cfg_text);
  EvalResult r = make_result(cfg, Confusion{1, 1, 1, 1}, 10, 10);
  r.f1_positive = f1;
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("metrics from confusion counts") {
  const std::vector<int> t{1, 0, 0, 1}, p{1, 1, 0, 0};
  const auto c = confusion(t, p);
  CHECK(c == Confusion{1, 1, 1, 1});
  const auto m = metrics(c);
  CHECK(m.precision == 0.5);
  CHECK(m.recall == 0.5);
  CHECK(m.f1_positive == 0.5);
  CHECK(m.f1_macro == 0.5);
  CHECK(m.accuracy == 0.5);

  const auto perfect = metrics(confusion(t, t));
  CHECK(perfect.f1_positive == 1.0);
  CHECK(perfect.f1_macro == 1.0);

  const std::vector<int> none{0, 0, 0, 0};
  const auto neg = metrics(confusion(t, none));
  CHECK(neg.f1_positive == 0.0);
  CHECK(neg.precision == 0.0);
  CHECK(neg.f1_macro == doctest::Approx(0.5 * (2.0 / 3.0)));

  CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}), ArgumentError);
  CHECK_THROWS_AS(confusion(t, std::vector<int>{1}), ArgumentError);
  CHECK_THROWS_AS(confusion(t, std::vector<int>{1, 2, 0, 0}), ArgumentError);
}

TEST_CASE("config text round trip") {
  const auto c = PipelineConfig::parse("stopwords=yes lemmatize=no word_ngrams=1,2 mode=tfidf k_best=1000 "
                                       "smote=yes classifier=svm-poly-3 C=2 seed=4");
  CHECK(c.preprocess.remove_stopwords);
  CHECK(c.ngrams.word_orders == std::set<int>{1, 2});
  CHECK(c.k_best == 1000u);
  CHECK(c.classifier.kernel.degree == 3);
  CHECK(PipelineConfig::parse(c.serialize()) == c);
  CHECK(PipelineConfig::from_json(c.to_json()) == c);
  CHECK(PipelineConfig::parse(c.to_json().dump()) == c);

  const auto cnn = PipelineConfig::parse("classifier=cnn seq_len=20 channels=1,2 epochs=2 seed=1");
  CHECK(cnn.classifier.cnn.seq_len == 20);
  CHECK(PipelineConfig::parse(cnn.serialize()) == cnn);
  const auto ada = PipelineConfig::parse("classifier=adaboost n_estimators=7; mode=binary");
  CHECK(ada.classifier.adaboost.n_estimators == 7);
  CHECK(PipelineConfig::parse(ada.serialize()) == ada);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(PipelineConfig::parse("features=word2vec char_ngrams=2"), ArgumentError);
  CHECK_THROWS_AS(PipelineConfig::parse("features=word2vec mode=freq"), ArgumentError);
  CHECK_THROWS_AS(PipelineConfig::parse("features=word2vec k_best=10"), ArgumentError);
  CHECK_THROWS_AS(PipelineConfig::parse("colour=blue"), ArgumentError);
  CHECK_THROWS_AS(PipelineConfig::parse("classifier=adaboost C=3"), ArgumentError);
  CHECK_THROWS_AS(PipelineConfig::parse("mode=loud"), ArgumentError);
  CHECK_THROWS_AS(PipelineConfig::parse("word_ngrams=none"), ArgumentError);
  CHECK(PipelineConfig::parse("features=word2vec").mode == std::nullopt);
}

TEST_CASE("grid files keep bad rows") {
  const auto rows = parse_grid("# comment\nclassifier=svm-rbf\n\nclassifier=nonsense\nmode=count\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].config.has_value());
  CHECK_FALSE(rows[1].config.has_value());
  CHECK(rows[1].source == "classifier=nonsense");
  CHECK_FALSE(rows[1].error.empty());
  const auto js = parse_grid(R"([{"classifier":"svm-poly-1"},{"mode":"nope"}])");
  REQUIRE(js.size() == 2);
  CHECK(js[0].config.has_value());
  CHECK_FALSE(js[1].config.has_value());
}

TEST_CASE("f1 formatting") {
  CHECK(format_f1(0.83175) == "0.8318");
  CHECK(format_f1(0.49305) == "0.4931");
  CHECK(format_f1(1.0) == "1.0000");
  CHECK(format_f1(0.0) == "0.0000");
  CHECK(format_f1(0.12344) == "0.1234");
}

TEST_CASE("run statistics") {
  const auto cfg = PipelineConfig::parse("classifier=cnn seed=10");
  std::vector<std::uint64_t> seeds;
  std::vector<double> f1s{0.2, 0.4};
  const auto s = average_runs(cfg, 2, [&](const PipelineConfig& c) {
    seeds.push_back(c.seed);
    return f1s[seeds.size() - 1];
  });
  CHECK(seeds == std::vector<std::uint64_t>{10, 11});
  CHECK(s.mean == doctest::Approx(0.3));
  CHECK(s.stdev == doctest::Approx(oracle::sample_stdev({0.2, 0.4})));
  CHECK(s.stdev == doctest::Approx(0.1414213562));
  CHECK(s.max == 0.4);
  CHECK(s.min == 0.2);
  CHECK_THROWS_AS(average_runs(cfg, 1, [](const PipelineConfig&) { return 0.5; }), ArgumentError);

  const auto flat = average_runs(cfg, 5, [](const PipelineConfig&) { return 0.7; });
  CHECK(flat.stdev == 0.0);
  const auto table = emit_run_stats({{"F1", flat}}, TableFormat::csv);
  const auto ls = lines_of(table);
  REQUIRE(ls.size() == 5);
  CHECK(ls[1].rfind("Average", 0) == 0);
  CHECK(ls[2].rfind("Maximum", 0) == 0);
  CHECK(ls[3].rfind("Minimum", 0) == 0);
  CHECK(ls[4].rfind("Std. dev.", 0) == 0);
}

TEST_CASE("tables") {
  std::vector<EvalResult> rs{fake("stopwords=yes lemmatize=yes word_ngrams=1,2 mode=freq classifier=svm-poly-1", 0.8318)};
  const auto csv = emit_table(rs, TableFormat::csv);
  const auto ls = lines_of(csv);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "STW Removed,Lemmatized,Word ngrams,Mode,Model,Vocab size,Vector size,F1");
  CHECK(ls[1] == "Yes,Yes,\"1,2\",freq,SVM-POLY-1,10,10,0.8318");

  rs.push_back(fake("classifier=svm-rbf", 0.79));
  rs.push_back(fake("classifier=adaboost", 0.85));
  sort_results(rs);
  const auto md = emit_table(rs, TableFormat::markdown, 0.80);
  const auto ml = lines_of(md);
  REQUIRE(ml.size() == 4);
  const auto pipes = std::count(ml[0].begin(), ml[0].end(), '|');
  for (const auto& l : ml) {
    CHECK(l.front() == '|');
    CHECK(l.back() == '|');
    CHECK(std::count(l.begin(), l.end(), '|') == pipes);
  }
  CHECK(ml[1].find("---") != std::string::npos);
  CHECK(ml[2].find("AdaBoost") != std::string::npos);
  CHECK(ml[3].find("0.8318") != std::string::npos);
  CHECK(md.find("0.7900") == std::string::npos);

  CHECK(emit_table({}, TableFormat::csv).empty());
  CHECK(emit_table({}, TableFormat::markdown).empty());
}

TEST_CASE("sorting is total") {
  std::vector<EvalResult> rs{fake("classifier=svm-rbf", 0.5), fake("classifier=svm-poly-1", 0.5),
                             fake("classifier=adaboost", 0.9)};
  EvalResult failed = fake("classifier=svm-sigmoid", 0.99);
  failed.error = "boom";
  rs.push_back(failed);
  sort_results(rs);
  CHECK(rs[0].f1_positive == 0.9);
  CHECK(rs[1].config_text < rs[2].config_text);
  CHECK_FALSE(rs[3].ok());
}

TEST_CASE("presets") {
  const auto a1 = make_preset("A1");
  CHECK(a1.configs.size() == 2 * 2 * 3 * 4 * 6);
  CHECK(a1.threshold == 0.80);
  CHECK(make_preset("A2").threshold == 0.82);
  CHECK(make_preset("A2").configs.size() == 2 * 2 * 4 * 2 * 6);
  CHECK(make_preset("B1").threshold == 0.47);
  CHECK(make_preset("B1").configs.size() == 2 * 2 * 3 * 5);
  CHECK(make_preset("B2").configs.size() == 10);
  CHECK(make_preset("B3").configs.size() == 16);
  CHECK(make_preset("A4").averaged);
  CHECK(make_preset("B4").configs.size() == 2);
  for (const auto& n : preset_names()) {
    for (const auto& c : make_preset(n, 3).configs) {
      CHECK(c.seed == 3);
      CHECK_NOTHROW(c.validate());
    }
  }
  try {
    make_preset("C9");
    FAIL("expected ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("A1") != std::string::npos);
    CHECK(std::string(e.what()).find("B4") != std::string::npos);
  }
}

TEST_CASE("resources") {
  testing::TempDir dir;
  ResourcePaths p;
  p.stopwords = dir / "nope.txt";
  try {
    Resources::load(p, {true, false, false});
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("nope.txt") != std::string::npos);
  }
  CHECK_THROWS_AS(Resources::load(ResourcePaths{}, {false, false, true}), ResourceError);
  const auto none = Resources::load(ResourcePaths{}, {});
  CHECK_THROWS_AS(none.require(PipelineConfig::parse("stopwords=yes")), ResourceError);
  CHECK_NOTHROW(none.require(PipelineConfig::parse("stopwords=no")));
  const auto r = synth_resources();
  CHECK(r.files.count("stopwords") == 1);
  CHECK(r.files.at("stopwords").sha256.size() == 64);
}

TEST_CASE("synthetic marker corpus is learned") {
  const auto train = generate(small_spec(1, 600));
  const auto test = generate(small_spec(2, 100));
  const auto res = synth_resources();
  const auto cfg = PipelineConfig::parse("word_ngrams=1 mode=freq classifier=svm-poly-1");
  const auto r = run_config(cfg, train, test, res);
  REQUIRE(r.ok());
  CHECK(r.f1_positive >= 0.95);
  CHECK(r.vector_size <= r.vocab_size);
  check_same(r, run_config(cfg, train, test, res));

  // stored metrics recompute from the stored confusion
  const auto m = metrics(r.confusion);
  CHECK(m.f1_positive == r.f1_positive);
  CHECK(m.f1_macro == r.f1_macro);
  CHECK(m.accuracy == r.accuracy);
  CHECK(r.confusion.total() == test.size());
}

TEST_CASE("test documents never reach the fitted features") {
  const auto train = generate(small_spec(3, 60));
  const auto test = generate(small_spec(4, 40));
  std::vector<Document> extra = test.documents();
  for (auto& d : extra) d.raw_text += " leak" + d.id + " zzleak";
  const LabeledDataset test2(extra, "positive");
  const auto res = synth_resources();
  for (const char* text : {"word_ngrams=1,2 mode=tfidf classifier=svm-rbf",
                           "word_ngrams=1 char_ngrams=2 mode=count k_best=50 smote=yes classifier=adaboost"}) {
    const auto cfg = PipelineConfig::parse(text);
    const auto a = run_config(cfg, train, test, res);
    const auto b = run_config(cfg, train, test2, res);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.vocab_size == b.vocab_size);
    CHECK(a.vector_size == b.vector_size);
    const auto p = fit_pipeline(cfg, train, res);
    CHECK_FALSE(p.vocabulary.index_of("zzleak").has_value());
    for (const auto& d : extra) CHECK_FALSE(p.vocabulary.index_of("leak" + d.id).has_value());
    CHECK(p.vocab_size == a.vocab_size);
  }
}

TEST_CASE("grids") {
  const auto train = generate(small_spec(5, 50));
  const auto test = generate(small_spec(6, 30));
  const auto res = synth_resources();
  std::vector<PipelineConfig> cfgs;
  for (const char* t : {"mode=count classifier=svm-rbf", "mode=binary classifier=adaboost",
                        "stopwords=yes lemmatize=yes mode=tfidf classifier=svm-poly-2",
                        "word_ngrams=1,2 mode=freq smote=yes classifier=svm-sigmoid seed=3",
                        "features=word2vec classifier=svm-rbf"}) {
    cfgs.push_back(PipelineConfig::parse(t));
  }
  const auto a = run_grid(cfgs, train, test, res);
  REQUIRE(a.size() == cfgs.size());
  // word2vec without embeddings fails on its own row
  CHECK_FALSE(a.back().ok());
  CHECK(a.back().error->find("embeddings") != std::string::npos);
  for (std::size_t i = 0; i + 2 < a.size(); ++i) CHECK(a[i].f1_positive >= a[i + 1].f1_positive);

  auto shuffled = cfgs;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 2, shuffled.end());
  const auto b = run_grid(shuffled, train, test, res, {2});
  CHECK(emit_table(a, TableFormat::csv) == emit_table(b, TableFormat::csv));
  CHECK(emit_results_csv(a) == emit_results_csv(b));
  for (std::size_t i = 0; i < a.size(); ++i) check_same(a[i], b[i]);

  // each row equals its standalone run
  for (const auto& r : a) {
    if (r.ok()) check_same(r, run_config(r.config, train, test, res));
  }
  CHECK(run_grid({}, train, test, res).empty());
}

TEST_CASE("pipelines persist") {
  const auto train = generate(small_spec(7, 40));
  const auto test = generate(small_spec(8, 20));
  const auto res = synth_resources();
  testing::TempDir dir;
  for (const char* t : {"stopwords=yes word_ngrams=1,2 mode=tfidf k_best=30 classifier=svm-poly-1",
                        "classifier=adaboost mode=count smote=yes",
                        "classifier=cnn seq_len=12 embed_dim=4 filters=2 dense_units=3 channels=1,2 epochs=1"}) {
    const auto p = fit_pipeline(PipelineConfig::parse(t), train, res);
    save_pipeline(p, dir / "p.json");
    const auto back = load_pipeline(dir / "p.json");
    CHECK(back.config == p.config);
    CHECK(back.vocabulary == p.vocabulary);
    CHECK(back.scores(test.documents(), nullptr) == p.scores(test.documents(), nullptr));
    save_pipeline(back, dir / "p2.json");
    CHECK(io::read_file(dir / "p.json") == io::read_file(dir / "p2.json"));
  }
}

TEST_CASE("word2vec pipeline with embeddings") {
  auto spec = small_spec(9, 300);
  const auto train = generate(spec);
  spec.seed = 10;
  spec.id_prefix = "t";
  const auto test = generate(spec);
  testing::TempDir dir;
  io::write_file(dir / "emb.txt", synth_embeddings(spec, 8, 3.0, 1).to_text());
  ResourcePaths paths;
  paths.embeddings = dir / "emb.txt";
  const auto res = Resources::load(paths, {false, false, true});
  const auto cfg = PipelineConfig::parse("features=word2vec word_ngrams=1,2 smote=yes classifier=svm-rbf");
  const auto r = run_config(cfg, train, test, res);
  REQUIRE(r.ok());
  CHECK(r.vector_size == 8);
  CHECK(r.f1_positive > 0.8);
}

TEST_CASE("deterministic classifiers average to zero spread") {
  const auto train = generate(small_spec(11, 30));
  const auto test = generate(small_spec(12, 20));
  const auto s = average_runs(PipelineConfig::parse("classifier=svm-rbf"), 3, train, test, synth_resources());
  CHECK(s.stdev == 0.0);
  CHECK(s.f1s.size() == 3);
}

TEST_CASE("manifest") {
  const auto train = generate(small_spec(13, 20));
  const auto test = generate(small_spec(14, 10));
  const auto res = synth_resources();
  const auto rs = run_grid({PipelineConfig::parse("classifier=svm-rbf")}, train, test, res);
  const auto j = grid_manifest(rs, res);
  CHECK(j.dump().find(res.files.at("stopwords").sha256) != std::string::npos);
}

}
