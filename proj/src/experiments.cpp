#include "hatepipe/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <mutex>
#include <numeric>
#include <thread>

#include "hatepipe/error.hpp"
#include "hatepipe/io.hpp"
#include "hatepipe/random.hpp"
#include "hatepipe/resample.hpp"

namespace hatepipe {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "yes" || v == "true" || v == "1") return true;
  if (v == "no" || v == "false" || v == "0") return false;
  throw ArgumentError("config key '" + key + "' expects yes/no, got '" + v + "'");
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) {
    throw ArgumentError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return n;
}

double parse_real(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x)) {
    throw ArgumentError("config key '" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

std::string orders_text(const std::set<int>& s) { return s.empty() ? "none" : format_orders(s); }

std::string channels_text(const std::vector<int>& c) {
  std::string out;
  for (int w : c) {
    if (!out.empty()) out += ',';
    out += std::to_string(w);
  }
  return out;
}

std::vector<int> parse_channels(const std::string& v) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    auto end = v.find(',', start);
    if (end == std::string::npos) end = v.size();
    out.push_back(static_cast<int>(parse_uint("channels", v.substr(start, end - start))));
    start = end + 1;
  }
  return out;
}

const char* source_name(FeatureSource s) { return s == FeatureSource::bow ? "bow" : "word2vec"; }

std::string classifier_key(const ClassifierSpec& c) {
  switch (c.kind) {
    case ClassifierKind::adaboost: return "adaboost";
    case ClassifierKind::cnn: return "cnn";
    default: {
      auto n = c.kernel.name();
      std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      return n;
    }
  }
}

const std::vector<std::string>& svm_keys() {
  static const std::vector<std::string> k{"C", "gamma", "coef0"};
  return k;
}
const std::vector<std::string>& adaboost_keys() {
  static const std::vector<std::string> k{"n_estimators", "learning_rate"};
  return k;
}
const std::vector<std::string>& cnn_keys() {
  static const std::vector<std::string> k{"seq_len", "embed_dim", "channels", "filters", "dense_units",
                                          "epochs", "batch_size", "cnn_learning_rate"};
  return k;
}

PipelineConfig from_pairs(std::map<std::string, std::string> kv) {
  static const std::set<std::string> known = [] {
    std::set<std::string> s{"stopwords", "lemmatize", "features", "word_ngrams", "char_ngrams", "mode",
                            "min_count", "k_best",    "smote",    "smote_k",     "classifier",  "seed"};
    for (const auto* list : {&svm_keys(), &adaboost_keys(), &cnn_keys()}) s.insert(list->begin(), list->end());
    return s;
  }();
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) throw ArgumentError("unknown config key '" + k + "'");
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };

  PipelineConfig c;
  if (auto v = take("stopwords")) c.preprocess.remove_stopwords = parse_bool("stopwords", *v);
  if (auto v = take("lemmatize")) c.preprocess.lemmatize = parse_bool("lemmatize", *v);
  if (auto v = take("features")) {
    if (*v == "bow") c.feature_source = FeatureSource::bow;
    else if (*v == "word2vec" || *v == "w2v") c.feature_source = FeatureSource::word2vec;
    else throw ArgumentError("config key 'features' expects bow or word2vec, got '" + *v + "'");
  }
  if (auto v = take("word_ngrams")) c.ngrams.word_orders = parse_orders(*v);
  if (auto v = take("char_ngrams")) c.ngrams.char_orders = parse_orders(*v);
  if (auto v = take("classifier")) {
    if (*v == "adaboost" || *v == "AdaBoost") c.classifier.kind = ClassifierKind::adaboost;
    else if (*v == "cnn" || *v == "CNN") c.classifier.kind = ClassifierKind::cnn;
    else {
      c.classifier.kind = ClassifierKind::svm;
      c.classifier.kernel = KernelSpec::parse(*v);
    }
  }
  if (auto v = take("mode")) {
    c.mode = *v == "none" ? std::nullopt : std::optional(parse_weighting_mode(*v));
  } else if (c.feature_source == FeatureSource::word2vec || c.classifier.kind == ClassifierKind::cnn) {
    c.mode.reset();
  }
  if (auto v = take("min_count")) c.min_count = parse_uint("min_count", *v);
  if (auto v = take("k_best")) {
    c.k_best = *v == "none" ? std::nullopt : std::optional<std::size_t>(parse_uint("k_best", *v));
  }
  if (auto v = take("smote")) c.smote = parse_bool("smote", *v);
  if (auto v = take("smote_k")) c.smote_k = parse_uint("smote_k", *v);
  if (auto v = take("seed")) c.seed = parse_uint("seed", *v);

  auto& cl = c.classifier;
  if (cl.kind == ClassifierKind::svm) {
    if (auto v = take("C")) cl.C = parse_real("C", *v);
    if (auto v = take("gamma")) cl.kernel.gamma = *v == "scale" ? std::nullopt : std::optional(parse_real("gamma", *v));
    if (auto v = take("coef0")) cl.kernel.coef0 = parse_real("coef0", *v);
  } else if (cl.kind == ClassifierKind::adaboost) {
    if (auto v = take("n_estimators")) cl.adaboost.n_estimators = parse_uint("n_estimators", *v);
    if (auto v = take("learning_rate")) cl.adaboost.learning_rate = parse_real("learning_rate", *v);
  } else {
    auto& n = cl.cnn;
    if (auto v = take("seq_len")) n.seq_len = parse_uint("seq_len", *v);
    if (auto v = take("embed_dim")) n.embed_dim = parse_uint("embed_dim", *v);
    if (auto v = take("channels")) n.channels = parse_channels(*v);
    if (auto v = take("filters")) n.filters = parse_uint("filters", *v);
    if (auto v = take("dense_units")) n.dense_units = parse_uint("dense_units", *v);
    if (auto v = take("epochs")) n.epochs = parse_uint("epochs", *v);
    if (auto v = take("batch_size")) n.batch_size = parse_uint("batch_size", *v);
    if (auto v = take("cnn_learning_rate")) n.learning_rate = parse_real("cnn_learning_rate", *v);
  }
  if (!kv.empty()) {
    throw ArgumentError("config key '" + kv.begin()->first + "' does not apply to classifier " +
                        classifier_key(c.classifier));
  }
  c.validate();
  return c;
}

std::string json_scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_null()) return "none";
  if (v.is_number_float()) return fmt_double(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ',';
      out += json_scalar_text(e);
    }
    return out.empty() ? "none" : out;
  }
  return v.dump();
}

std::string error_context(const PipelineConfig& cfg, const char* what) {
  return "[" + cfg.serialize() + "] " + what;
}

template <typename F>
auto with_config(const PipelineConfig& cfg, F&& f) {
  try {
    return f();
  } catch (const VersionError& e) {
    throw VersionError(error_context(cfg, e.what()));
  } catch (const ParseError& e) {
    throw ParseError(error_context(cfg, e.what()));
  } catch (const ValidationError& e) {
    throw ValidationError(error_context(cfg, e.what()));
  } catch (const ArgumentError& e) {
    throw ArgumentError(error_context(cfg, e.what()));
  } catch (const ResourceError& e) {
    throw ResourceError(error_context(cfg, e.what()));
  } catch (const TrainingError& e) {
    throw TrainingError(error_context(cfg, e.what()));
  } catch (const ShapeError& e) {
    throw ShapeError(error_context(cfg, e.what()));
  } catch (const Error& e) {
    throw Error(error_context(cfg, e.what()));
  }
}

// Train-side features plus the fitted transform (model not yet set).
struct FeatureSet {
  TrainedPipeline shell;
  FeatureMatrix x_train;
  IndexRows idx_train;
  std::vector<int> y_train;
};

bool is_cnn(const PipelineConfig& c) { return c.classifier.kind == ClassifierKind::cnn; }

NgramSpec vocabulary_spec(const PipelineConfig& c) { return is_cnn(c) ? NgramSpec{{1}, {}} : c.ngrams; }

std::size_t cnn_vocab_rows(const Vocabulary& v) { return v.size() + 2; }

FeatureMatrix index_matrix(const IndexRows& rows, std::size_t seq_len) {
  FeatureMatrix m(seq_len);
  std::vector<double> dense(seq_len);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < seq_len; ++j) dense[j] = static_cast<double>(r[j]);
    m.add_dense_row(dense);
  }
  return m;
}

FeatureSet fit_features(const PipelineConfig& cfg, const std::vector<Document>& train_pp, std::vector<int> y,
                        const Resources& res) {
  FeatureSet fs;
  auto& p = fs.shell;
  p.config = cfg;
  if (cfg.preprocess.remove_stopwords) p.stopwords = *res.stopwords;
  if (cfg.preprocess.lemmatize) p.lexicon = *res.lexicon;

  if (is_cnn(cfg)) {
    p.vocabulary = build_vocabulary(train_pp, vocabulary_spec(cfg), cfg.min_count);
    p.vocab_size = p.vocabulary.raw_term_count();
    p.vector_size = cfg.classifier.cnn.seq_len;
    p.feature_width = cfg.classifier.cnn.seq_len;
    fs.idx_train = encode_sequences(train_pp, p.vocabulary, cfg.classifier.cnn.seq_len);
  } else if (cfg.feature_source == FeatureSource::bow) {
    p.vocabulary = build_vocabulary(train_pp, cfg.ngrams, cfg.min_count);
    p.vocab_size = p.vocabulary.raw_term_count();
    p.vector_size = p.vocabulary.size();
    fs.x_train = vectorize(train_pp, p.vocabulary, *cfg.mode);
    if (cfg.k_best) {
      auto sel = select_k_best(fs.x_train, y, *cfg.k_best);
      p.selected_columns = std::move(sel.columns);
      fs.x_train = std::move(sel.reduced);
    }
    p.feature_width = fs.x_train.cols();
  } else {
    const auto& table = *res.embeddings;
    p.embeddings = res.files.at("embeddings");
    p.vocab_size = build_vocabulary(train_pp, cfg.ngrams, 1).size();
    p.vector_size = table.dim();
    p.feature_width = table.dim();
    fs.x_train = vectorize_dataset_w2v(train_pp, cfg.ngrams, table);
  }

  if (cfg.smote) {
    const SmoteConfig sc{cfg.smote_k, derive_seed(cfg.seed, 1)};
    if (is_cnn(cfg)) {
      const auto rows = cnn_vocab_rows(p.vocabulary);
      const auto seq_len = cfg.classifier.cnn.seq_len;
      auto r = smote(index_matrix(fs.idx_train, seq_len), y, sc);
      for (std::size_t i = fs.idx_train.size(); i < r.x.rows(); ++i) {
        const auto dense = r.x.dense_row(i);
        std::vector<std::uint32_t> seq(seq_len);
        for (std::size_t j = 0; j < seq_len; ++j) {
          const double v = std::clamp(std::round(dense[j]), 0.0, static_cast<double>(rows - 1));
          seq[j] = static_cast<std::uint32_t>(v);
        }
        fs.idx_train.push_back(std::move(seq));
      }
      y = std::move(r.y);
    } else {
      auto r = smote(fs.x_train, y, sc);
      fs.x_train = std::move(r.x);
      y = std::move(r.y);
    }
  }
  fs.y_train = std::move(y);
  return fs;
}

FeatureMatrix transform_matrix(const TrainedPipeline& p, const std::vector<Document>& pp, const EmbeddingTable* table) {
  if (p.config.feature_source == FeatureSource::word2vec) {
    if (!table) throw ResourceError("word2vec pipeline needs an embeddings table");
    return vectorize_dataset_w2v(pp, p.config.ngrams, *table);
  }
  auto x = vectorize(pp, p.vocabulary, *p.config.mode);
  if (!p.selected_columns.empty()) x = x.select_columns(p.selected_columns);
  return x;
}

ClassifierModel train_model(const PipelineConfig& cfg, const FeatureSet& fs) {
  const auto& cl = cfg.classifier;
  switch (cl.kind) {
    case ClassifierKind::svm: {
      SvmParams params;
      params.C = cl.C;
      return svm_train(fs.x_train, fs.y_train, cl.kernel, params);
    }
    case ClassifierKind::adaboost:
      return adaboost_train(fs.x_train, fs.y_train, cl.adaboost);
    case ClassifierKind::cnn: {
      auto c = cl.cnn;
      c.seed = derive_seed(cfg.seed, 2);
      return train_cnn(c, fs.idx_train, fs.y_train, cnn_vocab_rows(fs.shell.vocabulary));
    }
  }
  throw ArgumentError("unknown classifier");
}

std::vector<int> labels_of(const TrainedPipeline& p, const std::vector<double>& scores) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = p.label_for(scores[i]);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename T>
class OnceCache {
 public:
  template <typename Make>
  std::shared_ptr<const T> get(const std::string& key, Make&& make) {
    std::promise<std::shared_ptr<const T>> promise;
    std::shared_future<std::shared_ptr<const T>> future;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = map_.find(key);
      if (it == map_.end()) {
        future = promise.get_future().share();
        map_.emplace(key, future);
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(std::make_shared<const T>(make()));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const T>>> map_;
};

std::string preprocess_key(const PreprocessConfig& p) {
  return yes_no(p.remove_stopwords) + "/" + yes_no(p.lemmatize);
}

std::string feature_key(const PipelineConfig& c) {
  std::string k = preprocess_key(c.preprocess) + " " + source_name(c.feature_source) + " w=" +
                  orders_text(c.ngrams.word_orders) + " c=" + orders_text(c.ngrams.char_orders) +
                  " mode=" + (c.mode ? to_string(*c.mode) : "none") + " min=" + std::to_string(c.min_count) +
                  " k=" + (c.k_best ? std::to_string(*c.k_best) : "none");
  if (c.smote) k += " smote=" + std::to_string(c.smote_k) + "@" + std::to_string(c.seed);
  if (is_cnn(c)) k += " cnn=" + std::to_string(c.classifier.cnn.seq_len);
  return k;
}

struct TestFeatures {
  FeatureMatrix x;
  IndexRows idx;
};

std::vector<double> score_features(const TrainedPipeline& p, const TestFeatures& t) {
  switch (p.model.index()) {
    case 0: return svm_decisions(std::get<SvmModel>(p.model), t.x);
    case 1: return adaboost_decisions(std::get<AdaBoostModel>(p.model), t.x);
    default: return cnn_forward(std::get<CnnModel>(p.model), t.idx);
  }
}

TestFeatures transform_test(const TrainedPipeline& p, const std::vector<Document>& pp, const EmbeddingTable* table) {
  TestFeatures t;
  if (is_cnn(p.config)) t.idx = encode_sequences(pp, p.vocabulary, p.config.classifier.cnn.seq_len);
  else t.x = transform_matrix(p, pp, table);
  return t;
}

EvalResult failed_row(const PipelineConfig& cfg, std::string text, std::string error) {
  EvalResult r;
  r.config = cfg;
  r.config_text = std::move(text);
  r.error = std::move(error);
  return r;
}

}  // namespace

// ---- metrics ---------------------------------------------------------------

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty()) throw ArgumentError("confusion: empty label vectors");
  if (y_true.size() != y_pred.size()) {
    throw ArgumentError("confusion: " + std::to_string(y_true.size()) + " true labels vs " +
                        std::to_string(y_pred.size()) + " predictions");
  }
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw ArgumentError("confusion: labels must be 0 or 1");
    if (t == 1 && p == 1) ++c.tp;
    else if (t == 0 && p == 1) ++c.fp;
    else if (t == 1 && p == 0) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics(const Confusion& c) {
  if (c.total() == 0) throw ArgumentError("metrics: empty confusion matrix");
  auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  auto f1 = [](double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); };
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1_positive = f1(m.precision, m.recall);
  const double f1_negative = f1(ratio(c.tn, c.tn + c.fn), ratio(c.tn, c.tn + c.fp));
  m.f1_macro = 0.5 * (m.f1_positive + f1_negative);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  return m;
}

// ---- configuration ---------------------------------------------------------

std::string ClassifierSpec::name() const {
  switch (kind) {
    case ClassifierKind::adaboost: return "AdaBoost";
    case ClassifierKind::cnn: return "CNN";
    default: return kernel.name();
  }
}

bool operator==(const ClassifierSpec& a, const ClassifierSpec& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ClassifierKind::svm: return a.kernel == b.kernel && a.C == b.C;
    case ClassifierKind::adaboost:
      return a.adaboost.n_estimators == b.adaboost.n_estimators &&
             a.adaboost.learning_rate == b.adaboost.learning_rate;
    case ClassifierKind::cnn: {
      auto x = a.cnn, y = b.cnn;
      x.seed = y.seed = 0;
      return x == y;
    }
  }
  return false;
}

void PipelineConfig::validate() const {
  ngrams.validate();
  if (min_count < 1) throw ArgumentError("min_count must be >= 1");
  if (smote_k < 1) throw ArgumentError("smote_k must be >= 1");
  if (k_best && *k_best < 1) throw ArgumentError("k_best must be >= 1");
  const auto& cl = classifier;
  if (cl.kind == ClassifierKind::cnn) {
    if (feature_source != FeatureSource::bow) throw ArgumentError("cnn reads token sequences; features must be bow");
    if (ngrams.word_orders != std::set<int>{1} || !ngrams.char_orders.empty()) {
      throw ArgumentError("cnn uses word_ngrams=1 (its channels cover longer n-grams)");
    }
    if (mode) throw ArgumentError("cnn does not use a weighting mode");
    if (k_best) throw ArgumentError("cnn does not support k_best");
    cl.cnn.validate();
  } else if (feature_source == FeatureSource::word2vec) {
    if (!ngrams.char_orders.empty()) throw ArgumentError("word2vec features cannot use character n-grams");
    if (mode) throw ArgumentError("word2vec features do not use a weighting mode");
    if (k_best) throw ArgumentError("k_best requires bow features");
  } else if (!mode) {
    throw ArgumentError("bow features need a weighting mode");
  }
  if (cl.kind == ClassifierKind::svm) {
    cl.kernel.validate();
    if (!(cl.C > 0.0)) throw ArgumentError("C must be positive");
  }
  if (cl.kind == ClassifierKind::adaboost) {
    if (cl.adaboost.n_estimators < 1) throw ArgumentError("n_estimators must be >= 1");
    if (!(cl.adaboost.learning_rate > 0.0)) throw ArgumentError("learning_rate must be positive");
  }
}

std::string PipelineConfig::serialize() const {
  std::string s = "stopwords=" + yes_no(preprocess.remove_stopwords) + " lemmatize=" + yes_no(preprocess.lemmatize) +
                  " features=" + source_name(feature_source) + " word_ngrams=" + orders_text(ngrams.word_orders) +
                  " char_ngrams=" + orders_text(ngrams.char_orders);
  if (mode) s += " mode=" + to_string(*mode);
  s += " min_count=" + std::to_string(min_count);
  s += " k_best=" + (k_best ? std::to_string(*k_best) : std::string("none"));
  s += " smote=" + yes_no(smote);
  if (smote) s += " smote_k=" + std::to_string(smote_k);
  s += " classifier=" + classifier_key(classifier);
  const auto& cl = classifier;
  if (cl.kind == ClassifierKind::svm) {
    s += " C=" + fmt_double(cl.C) + " gamma=" + (cl.kernel.gamma ? fmt_double(*cl.kernel.gamma) : "scale") +
         " coef0=" + fmt_double(cl.kernel.coef0);
  } else if (cl.kind == ClassifierKind::adaboost) {
    s += " n_estimators=" + std::to_string(cl.adaboost.n_estimators) +
         " learning_rate=" + fmt_double(cl.adaboost.learning_rate);
  } else {
    const auto& n = cl.cnn;
    s += " seq_len=" + std::to_string(n.seq_len) + " embed_dim=" + std::to_string(n.embed_dim) +
         " channels=" + channels_text(n.channels) + " filters=" + std::to_string(n.filters) +
         " dense_units=" + std::to_string(n.dense_units) + " epochs=" + std::to_string(n.epochs) +
         " batch_size=" + std::to_string(n.batch_size) + " cnn_learning_rate=" + fmt_double(n.learning_rate);
  }
  s += " seed=" + std::to_string(seed);
  return s;
}

std::map<std::string, std::string> config_pairs(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ArgumentError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ArgumentError("config JSON must be an object");
    for (const auto& [k, v] : j.items()) kv[k] = json_scalar_text(v);
    return kv;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ';')) ++i;
    if (i < text.size() && text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ';') ++i;
    if (start == i) break;
    const auto item = text.substr(start, i - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ArgumentError("config item '" + std::string(item) + "' is not key=value");
    }
    std::string key(item.substr(0, eq));
    if (!kv.emplace(key, std::string(item.substr(eq + 1))).second) {
      throw ArgumentError("config key '" + key + "' given twice");
    }
  }
  return kv;
}

PipelineConfig config_from_pairs(const std::map<std::string, std::string>& pairs) { return from_pairs(pairs); }

PipelineConfig PipelineConfig::parse(std::string_view text) { return from_pairs(config_pairs(text)); }

json PipelineConfig::to_json() const {
  json j = json::object();
  const auto s = serialize();
  std::size_t start = 0;
  while (start < s.size()) {
    auto end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    const auto item = s.substr(start, end - start);
    const auto eq = item.find('=');
    j[item.substr(0, eq)] = item.substr(eq + 1);
    start = end + 1;
  }
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) { return from_pairs(config_pairs(j.dump())); }

std::vector<GridRow> parse_grid(std::string_view text) {
  std::vector<GridRow> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(std::string("grid is not valid JSON: ") + e.what());
    }
    for (const auto& item : j) {
      GridRow row;
      row.source = item.dump();
      try {
        row.config = PipelineConfig::from_json(item);
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }
  for (auto line : io::lines(text)) {
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string_view::npos || line[b] == '#') continue;
    GridRow row;
    row.source = std::string(line.substr(b));
    try {
      row.config = PipelineConfig::parse(line);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- resources -------------------------------------------------------------

ResourcePaths ResourcePaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "stopwords.txt", dir / "lemmas.tsv", dir / "embeddings.txt"};
}

ResourceNeeds ResourceNeeds::of(const PipelineConfig& cfg) {
  ResourceNeeds n;
  n.stopwords = cfg.preprocess.remove_stopwords;
  n.lemmas = cfg.preprocess.lemmatize;
  n.embeddings = cfg.feature_source == FeatureSource::word2vec && cfg.classifier.kind != ClassifierKind::cnn;
  return n;
}

ResourceNeeds ResourceNeeds::of(std::span<const PipelineConfig> cfgs) {
  ResourceNeeds n;
  for (const auto& c : cfgs) {
    const auto m = of(c);
    n.stopwords |= m.stopwords;
    n.lemmas |= m.lemmas;
    n.embeddings |= m.embeddings;
  }
  return n;
}

Resources Resources::load(const ResourcePaths& paths, const ResourceNeeds& needs) {
  Resources r;
  auto locate = [](const std::optional<std::filesystem::path>& p, const char* what, const char* flag) {
    if (!p) {
      throw ResourceError(std::string(what) + " required but not given (use " + flag + " or HATEPIPE_RESOURCES)");
    }
    if (!std::filesystem::exists(*p)) throw ResourceError(std::string(what) + " not found: " + p->string());
    return *p;
  };
  if (needs.stopwords) {
    const auto p = locate(paths.stopwords, "stopword list", "--stopwords");
    r.stopwords = StopwordList::load(p);
    r.files["stopwords"] = {p, io::sha256_file(p)};
  }
  if (needs.lemmas) {
    const auto p = locate(paths.lemmas, "lemma lexicon", "--lemmas");
    r.lexicon = LemmaLexicon::load(p);
    r.files["lemmas"] = {p, io::sha256_file(p)};
  }
  if (needs.embeddings) {
    const auto p = locate(paths.embeddings, "embeddings file", "--embeddings");
    r.embeddings = std::make_shared<const EmbeddingTable>(load_embeddings(p));
    r.files["embeddings"] = {p, io::sha256_file(p)};
  }
  return r;
}

void Resources::require(const PipelineConfig& cfg) const {
  const auto n = ResourceNeeds::of(cfg);
  if (n.stopwords && !stopwords) throw ResourceError("stopwords=yes requires a stopword list");
  if (n.lemmas && !lexicon) throw ResourceError("lemmatize=yes requires a lemma lexicon");
  if (n.embeddings && !embeddings) throw ResourceError("features=word2vec requires an embeddings file");
}

// ---- pipelines -------------------------------------------------------------

std::vector<Document> TrainedPipeline::preprocess(const std::vector<Document>& docs) const {
  return preprocess_documents(docs, config.preprocess, stopwords, lexicon);
}

std::vector<double> TrainedPipeline::scores_preprocessed(const std::vector<Document>& docs,
                                                         const EmbeddingTable* table) const {
  return score_features(*this, transform_test(*this, docs, table));
}

std::vector<double> TrainedPipeline::scores(const std::vector<Document>& docs, const EmbeddingTable* table) const {
  return scores_preprocessed(preprocess(docs), table);
}

int TrainedPipeline::label_for(double score) const {
  return config.classifier.kind == ClassifierKind::cnn ? (score > 0.5 ? 1 : 0) : (score > 0.0 ? 1 : 0);
}

TrainedPipeline fit_pipeline(const PipelineConfig& cfg, const LabeledDataset& train, const Resources& resources) {
  return with_config(cfg, [&] {
    cfg.validate();
    resources.require(cfg);
    const auto pp = preprocess_documents(train.documents(), cfg.preprocess,
                                         resources.stopwords.value_or(StopwordList{}),
                                         resources.lexicon.value_or(LemmaLexicon{}));
    auto fs = fit_features(cfg, pp, train.labels(), resources);
    fs.shell.model = train_model(cfg, fs);
    return std::move(fs.shell);
  });
}

json to_json(const TrainedPipeline& p) {
  std::vector<std::string> stop(p.stopwords.words().begin(), p.stopwords.words().end());
  std::sort(stop.begin(), stop.end());
  json lemmas = json::array();
  for (const auto& [s, l] : p.lexicon.entries()) lemmas.push_back({s, l});
  json j = {{"config", p.config.to_json()},
            {"stopwords", stop},
            {"lemmas", lemmas},
            {"vocabulary", p.vocabulary.to_tsv()},
            {"selected_columns", p.selected_columns},
            {"vocab_size", p.vocab_size},
            {"vector_size", p.vector_size},
            {"feature_width", p.feature_width},
            {"classifier", to_json(p.model)}};
  j["embeddings"] = p.embeddings ? json{{"path", p.embeddings->path.string()}, {"sha256", p.embeddings->sha256}}
                                 : json(nullptr);
  return j;
}

TrainedPipeline pipeline_from_json(const json& j) {
  try {
    TrainedPipeline p;
    p.config = PipelineConfig::from_json(j.at("config"));
    p.stopwords = StopwordList(j.at("stopwords").get<std::vector<std::string>>());
    std::vector<std::pair<std::string, std::string>> lemmas;
    for (const auto& e : j.at("lemmas")) lemmas.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    p.lexicon = LemmaLexicon(lemmas);
    p.vocabulary = Vocabulary::from_tsv(j.at("vocabulary").get<std::string>(), vocabulary_spec(p.config));
    p.selected_columns = j.at("selected_columns").get<std::vector<std::size_t>>();
    p.vocab_size = j.at("vocab_size").get<std::size_t>();
    p.vector_size = j.at("vector_size").get<std::size_t>();
    p.feature_width = j.at("feature_width").get<std::size_t>();
    if (!j.at("embeddings").is_null()) {
      p.embeddings = FileRecord{j["embeddings"].at("path").get<std::string>(),
                                j["embeddings"].at("sha256").get<std::string>()};
    }
    p.model = classifier_from_json(j.at("classifier"));
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed pipeline model: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("malformed pipeline model: ") + e.what());
  }
}

void save_pipeline(const TrainedPipeline& p, const std::filesystem::path& path) {
  io::write_file(path, dump_json(make_envelope("pipeline", to_json(p))));
}

TrainedPipeline load_pipeline(const std::filesystem::path& path) {
  const auto j = open_envelope(io::read_file(path), path.string());
  const auto kind = j.value("model_kind", std::string());
  if (kind != "pipeline") {
    throw ParseError(path.string() + ": expected a pipeline model, found model_kind '" + kind + "'");
  }
  return pipeline_from_json(j);
}

// ---- evaluation ------------------------------------------------------------

EvalResult make_result(const PipelineConfig& cfg, const Confusion& c, std::size_t vocab_size, std::size_t vector_size) {
  EvalResult r;
  r.config = cfg;
  r.config_text = cfg.serialize();
  r.confusion = c;
  const auto m = metrics(c);
  r.f1_positive = m.f1_positive;
  r.f1_macro = m.f1_macro;
  r.precision = m.precision;
  r.recall = m.recall;
  r.accuracy = m.accuracy;
  r.vocab_size = vocab_size;
  r.vector_size = vector_size;
  return r;
}

EvalResult run_config(const PipelineConfig& cfg, const LabeledDataset& train, const LabeledDataset& test,
                      const Resources& resources) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_config(cfg, [&] {
    const auto p = fit_pipeline(cfg, train, resources);
    const auto scores = p.scores(test.documents(), resources.embeddings.get());
    auto r = make_result(cfg, confusion(test.labels(), labels_of(p, scores)), p.vocab_size, p.vector_size);
    r.wall_time = seconds_since(t0);
    return r;
  });
}

void sort_results(std::vector<EvalResult>& results) {
  std::stable_sort(results.begin(), results.end(), [](const EvalResult& a, const EvalResult& b) {
    if (a.ok() != b.ok()) return a.ok();
    if (a.ok() && a.f1_positive != b.f1_positive) return a.f1_positive > b.f1_positive;
    return a.config_text < b.config_text;
  });
}

std::vector<EvalResult> run_grid(const std::vector<PipelineConfig>& configs, const LabeledDataset& train,
                                 const LabeledDataset& test, const Resources& resources, const GridOptions& options) {
  std::vector<EvalResult> results(configs.size());
  OnceCache<std::pair<std::vector<Document>, std::vector<Document>>> docs_cache;
  OnceCache<std::pair<FeatureSet, TestFeatures>> feature_cache;
  const auto y_test = test.labels();

  auto evaluate = [&](const PipelineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cfg.validate();
      resources.require(cfg);
      const auto docs = docs_cache.get(preprocess_key(cfg.preprocess), [&] {
        const auto& stop = cfg.preprocess.remove_stopwords ? *resources.stopwords : StopwordList{};
        const auto& lex = cfg.preprocess.lemmatize ? *resources.lexicon : LemmaLexicon{};
        return std::make_pair(preprocess_documents(train.documents(), cfg.preprocess, stop, lex),
                              preprocess_documents(test.documents(), cfg.preprocess, stop, lex));
      });
      const auto features = feature_cache.get(feature_key(cfg), [&] {
        auto fs = fit_features(cfg, docs->first, train.labels(), resources);
        auto t = transform_test(fs.shell, docs->second, resources.embeddings.get());
        return std::make_pair(std::move(fs), std::move(t));
      });
      TrainedPipeline p = features->first.shell;
      p.config = cfg;
      p.model = train_model(cfg, features->first);
      const auto scores = score_features(p, features->second);
      auto r = make_result(cfg, confusion(y_test, labels_of(p, scores)), p.vocab_size, p.vector_size);
      r.wall_time = seconds_since(t0);
      return r;
    } catch (const std::exception& e) {
      auto r = failed_row(cfg, cfg.serialize(), e.what());
      r.wall_time = seconds_since(t0);
      return r;
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) results[i] = evaluate(configs[i]);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, configs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  sort_results(results);
  return results;
}

RunStats average_runs(const PipelineConfig& cfg, std::size_t n, const F1Runner& runner) {
  if (n < 2) throw ArgumentError("average_runs needs at least 2 runs");
  RunStats s;
  for (std::size_t i = 0; i < n; ++i) {
    auto c = cfg;
    c.seed = cfg.seed + i;
    s.f1s.push_back(runner(c));
  }
  s.mean = std::accumulate(s.f1s.begin(), s.f1s.end(), 0.0) / static_cast<double>(n);
  s.max = *std::max_element(s.f1s.begin(), s.f1s.end());
  s.min = *std::min_element(s.f1s.begin(), s.f1s.end());
  double ss = 0.0;
  for (double f : s.f1s) ss += (f - s.mean) * (f - s.mean);
  s.stdev = std::sqrt(ss / static_cast<double>(n - 1));
  return s;
}

RunStats average_runs(const PipelineConfig& cfg, std::size_t n, const LabeledDataset& train,
                      const LabeledDataset& test, const Resources& resources) {
  return average_runs(cfg, n, [&](const PipelineConfig& c) { return run_config(c, train, test, resources).f1_positive; });
}

// ---- output ----------------------------------------------------------------

std::string format_f1(double f1) {
  const double scaled = std::floor(f1 * 1e4 + 0.5 + 1e-9);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", scaled / 1e4);
  return buf;
}

namespace {

std::string render(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                   TableFormat format) {
  std::string out;
  if (format == TableFormat::csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += format_delimited_field(cells[i], ',');
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
  auto line = [&](const std::vector<std::string>& cells) {
    out += '|';
    for (const auto& c : cells) {
      std::string cell = c;
      std::size_t pos = 0;
      while ((pos = cell.find('|', pos)) != std::string::npos) {
        cell.replace(pos, 1, "\\|");
        pos += 2;
      }
      out += ' ' + cell + " |";
    }
    out += '\n';
  };
  line(header);
  out += '|';
  for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
  out += '\n';
  for (const auto& r : rows) line(r);
  return out;
}

std::string cap_yes_no(bool b) { return b ? "Yes" : "No"; }

}  // namespace

std::string emit_table(const std::vector<EvalResult>& results, TableFormat format, std::optional<double> threshold) {
  if (results.empty()) return {};
  std::vector<const EvalResult*> rows;
  for (const auto& r : results) {
    if (threshold && (!r.ok() || r.f1_positive < *threshold)) continue;
    rows.push_back(&r);
  }
  bool word = false, chars = false, mode = false, topk = false, smote_col = false;
  for (const auto* r : rows) {
    const auto& c = r->config;
    word |= c.classifier.kind != ClassifierKind::cnn;
    chars |= !c.ngrams.char_orders.empty();
    mode |= c.mode.has_value();
    topk |= c.k_best.has_value();
    smote_col |= c.smote;
  }
  std::vector<std::string> header{"STW Removed", "Lemmatized"};
  if (word) header.push_back("Word ngrams");
  if (chars) header.push_back("Char ngrams");
  if (mode) header.push_back("Mode");
  header.insert(header.end(), {"Model", "Vocab size", "Vector size"});
  if (topk) header.push_back("Top K");
  if (smote_col) header.push_back("SMOTE");
  header.push_back("F1");

  std::vector<std::vector<std::string>> cells;
  for (const auto* r : rows) {
    const auto& c = r->config;
    std::vector<std::string> row{cap_yes_no(c.preprocess.remove_stopwords), cap_yes_no(c.preprocess.lemmatize)};
    if (word) row.push_back(c.classifier.kind == ClassifierKind::cnn ? "-" : format_orders(c.ngrams.word_orders));
    if (chars) row.push_back(c.ngrams.char_orders.empty() ? "Not used" : format_orders(c.ngrams.char_orders));
    if (mode) row.push_back(c.mode ? to_string(*c.mode) : "-");
    row.push_back(c.classifier.name());
    row.push_back(r->ok() ? std::to_string(r->vocab_size) : "-");
    row.push_back(r->ok() ? std::to_string(r->vector_size) : "-");
    if (topk) row.push_back(c.k_best ? std::to_string(*c.k_best) : "-");
    if (smote_col) row.push_back(cap_yes_no(c.smote));
    row.push_back(r->ok() ? format_f1(r->f1_positive) : "failed");
    cells.push_back(std::move(row));
  }
  return render(header, cells, format);
}

std::string emit_results_csv(const std::vector<EvalResult>& results) {
  std::vector<std::string> header{"rank", "status", "f1_positive", "f1_macro", "precision", "recall",
                                  "accuracy", "tp", "fp", "fn", "tn", "vocab_size", "vector_size", "config", "error"};
  std::vector<std::vector<std::string>> rows;
  std::size_t rank = 0;
  for (const auto& r : results) {
    ++rank;
    if (!r.ok()) {
      rows.push_back({std::to_string(rank), "failed", "", "", "", "", "", "", "", "", "", "", "", r.config_text, *r.error});
      continue;
    }
    const auto& c = r.confusion;
    rows.push_back({std::to_string(rank), "ok", fmt_double(r.f1_positive), fmt_double(r.f1_macro),
                    fmt_double(r.precision), fmt_double(r.recall), fmt_double(r.accuracy), std::to_string(c.tp),
                    std::to_string(c.fp), std::to_string(c.fn), std::to_string(c.tn), std::to_string(r.vocab_size),
                    std::to_string(r.vector_size), r.config_text, ""});
  }
  return render(header, rows, TableFormat::csv);
}

std::string emit_run_stats(const std::vector<std::pair<std::string, RunStats>>& columns, TableFormat format) {
  std::vector<std::string> header{""};
  for (const auto& [label, s] : columns) header.push_back(label);
  std::vector<std::vector<std::string>> rows;
  const std::pair<const char*, double RunStats::*> stats[] = {
      {"Average", &RunStats::mean}, {"Maximum", &RunStats::max}, {"Minimum", &RunStats::min}, {"Std. dev.", &RunStats::stdev}};
  for (const auto& [name, field] : stats) {
    std::vector<std::string> row{name};
    for (const auto& [label, s] : columns) row.push_back(format_f1(s.*field));
    rows.push_back(std::move(row));
  }
  return render(header, rows, format);
}

json grid_manifest(const std::vector<EvalResult>& results, const Resources& resources) {
  json files = json::object();
  for (const auto& [name, f] : resources.files) files[name] = {{"path", f.path.string()}, {"sha256", f.sha256}};
  json runs = json::array();
  double total = 0.0;
  for (const auto& r : results) {
    json run = {{"config", r.config_text}, {"seed", r.config.seed}, {"status", r.ok() ? "ok" : "failed"},
                {"wall_time", r.wall_time}};
    if (r.ok()) run["f1_positive"] = r.f1_positive;
    else run["error"] = *r.error;
    runs.push_back(std::move(run));
    total += r.wall_time;
  }
  return {{"resources", files}, {"runs", runs}, {"total_wall_time", total}};
}

// ---- presets ---------------------------------------------------------------

namespace {

ClassifierSpec svm_spec(const char* kernel) {
  ClassifierSpec c;
  c.kernel = KernelSpec::parse(kernel);
  return c;
}

ClassifierSpec adaboost_spec() {
  ClassifierSpec c;
  c.kind = ClassifierKind::adaboost;
  return c;
}

std::vector<ClassifierSpec> svm_family() {
  return {svm_spec("poly-1"), svm_spec("poly-2"), svm_spec("poly-3"), svm_spec("rbf"), svm_spec("sigmoid")};
}

std::vector<ClassifierSpec> classic_family() {
  auto v = svm_family();
  v.push_back(adaboost_spec());
  return v;
}

PipelineConfig base(bool stw, bool lemma, std::uint64_t seed) {
  PipelineConfig c;
  c.preprocess = {stw, lemma};
  c.seed = seed;
  return c;
}

constexpr WeightingMode kModes[] = {WeightingMode::freq, WeightingMode::count, WeightingMode::binary,
                                    WeightingMode::tfidf};

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4"};
  return names;
}

Preset make_preset(std::string_view name, std::uint64_t seed) {
  Preset p;
  p.name = std::string(name);
  const std::vector<std::set<int>> word_sets{{1}, {1, 2}, {1, 2, 3}};
  if (name == "A1") {
    p.table = 1;
    p.description = "bag of words: stopwords x lemmas x word n-grams x modes, classic classifiers";
    p.threshold = 0.80;
    p.target = "0.8318";
    for (bool stw : {true, false})
      for (bool lemma : {true, false})
        for (const auto& w : word_sets)
          for (auto m : kModes)
            for (const auto& cl : classic_family()) {
              auto c = base(stw, lemma, seed);
              c.ngrams = {w, {}};
              c.mode = m;
              c.classifier = cl;
              p.configs.push_back(c);
            }
  } else if (name == "A2") {
    p.table = 2;
    p.description = "word and char n-grams 1-3, chi-square top K in {1000, 5000}";
    p.threshold = 0.82;
    p.target = "0.8282";
    for (bool stw : {true, false})
      for (bool lemma : {true, false})
        for (auto m : kModes)
          for (std::size_t k : {1000, 5000})
            for (const auto& cl : classic_family()) {
              auto c = base(stw, lemma, seed);
              c.ngrams = {{1, 2, 3}, {1, 2, 3}};
              c.mode = m;
              c.k_best = k;
              c.classifier = cl;
              p.configs.push_back(c);
            }
  } else if (name == "A3") {
    p.table = 3;
    p.description = "word2vec document vectors over word n-grams 1,2";
    p.target = "0.7916";
    for (const auto& cl : svm_family()) {
      auto c = base(true, true, seed);
      c.feature_source = FeatureSource::word2vec;
      c.ngrams = {{1, 2}, {}};
      c.mode.reset();
      c.classifier = cl;
      p.configs.push_back(c);
    }
  } else if (name == "A4" || name == "B4") {
    const bool b = name == "B4";
    p.table = b ? 8 : 4;
    p.description = b ? "4-channel CNN with and without SMOTE, 5 seeds" : "4-channel CNN, 5 seeds";
    p.averaged = true;
    p.target = b ? "0.3452" : "0.797";
    for (bool sm : b ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
      auto c = base(true, true, seed);
      c.mode.reset();
      c.classifier.kind = ClassifierKind::cnn;
      c.smote = sm;
      p.configs.push_back(c);
    }
  } else if (name == "B1") {
    p.table = 5;
    p.description = "word2vec document vectors with SMOTE";
    p.threshold = 0.47;
    p.target = "0.4931";
    for (bool stw : {true, false})
      for (bool lemma : {true, false})
        for (const auto& w : word_sets)
          for (const auto& cl : svm_family()) {
            auto c = base(stw, lemma, seed);
            c.feature_source = FeatureSource::word2vec;
            c.ngrams = {w, {}};
            c.mode.reset();
            c.smote = true;
            c.classifier = cl;
            p.configs.push_back(c);
          }
  } else if (name == "B2") {
    p.table = 6;
    p.description = "bag of words freq with SMOTE; word 1,2 rows use min_count 4";
    p.target = "0.4749";
    for (const auto& w : {std::set<int>{1}, std::set<int>{1, 2}})
      for (const auto& cl : svm_family()) {
        auto c = base(true, true, seed);
        c.ngrams = {w, {}};
        c.mode = WeightingMode::freq;
        c.min_count = w.size() > 1 ? 4 : 1;
        c.smote = true;
        c.classifier = cl;
        p.configs.push_back(c);
      }
  } else if (name == "B3") {
    p.table = 7;
    p.description = "bag of words with SMOTE and chi-square top 2000";
    p.target = "0.4349";
    for (const auto& chars : {std::set<int>{}, std::set<int>{2}})
      for (auto m : {WeightingMode::freq, WeightingMode::tfidf})
        for (const auto& cl : {svm_spec("poly-1"), svm_spec("rbf"), svm_spec("sigmoid"), adaboost_spec()}) {
          auto c = base(true, true, seed);
          c.ngrams = {{1, 2}, chars};
          c.mode = m;
          c.min_count = 4;
          c.k_best = 2000;
          c.smote = true;
          c.classifier = cl;
          p.configs.push_back(c);
        }
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ArgumentError("unknown preset '" + std::string(name) + "' (known presets: " + list + ")");
  }
  return p;
}

}  // namespace hatepipe
