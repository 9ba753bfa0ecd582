#include "hatepipe/model_io.hpp"

#include "hatepipe/error.hpp"
#include "hatepipe/io.hpp"

namespace hatepipe {

using nlohmann::json;

std::string model_kind(const ClassifierModel& model) {
  switch (model.index()) {
    case 0: return "svm";
    case 1: return "adaboost";
    default: return "cnn";
  }
}

json to_json(const FeatureMatrix& m) {
  json indices = json::array(), values = json::array(), row_ptr = json::array({0});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      indices.push_back(r.indices[k]);
      values.push_back(r.values[k]);
    }
    row_ptr.push_back(indices.size());
  }
  return {{"cols", m.cols()}, {"row_ptr", row_ptr}, {"indices", indices}, {"values", values}};
}

FeatureMatrix feature_matrix_from_json(const json& j) {
  FeatureMatrix m(j.at("cols").get<std::size_t>());
  const auto row_ptr = j.at("row_ptr").get<std::vector<std::size_t>>();
  const auto indices = j.at("indices").get<std::vector<std::uint32_t>>();
  const auto values = j.at("values").get<std::vector<double>>();
  if (row_ptr.empty() || row_ptr.front() != 0 || row_ptr.back() != indices.size() || indices.size() != values.size()) {
    throw ParseError("inconsistent sparse matrix arrays");
  }
  for (std::size_t i = 0; i + 1 < row_ptr.size(); ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) throw ParseError("sparse matrix row pointers decrease");
    const auto b = static_cast<std::ptrdiff_t>(row_ptr[i]), e = static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    m.add_row(std::span<const std::uint32_t>(indices.data() + b, indices.data() + e),
              std::span<const double>(values.data() + b, values.data() + e));
  }
  return m;
}

json to_json(const KernelSpec& k) {
  const char* kind = k.kind == KernelKind::rbf ? "rbf" : k.kind == KernelKind::sigmoid ? "sigmoid" : "poly";
  json j = {{"kind", kind}, {"degree", k.degree}, {"coef0", k.coef0}};
  j["gamma"] = k.gamma ? json(*k.gamma) : json("scale");
  return j;
}

KernelSpec kernel_spec_from_json(const json& j) {
  KernelSpec k;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "rbf") k.kind = KernelKind::rbf;
  else if (kind == "sigmoid") k.kind = KernelKind::sigmoid;
  else if (kind == "poly") k.kind = KernelKind::poly;
  else throw ParseError("unknown kernel kind '" + kind + "'");
  k.degree = j.at("degree").get<int>();
  k.coef0 = j.at("coef0").get<double>();
  const auto& g = j.at("gamma");
  if (g.is_string()) {
    if (g.get<std::string>() != "scale") throw ParseError("gamma must be a number or \"scale\"");
  } else {
    k.gamma = g.get<double>();
  }
  k.validate();
  return k;
}

json to_json(const CnnConfig& c) {
  return {{"seq_len", c.seq_len},         {"embed_dim", c.embed_dim},   {"channels", c.channels},
          {"filters", c.filters},         {"dense_units", c.dense_units}, {"epochs", c.epochs},
          {"batch_size", c.batch_size},   {"learning_rate", c.learning_rate}, {"beta1", c.beta1},
          {"beta2", c.beta2},             {"epsilon", c.epsilon},       {"seed", c.seed}};
}

CnnConfig cnn_config_from_json(const json& j) {
  CnnConfig c;
  auto opt = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  opt("seq_len", c.seq_len);
  opt("embed_dim", c.embed_dim);
  opt("channels", c.channels);
  opt("filters", c.filters);
  opt("dense_units", c.dense_units);
  opt("epochs", c.epochs);
  opt("batch_size", c.batch_size);
  opt("learning_rate", c.learning_rate);
  opt("beta1", c.beta1);
  opt("beta2", c.beta2);
  opt("epsilon", c.epsilon);
  opt("seed", c.seed);
  return c;
}

namespace {

json svm_to_json(const SvmModel& m) {
  return {{"kernel", to_json(m.kernel)},
          {"C", m.C},
          {"n_features", m.n_features},
          {"support_vectors", to_json(m.support_vectors)},
          {"support_indices", m.support_indices},
          {"dual_coefs", m.dual_coefs},
          {"bias", m.bias},
          {"converged", m.converged},
          {"iterations", m.iterations}};
}

SvmModel svm_from_json(const json& j) {
  SvmModel m;
  m.kernel = kernel_spec_from_json(j.at("kernel"));
  if (!m.kernel.gamma) throw ParseError("stored SVM kernel has an unresolved gamma");
  m.C = j.at("C").get<double>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.support_vectors = feature_matrix_from_json(j.at("support_vectors"));
  m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
  m.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.converged = j.at("converged").get<bool>();
  m.iterations = j.at("iterations").get<std::size_t>();
  if (m.dual_coefs.size() != m.support_vectors.rows() || m.support_vectors.cols() != m.n_features) {
    throw ParseError("SVM model arrays are inconsistent");
  }
  return m;
}

json adaboost_to_json(const AdaBoostModel& m) {
  json stumps = json::array();
  for (const auto& s : m.stumps) {
    stumps.push_back({{"feature", s.feature}, {"threshold", s.threshold}, {"polarity", s.polarity}});
  }
  return {{"n_features", m.n_features}, {"stumps", stumps}, {"stage_weights", m.stage_weights}};
}

AdaBoostModel adaboost_from_json(const json& j) {
  AdaBoostModel m;
  m.n_features = j.at("n_features").get<std::size_t>();
  for (const auto& s : j.at("stumps")) {
    Stump st{s.at("feature").get<std::size_t>(), s.at("threshold").get<double>(), s.at("polarity").get<int>()};
    if (st.polarity != 1 && st.polarity != -1) throw ParseError("stump polarity must be +1 or -1");
    m.stumps.push_back(st);
  }
  m.stage_weights = j.at("stage_weights").get<std::vector<double>>();
  if (m.stage_weights.size() != m.stumps.size()) throw ParseError("AdaBoost stumps/weights length mismatch");
  return m;
}

json cnn_to_json(const CnnModel& m) {
  return {{"config", to_json(m.config)}, {"vocab_rows", m.vocab_rows}, {"params", m.params}};
}

CnnModel cnn_from_json(const json& j) {
  CnnModel m;
  m.config = cnn_config_from_json(j.at("config"));
  m.config.validate();
  m.vocab_rows = j.at("vocab_rows").get<std::size_t>();
  m.params = j.at("params").get<std::vector<double>>();
  if (m.params.size() != m.layout().total) throw ParseError("CNN parameter count does not match its configuration");
  return m;
}

}  // namespace

json to_json(const ClassifierModel& model) {
  json body;
  switch (model.index()) {
    case 0: body = svm_to_json(std::get<SvmModel>(model)); break;
    case 1: body = adaboost_to_json(std::get<AdaBoostModel>(model)); break;
    default: body = cnn_to_json(std::get<CnnModel>(model)); break;
  }
  body["model_kind"] = model_kind(model);
  return body;
}

ClassifierModel classifier_from_json(const json& j) {
  try {
    const auto kind = j.at("model_kind").get<std::string>();
    if (kind == "svm") return svm_from_json(j);
    if (kind == "adaboost") return adaboost_from_json(j);
    if (kind == "cnn") return cnn_from_json(j);
    throw ParseError("unknown model_kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  }
}

json make_envelope(const std::string& kind, json body) {
  body["format_version"] = kModelFormatVersion;
  body["model_kind"] = kind;
  return body;
}

json open_envelope(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(source + ": not a valid model file (" + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_number_integer()) {
    throw ParseError(source + ": missing format_version");
  }
  const int version = j["format_version"].get<int>();
  if (version != kModelFormatVersion) {
    throw VersionError(source + ": model format version " + std::to_string(version) +
                       " is not supported (this build reads version " + std::to_string(kModelFormatVersion) + ")");
  }
  return j;
}

std::string dump_json(const json& j) { return j.dump() + "\n"; }

void save_model(const ClassifierModel& model, const std::filesystem::path& path) {
  io::write_file(path, dump_json(make_envelope(model_kind(model), to_json(model))));
}

ClassifierModel load_model(const std::filesystem::path& path) {
  const auto j = open_envelope(io::read_file(path), path.string());
  return classifier_from_json(j);
}

}  // namespace hatepipe
