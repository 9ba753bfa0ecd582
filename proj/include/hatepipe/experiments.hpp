#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hatepipe/adaboost.hpp"
#include "hatepipe/cnn.hpp"
#include "hatepipe/corpus.hpp"
#include "hatepipe/embeddings.hpp"
#include "hatepipe/features.hpp"
#include "hatepipe/model_io.hpp"
#include "hatepipe/preprocess.hpp"
#include "hatepipe/svm.hpp"

namespace hatepipe {

// ---- metrics ---------------------------------------------------------------

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Class 1 is positive. Throws ArgumentError on empty or mismatched input.
Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1_positive = 0.0;
  double f1_macro = 0.0;
  double accuracy = 0.0;
};

Metrics metrics(const Confusion& c);

// ---- configuration ---------------------------------------------------------

enum class FeatureSource { bow, word2vec };
enum class ClassifierKind { svm, adaboost, cnn };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::svm;
  KernelSpec kernel;
  double C = 1.0;
  AdaBoostParams adaboost;
  CnnConfig cnn;

  // SVM-POLY-1, SVM-RBF, AdaBoost, CNN ...
  std::string name() const;
  friend bool operator==(const ClassifierSpec& a, const ClassifierSpec& b);
};

struct PipelineConfig {
  PreprocessConfig preprocess;
  FeatureSource feature_source = FeatureSource::bow;
  NgramSpec ngrams{{1}, {}};
  std::optional<WeightingMode> mode = WeightingMode::freq;
  std::size_t min_count = 1;
  std::optional<std::size_t> k_best;
  bool smote = false;
  std::size_t smote_k = 5;
  ClassifierSpec classifier;
  std::uint64_t seed = 0;

  // Throws ArgumentError.
  void validate() const;

  // One line of space-separated key=value pairs in a fixed key order.
  std::string serialize() const;
  // Accepts the key=value form (separated by whitespace or ';') or a JSON object.
  static PipelineConfig parse(std::string_view text);

  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Raw key=value pairs of either config form, before validation; later
// sources can override earlier ones and the merged map is then validated.
std::map<std::string, std::string> config_pairs(std::string_view text);
PipelineConfig config_from_pairs(const std::map<std::string, std::string>& pairs);

// Grid files: a JSON array of configs, or one key=value config per line
// (blank lines and `#` comments ignored). Rows that fail to parse are kept
// with their error so the grid can report them.
struct GridRow {
  std::optional<PipelineConfig> config;
  std::string source;
  std::string error;
};
std::vector<GridRow> parse_grid(std::string_view text);

// ---- resources -------------------------------------------------------------

struct FileRecord {
  std::filesystem::path path;
  std::string sha256;
};

struct ResourcePaths {
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> lemmas;
  std::optional<std::filesystem::path> embeddings;

  // stopwords.txt, lemmas.tsv and embeddings.txt inside `dir`.
  static ResourcePaths in_directory(const std::filesystem::path& dir);
};

struct ResourceNeeds {
  bool stopwords = false;
  bool lemmas = false;
  bool embeddings = false;

  static ResourceNeeds of(const PipelineConfig& cfg);
  static ResourceNeeds of(std::span<const PipelineConfig> cfgs);
};

struct Resources {
  std::optional<StopwordList> stopwords;
  std::optional<LemmaLexicon> lexicon;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::map<std::string, FileRecord> files;  // "stopwords" / "lemmas" / "embeddings"

  // Loads what `needs` asks for. Throws ResourceError naming the missing file.
  static Resources load(const ResourcePaths& paths, const ResourceNeeds& needs);
  // Throws ResourceError when `cfg` needs something that is not loaded.
  void require(const PipelineConfig& cfg) const;
};

// ---- pipelines -------------------------------------------------------------

// A fitted preprocess -> features -> classifier chain.
struct TrainedPipeline {
  PipelineConfig config;
  StopwordList stopwords;
  LemmaLexicon lexicon;
  Vocabulary vocabulary;                      // bow and cnn
  std::vector<std::size_t> selected_columns;  // k-best, ascending
  std::size_t vocab_size = 0;
  std::size_t vector_size = 0;
  std::size_t feature_width = 0;              // columns the classifier sees
  std::optional<FileRecord> embeddings;       // word2vec only
  ClassifierModel model;

  std::vector<Document> preprocess(const std::vector<Document>& docs) const;
  // Decision values: SVM margin, AdaBoost weighted vote, CNN probability.
  std::vector<double> scores_preprocessed(const std::vector<Document>& docs, const EmbeddingTable* table) const;
  std::vector<double> scores(const std::vector<Document>& docs, const EmbeddingTable* table) const;
  int label_for(double score) const;
};

TrainedPipeline fit_pipeline(const PipelineConfig& cfg, const LabeledDataset& train, const Resources& resources);

nlohmann::json to_json(const TrainedPipeline& p);
TrainedPipeline pipeline_from_json(const nlohmann::json& j);
void save_pipeline(const TrainedPipeline& p, const std::filesystem::path& path);
TrainedPipeline load_pipeline(const std::filesystem::path& path);

// ---- evaluation ------------------------------------------------------------

struct EvalResult {
  PipelineConfig config;
  std::string config_text;  // serialization, or the raw row for unparsable configs
  Confusion confusion;
  double f1_positive = 0.0;
  double f1_macro = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  std::size_t vocab_size = 0;
  std::size_t vector_size = 0;
  double wall_time = 0.0;
  std::optional<std::string> error;  // set for failed rows

  bool ok() const { return !error.has_value(); }
};

EvalResult make_result(const PipelineConfig& cfg, const Confusion& c, std::size_t vocab_size, std::size_t vector_size);

// Fits on `train` only and scores `test`. Errors carry the config text.
EvalResult run_config(const PipelineConfig& cfg, const LabeledDataset& train, const LabeledDataset& test,
                      const Resources& resources);

struct GridOptions {
  std::size_t jobs = 1;
};

// Failed configs become failed rows. Output is sorted by sort_results.
std::vector<EvalResult> run_grid(const std::vector<PipelineConfig>& configs, const LabeledDataset& train,
                                 const LabeledDataset& test, const Resources& resources,
                                 const GridOptions& options = {});

// f1_positive descending, ties by config text; failed rows last.
void sort_results(std::vector<EvalResult>& results);

struct RunStats {
  std::vector<double> f1s;
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  double stdev = 0.0;  // sample (n - 1)
};

using F1Runner = std::function<double(const PipelineConfig&)>;

// Runs cfg with seeds cfg.seed + 0 .. n-1. Throws ArgumentError for n < 2.
RunStats average_runs(const PipelineConfig& cfg, std::size_t n, const F1Runner& runner);
RunStats average_runs(const PipelineConfig& cfg, std::size_t n, const LabeledDataset& train,
                      const LabeledDataset& test, const Resources& resources);

// ---- output ----------------------------------------------------------------

enum class TableFormat { csv, markdown };

// Round half-up to 4 decimals.
std::string format_f1(double f1);

// Ranked results table; columns unused by every emitted row are omitted.
// Rows below `threshold` and failed rows are dropped when a threshold is given.
// An empty result list gives empty text; rows filtered out leave the header.
std::string emit_table(const std::vector<EvalResult>& results, TableFormat format,
                       std::optional<double> threshold = std::nullopt);

// Machine-readable detail of every row, including failures.
std::string emit_results_csv(const std::vector<EvalResult>& results);

// Average / Maximum / Minimum / Std. dev. rows, one column per labeled run set.
std::string emit_run_stats(const std::vector<std::pair<std::string, RunStats>>& columns, TableFormat format);

nlohmann::json grid_manifest(const std::vector<EvalResult>& results, const Resources& resources);

// ---- presets ---------------------------------------------------------------

struct Preset {
  std::string name;
  int table = 0;
  std::string description;
  std::vector<PipelineConfig> configs;
  std::optional<double> threshold;
  bool averaged = false;  // report average_runs statistics per config
  std::size_t runs = 5;
  std::string target;     // reported number for the best row
};

const std::vector<std::string>& preset_names();
// Throws ArgumentError listing the known presets.
Preset make_preset(std::string_view name, std::uint64_t seed = 0);

}  // namespace hatepipe
