#include "hatepipe/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hatepipe/corpus.hpp"
#include "hatepipe/error.hpp"
#include "hatepipe/experiments.hpp"
#include "hatepipe/io.hpp"
#include "hatepipe/synthdata.hpp"

namespace hatepipe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string stopwords, lemmas, embeddings;
};

void add_seed(CLI::App* cmd, CommonOptions& o) {
  o.seed_opt = cmd->add_option("--seed", o.seed, "Random seed");
}

void add_resources(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--stopwords", o.stopwords, "Stopword list (one word per line)");
  cmd->add_option("--lemmas", o.lemmas, "Lemma lexicon (surface<TAB>lemma)");
  cmd->add_option("--embeddings", o.embeddings, "Word vectors in word2vec text format");
}

// Flags win over $HATEPIPE_RESOURCES/<default name>.
ResourcePaths resource_paths(const CommonOptions& o) {
  ResourcePaths p;
  if (const char* dir = std::getenv("HATEPIPE_RESOURCES"); dir && *dir) p = ResourcePaths::in_directory(dir);
  if (!o.stopwords.empty()) p.stopwords = o.stopwords;
  if (!o.lemmas.empty()) p.lemmas = o.lemmas;
  if (!o.embeddings.empty()) p.embeddings = o.embeddings;
  return p;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

json file_record(const fs::path& p) { return {{"path", p.string()}, {"sha256", io::sha256_file(p)}}; }

void write_documents(const std::vector<Document>& docs, const fs::path& path) {
  std::string out = "id,text,label\n";
  for (const auto& d : docs) {
    std::string text;
    for (const auto& t : d.tokens) {
      if (!text.empty()) text += ' ';
      text += t;
    }
    out += format_delimited_field(d.id, ',') + ',' + format_delimited_field(text, ',') + ',' +
           (d.label ? std::to_string(*d.label) : std::string()) + '\n';
  }
  io::write_file(path, out);
}

std::shared_ptr<const EmbeddingTable> pipeline_embeddings(const TrainedPipeline& p, const CommonOptions& o,
                                                          std::ostream& err) {
  if (p.config.feature_source != FeatureSource::word2vec) return nullptr;
  fs::path path;
  if (!o.embeddings.empty()) path = o.embeddings;
  else if (p.embeddings) path = p.embeddings->path;
  if (path.empty()) throw ResourceError("word2vec model needs --embeddings");
  if (!fs::exists(path)) throw ResourceError("embeddings file not found: " + path.string());
  if (p.embeddings && io::sha256_file(path) != p.embeddings->sha256) {
    err << "warning: " << path.string() << " differs from the embeddings used at training time\n";
  }
  return std::make_shared<const EmbeddingTable>(load_embeddings(path));
}

std::string metrics_line(const Metrics& m) {
  return "f1 " + format_f1(m.f1_positive) + " | macro f1 " + format_f1(m.f1_macro) + " | precision " +
         format_f1(m.precision) + " | recall " + format_f1(m.recall) + " | accuracy " + format_f1(m.accuracy);
}

// ---- preprocess ----

struct PreprocessArgs {
  CommonOptions common;
  std::string input, output;
  bool remove_stopwords = false, lemmatize = false;
};

void cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
  PipelineConfig probe;
  probe.preprocess = {a.remove_stopwords, a.lemmatize};
  const auto res = Resources::load(resource_paths(a.common), ResourceNeeds::of(probe));
  const auto docs = load_documents(a.input, DatasetSchema::for_path(a.input));
  const auto pp = preprocess_documents(docs, probe.preprocess, res.stopwords.value_or(StopwordList{}),
                                       res.lexicon.value_or(LemmaLexicon{}));
  write_documents(pp, a.output);
  out << "preprocessed " << pp.size() << " documents -> " << a.output << "\n";
}

// ---- train ----

struct TrainArgs {
  CommonOptions common;
  std::string train, config, model_out;
  std::vector<std::string> set;
};

PipelineConfig load_config(const TrainArgs& a) {
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) kv = config_pairs(io::read_file(a.config));
  for (const auto& item : a.set) {
    for (auto& [k, v] : config_pairs(item)) kv[k] = v;
  }
  if (a.common.seed_opt->count() > 0) kv["seed"] = std::to_string(a.common.seed);
  return config_from_pairs(kv);
}

void cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto cfg = load_config(a);
  const auto res = Resources::load(resource_paths(a.common), ResourceNeeds::of(cfg));
  const auto ds = load_dataset(a.train, DatasetSchema::for_path(a.train));
  const auto p = fit_pipeline(cfg, ds, res);
  save_pipeline(p, a.model_out);
  const auto scores = p.scores(ds.documents(), res.embeddings.get());
  std::vector<int> pred;
  for (double s : scores) pred.push_back(p.label_for(s));
  const auto m = metrics(confusion(ds.labels(), pred));
  out << "trained " << cfg.classifier.name() << " on " << ds.size() << " documents | vocab size " << p.vocab_size
      << " | vector size " << p.vector_size << "\n";
  out << "training " << metrics_line(m) << "\n";
  out << "model -> " << a.model_out << "\n";
}

// ---- predict / evaluate ----

struct PredictArgs {
  CommonOptions common;
  std::string model, input, output;
};

void cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const auto p = load_pipeline(a.model);
  const auto docs = load_documents(a.input, DatasetSchema::for_path(a.input));
  const auto table = pipeline_embeddings(p, a.common, err);
  std::string csv = "id,label,score\n";
  if (!docs.empty()) {
    const auto scores = p.scores(docs, table.get());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      csv += format_delimited_field(docs[i].id, ',') + ',' + std::to_string(p.label_for(scores[i])) + ',' +
             fmt(scores[i]) + '\n';
    }
  }
  io::write_file(a.output, csv);
  out << "predicted " << docs.size() << " documents -> " << a.output << "\n";
}

struct EvaluateArgs {
  CommonOptions common;
  std::string model, test, output;
};

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const auto p = load_pipeline(a.model);
  const auto ds = load_dataset(a.test, DatasetSchema::for_path(a.test));
  const auto table = pipeline_embeddings(p, a.common, err);
  const auto scores = p.scores(ds.documents(), table.get());
  std::vector<int> pred;
  for (double s : scores) pred.push_back(p.label_for(s));
  const auto r = make_result(p.config, confusion(ds.labels(), pred), p.vocab_size, p.vector_size);
  out << p.config.classifier.name() << " on " << ds.size() << " documents: " << metrics_line(metrics(r.confusion))
      << "\n";
  if (!a.output.empty()) {
    const auto& c = r.confusion;
    json j = {{"config", r.config_text}, {"f1_positive", r.f1_positive}, {"f1_macro", r.f1_macro},
              {"precision", r.precision}, {"recall", r.recall},        {"accuracy", r.accuracy},
              {"tp", c.tp},               {"fp", c.fp},                {"fn", c.fn},
              {"tn", c.tn},               {"vocab_size", r.vocab_size}, {"vector_size", r.vector_size}};
    io::write_file(a.output, j.dump(2) + "\n");
  }
}

// ---- sweep / reproduce ----

struct SweepArgs {
  CommonOptions common;
  std::string preset, grid, train, test, out;
  std::size_t jobs = 1;
  std::optional<double> threshold;
  std::size_t runs = 0;
};

struct SweepOutcome {
  std::vector<EvalResult> results;
  std::optional<RunStats> best_stats;
};

fs::path sibling(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

SweepOutcome run_sweep(const SweepArgs& a, std::ostream& out) {
  std::optional<Preset> preset;
  std::vector<PipelineConfig> configs;
  std::vector<EvalResult> failed;
  const bool seed_given = a.common.seed_opt && a.common.seed_opt->count() > 0;
  if (!a.preset.empty()) {
    preset = make_preset(a.preset, a.common.seed);
    configs = preset->configs;
  } else {
    for (auto& row : parse_grid(io::read_file(a.grid))) {
      if (row.config) {
        if (seed_given) row.config->seed = a.common.seed;
        configs.push_back(*row.config);
      } else {
        EvalResult r;
        r.config_text = row.source;
        r.error = row.error;
        failed.push_back(std::move(r));
      }
    }
  }
  const auto res = Resources::load(resource_paths(a.common), ResourceNeeds::of(configs));
  const auto train = load_dataset(a.train, DatasetSchema::for_path(a.train));
  const auto test = load_dataset(a.test, DatasetSchema::for_path(a.test));
  const auto threshold = a.threshold ? a.threshold : (preset ? preset->threshold : std::nullopt);

  SweepOutcome outcome;
  std::string table_md, table_csv;
  if (preset && preset->averaged) {
    const std::size_t runs = a.runs ? a.runs : preset->runs;
    std::vector<std::pair<std::string, RunStats>> columns;
    for (const auto& cfg : configs) {
      auto stats = average_runs(cfg, runs, [&](const PipelineConfig& c) {
        auto r = run_config(c, train, test, res);
        outcome.results.push_back(r);
        return r.f1_positive;
      });
      const std::string label = configs.size() > 1 ? (cfg.smote ? "With SMOTE F1" : "Without SMOTE F1") : "F1";
      if (!outcome.best_stats || stats.mean > outcome.best_stats->mean) outcome.best_stats = stats;
      columns.emplace_back(label, std::move(stats));
    }
    table_md = emit_run_stats(columns, TableFormat::markdown);
    table_csv = emit_run_stats(columns, TableFormat::csv);
  } else {
    outcome.results = run_grid(configs, train, test, res, GridOptions{a.jobs});
    outcome.results.insert(outcome.results.end(), failed.begin(), failed.end());
    sort_results(outcome.results);
    table_md = emit_table(outcome.results, TableFormat::markdown, threshold);
    table_csv = emit_table(outcome.results, TableFormat::csv, threshold);
  }

  const fs::path out_path = a.out;
  io::write_file(out_path, emit_results_csv(outcome.results));
  io::write_file(sibling(out_path, ".md"), table_md);
  io::write_file(sibling(out_path, ".table.csv"), table_csv);
  auto manifest = grid_manifest(outcome.results, res);
  manifest["command"] = "sweep";
  manifest["source"] = preset ? "preset " + preset->name : "grid " + a.grid;
  manifest["seed"] = a.common.seed;
  manifest["jobs"] = a.jobs;
  manifest["train"] = file_record(a.train);
  manifest["test"] = file_record(a.test);
  if (threshold) manifest["threshold"] = *threshold;
  io::write_file(sibling(out_path, ".manifest.json"), manifest.dump(2) + "\n");

  std::size_t n_failed = 0;
  for (const auto& r : outcome.results) n_failed += r.ok() ? 0 : 1;
  out << outcome.results.size() << " runs, " << n_failed << " failed\n";
  if (outcome.best_stats) {
    out << "best average f1 " << format_f1(outcome.best_stats->mean) << "\n";
  } else if (!outcome.results.empty() && outcome.results.front().ok()) {
    out << "best f1 " << format_f1(outcome.results.front().f1_positive) << " | " << outcome.results.front().config_text
        << "\n";
  }
  out << "results -> " << out_path.string() << "\n";
  return outcome;
}

struct ReproduceArgs {
  SweepArgs sweep;
  int table = 0;
  bool run = false;
};

void cmd_reproduce(ReproduceArgs& a, std::ostream& out) {
  bool any = false;
  for (const auto& name : preset_names()) {
    const auto p = make_preset(name, a.sweep.common.seed);
    if (a.table && p.table != a.table) continue;
    any = true;
    const auto needs = ResourceNeeds::of(p.configs);
    std::string resources = "train/test files of Task ";
    resources += name[0];
    if (needs.stopwords) resources += ", stopword list";
    if (needs.lemmas) resources += ", lemma lexicon";
    if (needs.embeddings) resources += ", word embeddings";
    out << "Table " << p.table << " | preset " << p.name << " | " << p.configs.size() << " configs"
        << (p.averaged ? " x " + std::to_string(p.runs) + " runs" : std::string()) << "\n";
    out << "  " << p.description << "\n";
    out << "  needs: " << resources << "\n";
    out << "  reported F1 of the best row: " << p.target << "\n";
    if (!a.run) {
      out << "  not run (pass --run with --train and --test to compute it)\n";
      continue;
    }
    if (a.sweep.train.empty() || a.sweep.test.empty()) throw ArgumentError("--run needs --train and --test");
    auto s = a.sweep;
    s.preset = name;
    if (s.out.empty()) s.out = "reproduce";
    s.out = (fs::path(s.out) / ("table" + std::to_string(p.table) + ".csv")).string();
    const auto outcome = run_sweep(s, out);
    if (outcome.best_stats) {
      out << "  achieved " << format_f1(outcome.best_stats->mean) << " vs reported " << p.target << "\n";
    } else if (!outcome.results.empty() && outcome.results.front().ok()) {
      out << "  achieved " << format_f1(outcome.results.front().f1_positive) << " vs reported " << p.target << "\n";
    }
  }
  if (!any) throw ArgumentError("no reference table " + std::to_string(a.table) + " (tables 1-8)");
}

// ---- synth ----

struct SynthArgs {
  CommonOptions common;
  std::string shape = "A", split = "train", out, embeddings_out;
  double p_marker = 0.95;
  bool urdu = false;
  std::size_t dim = 32;
  double signal = 1.0;
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
  if (a.shape != "A" && a.shape != "B") throw ArgumentError("--shape must be A or B");
  if (a.split != "train" && a.split != "test") throw ArgumentError("--split must be train or test");
  const bool test = a.split == "test";
  auto spec = a.shape == "A" ? task_a_shape(test, a.common.seed) : task_b_shape(test, a.common.seed);
  spec.p_marker = a.p_marker;
  spec.urdu = a.urdu;
  const auto ds = generate(spec);
  save_dataset(ds, a.out);
  out << "wrote " << ds.size() << " documents (" << ds.counts()[0] << " negative, " << ds.counts()[1]
      << " positive) -> " << a.out << "\n";
  if (!a.embeddings_out.empty()) {
    io::write_file(a.embeddings_out, synth_embeddings(spec, a.dim, a.signal, a.common.seed).to_text());
    out << "wrote embeddings -> " << a.embeddings_out << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Abusive and threatening tweet classification pipeline", "hatepipe"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "Normalize, tokenize and filter a corpus");
  c_pre->add_option("--input", pre.input, "Input CSV/TSV")->required();
  c_pre->add_option("--output", pre.output, "Output CSV of space-joined tokens")->required();
  c_pre->add_flag("--remove-stopwords", pre.remove_stopwords, "Drop stopwords");
  c_pre->add_flag("--lemmatize", pre.lemmatize, "Map tokens to lemmas");
  add_resources(c_pre, pre.common);
  add_seed(c_pre, pre.common);

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Fit a pipeline and save it");
  c_train->add_option("--train", tr.train, "Training CSV/TSV")->required();
  c_train->add_option("--config", tr.config, "Config file (key=value or JSON)");
  c_train->add_option("--set", tr.set, "Config item key=value (repeatable, overrides --config)");
  c_train->add_option("--model-out", tr.model_out, "Model file to write")->required();
  add_resources(c_train, tr.common);
  add_seed(c_train, tr.common);

  PredictArgs pr;
  auto* c_predict = app.add_subcommand("predict", "Score documents with a saved pipeline");
  c_predict->add_option("--model", pr.model, "Model file")->required();
  c_predict->add_option("--input", pr.input, "Input CSV/TSV (labels optional)")->required();
  c_predict->add_option("--output", pr.output, "Output CSV id,label,score")->required();
  c_predict->add_option("--embeddings", pr.common.embeddings, "Word vectors (word2vec models)");
  add_seed(c_predict, pr.common);

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "Score a labeled test set");
  c_eval->add_option("--model", ev.model, "Model file")->required();
  c_eval->add_option("--test", ev.test, "Labeled CSV/TSV")->required();
  c_eval->add_option("--output", ev.output, "Metrics JSON to write");
  c_eval->add_option("--embeddings", ev.common.embeddings, "Word vectors (word2vec models)");
  add_seed(c_eval, ev.common);

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "Run a preset or a config grid");
  auto* o_preset = c_sweep->add_option("--preset", sw.preset, "A1 A2 A3 A4 B1 B2 B3 B4");
  auto* o_grid = c_sweep->add_option("--grid", sw.grid, "Grid file (one config per line, or a JSON array)");
  o_preset->excludes(o_grid);
  c_sweep->add_option("--train", sw.train, "Training CSV/TSV")->required();
  c_sweep->add_option("--test", sw.test, "Test CSV/TSV")->required();
  c_sweep->add_option("--out", sw.out, "Results CSV")->required();
  c_sweep->add_option("--jobs", sw.jobs, "Parallel configs")->check(CLI::PositiveNumber);
  c_sweep->add_option("--threshold", sw.threshold, "Minimum F1 for the emitted table");
  c_sweep->add_option("--runs", sw.runs, "Runs per averaged config");
  add_resources(c_sweep, sw.common);
  add_seed(c_sweep, sw.common);

  ReproduceArgs rp;
  auto* c_repro = app.add_subcommand("reproduce", "List reference tables, their presets and resources");
  c_repro->add_option("--table", rp.table, "Only this table (1-8)");
  c_repro->add_flag("--run", rp.run, "Run the presets on the supplied files");
  c_repro->add_option("--train", rp.sweep.train, "Training CSV/TSV");
  c_repro->add_option("--test", rp.sweep.test, "Test CSV/TSV");
  c_repro->add_option("--out", rp.sweep.out, "Output directory");
  c_repro->add_option("--jobs", rp.sweep.jobs, "Parallel configs")->check(CLI::PositiveNumber);
  add_resources(c_repro, rp.sweep.common);
  add_seed(c_repro, rp.sweep.common);

  SynthArgs sy;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic marker-token corpus");
  c_synth->add_option("--shape", sy.shape, "A (abusive) or B (threatening) class counts");
  c_synth->add_option("--split", sy.split, "train or test");
  c_synth->add_option("--out", sy.out, "Output CSV")->required();
  c_synth->add_option("--p-marker", sy.p_marker, "Probability that a document carries a class marker");
  c_synth->add_flag("--urdu", sy.urdu, "Arabic-script tokens");
  c_synth->add_option("--embeddings-out", sy.embeddings_out, "Also write matching word vectors");
  c_synth->add_option("--dim", sy.dim, "Word vector dimension");
  c_synth->add_option("--signal", sy.signal, "Marker shift along the first vector axis");
  add_seed(c_synth, sy.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (c_pre->parsed()) cmd_preprocess(pre, out);
    else if (c_train->parsed()) cmd_train(tr, out);
    else if (c_predict->parsed()) cmd_predict(pr, out, err);
    else if (c_eval->parsed()) cmd_evaluate(ev, out, err);
    else if (c_sweep->parsed()) {
      if (sw.preset.empty() && sw.grid.empty()) throw ArgumentError("sweep needs --preset or --grid");
      run_sweep(sw, out);
    } else if (c_repro->parsed()) cmd_reproduce(rp, out);
    else if (c_synth->parsed()) cmd_synth(sy, out);
    return 0;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hatepipe
