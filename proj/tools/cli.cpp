/*
 * Copyright 2026 The aitd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "aitd/bilstm.hpp"
#include "aitd/corpus.hpp"
#include "aitd/error.hpp"
#include "aitd/hash.hpp"
#include "aitd/logreg.hpp"
#include "aitd/metrics.hpp"
#include "aitd/persist.hpp"
#include "aitd/splitter.hpp"
#include "aitd/textproc.hpp"
#include "aitd/tfidf.hpp"
#include "aitd/version.hpp"

namespace aitd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kTfidfFile = "tfidf.aitd";
constexpr const char* kLogregFile = "logreg.aitd";
constexpr const char* kBilstmFile = "bilstm.aitd";
constexpr const char* kTimingFile = "timing.json";
constexpr const char* kTrainMetaFile = "train_meta.json";

struct Common {
  std::uint64_t seed = 42;
  std::size_t threads = 1;
};

struct ColumnFlags {
  CsvColumnMap map;
};

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string stats_out;
  ColumnFlags columns;
};

struct SplitArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string targets;
  std::string manifest;
  std::string preset;
  bool shuffle_ties = false;
  ColumnFlags columns;
};

struct TrainArgs {
  std::string kind;
  std::string train;
  std::string val;
  std::string out_dir;
  bool single_config = false;
  // tfidf-logreg
  std::size_t max_features = 25000;
  double C = 1.0;
  std::string penalty = "l2";
  std::vector<std::size_t> grid_max_features;
  std::vector<double> grid_C;
  std::vector<std::string> grid_penalty;
  std::size_t folds = 5;
  int max_iters = 500;
  double tolerance = 1e-6;
  double step_size = 1.0;
  // bilstm
  std::size_t hidden = 64;
  double dropout = 0.2;
  std::size_t batch_size = 128;
  double lr = 1e-3;
  std::size_t embed_dim = 128;
  std::size_t vocab_size = 30000;
  std::size_t max_len = 600;
  int max_epochs = 15;
  int patience = 3;
};

struct EvalArgs {
  std::string model;
  std::string input;
  std::string out_dir;
  std::string out;
  std::string train_input;
  double threshold = 0.5;
  bool no_timing = false;
};

struct ReportArgs {
  std::vector<std::string> metrics;
  std::string out;
};

// ---------------------------------------------------------------------------
// Helpers.

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

persist::Provenance make_provenance(const Common& common, const std::vector<fs::path>& inputs) {
  persist::Provenance prov;
  prov.seed = common.seed;
  for (const auto& p : inputs) {
    std::string key = p.filename().string();
    for (int n = 2; prov.inputs.contains(key); ++n) key = fmt::format("{}#{}", p.filename().string(), n);
    prov.inputs[key] = sha256_file(p);
  }
  return prov;
}

json provenance_json(const persist::Provenance& prov) {
  return {{"seed", prov.seed}, {"tool_version", prov.tool_version}, {"inputs", prov.inputs}};
}

// Sidecar listing the digests of every file a subcommand wrote.
void write_provenance(const fs::path& path, const persist::Provenance& prov,
                      const std::vector<fs::path>& outputs) {
  json doc = provenance_json(prov);
  json out = json::object();
  for (const auto& p : outputs) out[p.filename().string()] = sha256_file(p);
  doc["outputs"] = out;
  write_text(path, doc.dump(2) + "\n");
}

Corpus load_inputs(const std::vector<std::string>& inputs, const CsvColumnMap& columns,
                   std::size_t* dropped = nullptr, std::size_t* collisions = nullptr) {
  std::vector<Corpus> parts;
  for (const auto& in : inputs) parts.push_back(load_any(in, columns));
  std::vector<std::string> collided;
  Corpus merged = concat(parts, &collided);
  CleanResult cleaned = clean(merged);
  if (dropped) *dropped = cleaned.dropped;
  if (collisions) *collisions = collided.size();
  return std::move(cleaned.corpus);
}

std::vector<fs::path> as_paths(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

std::string model_display_name(std::string_view kind) {
  return kind == "bilstm" ? "BiLSTM" : "Logistic Reg.";
}

std::array<double, 3> parse_targets(const std::string& text) {
  std::array<double, 3> t{};
  std::stringstream ss(text);
  std::string part;
  std::size_t k = 0;
  while (std::getline(ss, part, ',')) {
    if (k == 3) throw InputError("--targets takes exactly three fractions");
    try {
      std::size_t used = 0;
      t[k] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InputError("--targets: '" + part + "' is not a number");
    }
    ++k;
  }
  if (k != 3) throw InputError("--targets takes exactly three fractions");
  validate_targets(t);
  return t;
}

void add_column_flags(CLI::App* cmd, ColumnFlags& f) {
  cmd->add_option("--text-col", f.map.text, "CSV column holding the text")->capture_default_str();
  cmd->add_option("--label-col", f.map.label, "CSV column holding the label")->capture_default_str();
  cmd->add_option("--source-col", f.map.source, "CSV column holding the topic/source")
      ->capture_default_str();
  cmd->add_option("--id-col", f.map.id, "CSV column holding record ids (optional)");
  cmd->add_option("--source-prefix", f.map.source_prefix,
                  "Prefix added to CSV source values, e.g. DAIGT_v2_");
}

// ---------------------------------------------------------------------------
// ingest

int run_ingest(const IngestArgs& a, const Common& common, std::ostream& out) {
  std::vector<Corpus> parts;
  for (const auto& in : a.inputs) parts.push_back(load_any(in, a.columns.map));
  std::vector<std::string> collided;
  const Corpus merged = concat(parts, &collided);
  const CleanResult cleaned = clean(merged);

  CorpusStats s = stats(cleaned.corpus);
  s.dropped = cleaned.dropped;
  s.duplicate_id_collisions = collided.size();

  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  save_jsonl(cleaned.corpus, out_path);

  const auto prov = make_provenance(common, as_paths(a.inputs));
  json doc;
  doc["total"] = s.overall.total;
  doc["human"] = s.overall.human;
  doc["ai"] = s.overall.ai;
  doc["human_ratio"] = s.overall.human_ratio();
  doc["ai_ratio"] = s.overall.ai_ratio();
  doc["dropped"] = s.dropped;
  doc["duplicate_id_collisions"] = s.duplicate_id_collisions;
  json per = json::object();
  for (const auto& [src, c] : s.per_source) {
    per[src] = {{"total", c.total}, {"human", c.human}, {"ai", c.ai}};
  }
  doc["per_source"] = per;
  doc["output_sha256"] = sha256_file(out_path);
  doc["provenance"] = provenance_json(prov);
  const fs::path stats_path = a.stats_out.empty() ? fs::path(a.out + ".stats.json") : fs::path(a.stats_out);
  write_text(stats_path, doc.dump(2) + "\n");

  out << format_stats(s);
  out << fmt::format("wrote {} records to {}\n", cleaned.corpus.size(), out_path.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// split

int run_split(const SplitArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  const int sources = !a.targets.empty() + !a.manifest.empty() + !a.preset.empty();
  if (sources != 1) {
    throw InputError("split needs exactly one of --targets, --manifest or --preset");
  }
  const Corpus corpus = load_inputs(a.inputs, a.columns.map);

  SplitManifest manifest;
  std::vector<fs::path> inputs = as_paths(a.inputs);
  if (!a.targets.empty()) {
    AssignOptions opts;
    opts.shuffle_equal_size = a.shuffle_ties;
    manifest = assign_topics(corpus, parse_targets(a.targets), common.seed, opts);
  } else if (!a.manifest.empty()) {
    manifest = load_manifest(a.manifest);
    inputs.push_back(a.manifest);
  } else {
    if (a.preset != "paper") throw InputError("unknown preset '" + a.preset + "' (known: paper)");
    manifest = paper_split_manifest();
  }

  const SplitResult parts = apply_manifest(corpus, manifest);
  for (const auto& w : parts.warnings) err << "warning: " << w << '\n';
  const LeakageReport leakage = verify_no_leakage(manifest, parts.train, parts.val, parts.test);

  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  std::vector<fs::path> written = {dir / "manifest.json", dir / "train.jsonl", dir / "val.jsonl",
                                   dir / "test.jsonl", dir / "leakage.json"};
  save_manifest(manifest, written[0]);
  save_jsonl(parts.train, written[1]);
  save_jsonl(parts.val, written[2]);
  save_jsonl(parts.test, written[3]);
  write_text(written[4], leakage_report_to_json(leakage));
  write_provenance(dir / "provenance.json", make_provenance(common, inputs), written);

  const double n = corpus.empty() ? 1.0 : static_cast<double>(corpus.size());
  for (Partition p : kPartitions) {
    out << fmt::format("{:<5} {:>8} records ({:.1f}%), {} topics\n", to_string(p),
                       parts[p].size(), 100.0 * static_cast<double>(parts[p].size()) / n,
                       manifest.count(p));
  }
  if (!leakage.pass) {
    for (const auto& v : leakage.violations) err << "leakage: topic '" << v.topic << "'\n";
    out << "leakage check: FAIL\n";
    return kExitLeakage;
  }
  out << "leakage check: PASS\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Tokens> analyze_corpus(const Corpus& corpus) {
  std::vector<Tokens> docs;
  docs.reserve(corpus.size());
  for (const auto& r : corpus.records()) docs.push_back(analyze_for_tfidf(r.text));
  return docs;
}

int train_logreg(const TrainArgs& a, const Common& common, std::ostream& out) {
  const Corpus train = load_inputs({a.train}, {});
  const auto start = Clock::now();
  const std::vector<Tokens> docs = analyze_corpus(train);
  const std::vector<int> labels = train.labels();

  logreg::Grid grid;
  if (a.single_config) {
    grid = {{a.max_features}, {a.C}, {logreg::parse_penalty(a.penalty)}};
  } else {
    grid = logreg::paper_grid();
    if (!a.grid_max_features.empty()) grid.max_features = a.grid_max_features;
    if (!a.grid_C.empty()) grid.C = a.grid_C;
    if (!a.grid_penalty.empty()) {
      grid.penalties.clear();
      for (const auto& p : a.grid_penalty) grid.penalties.push_back(logreg::parse_penalty(p));
    }
  }
  logreg::CvOptions opts;
  opts.folds = a.folds;
  opts.seed = common.seed;
  opts.threads = common.threads;
  opts.base.max_iters = a.max_iters;
  opts.base.tolerance = a.tolerance;
  opts.base.step_size = a.step_size;
  opts.base.seed = common.seed;
  if (docs.size() < opts.folds) {
    throw DegenerateDataError(fmt::format("{} training documents cannot fill {} folds",
                                          docs.size(), opts.folds));
  }
  const logreg::GridSearchResult result = logreg::grid_search_cv(docs, labels, grid, opts);
  const double train_seconds = seconds_since(start);

  const auto X = transform(result.featurizer, docs);
  const double train_acc = logreg::accuracy(labels, logreg::predict(result.model, X));

  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  const auto prov = make_provenance(common, {a.train});
  persist::save(result.featurizer, dir / kTfidfFile, prov);
  persist::save(result.model, dir / kLogregFile, prov);
  write_text(dir / "cv_table.csv", logreg::cv_table_csv(result.table));

  json meta;
  meta["kind"] = "tfidf-logreg";
  meta["selected"] = {{"max_features", result.best.max_features},
                      {"C", result.best.C},
                      {"penalty", logreg::to_string(result.best.penalty)}};
  meta["cv_rows"] = result.table.size();
  meta["train_accuracy"] = train_acc;
  meta["iterations"] = result.model.meta.iterations;
  meta["final_loss"] = result.model.meta.final_loss;
  meta["provenance"] = provenance_json(prov);
  write_text(dir / kTrainMetaFile, meta.dump(2) + "\n");
  write_text(dir / kTimingFile, json{{"train_seconds", train_seconds}}.dump(2) + "\n");
  write_provenance(dir / "provenance.json", prov,
                   {dir / kTfidfFile, dir / kLogregFile, dir / "cv_table.csv", dir / kTrainMetaFile});

  out << fmt::format("selected: max_features={} C={} penalty={} (cv mean accuracy {:.4f}, {} configs)\n",
                     result.best.max_features, result.best.C, logreg::to_string(result.best.penalty),
                     [&] {
                       for (const auto& r : result.table)
                         if (r.point == result.best) return r.mean_accuracy;
                       return 0.0;
                     }(),
                     result.table.size());
  return kExitOk;
}

std::vector<bilstm::Example> encode_corpus(const Corpus& corpus, const Vocab& vocab,
                                           std::size_t max_len) {
  std::vector<bilstm::Example> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus.records()) {
    out.push_back(bilstm::make_example(r.text, to_int(r.label), vocab, max_len));
  }
  return out;
}

int train_bilstm(const TrainArgs& a, const Common& common, std::ostream& out) {
  if (a.val.empty()) throw InputError("bilstm training needs --val");
  const Corpus train = load_inputs({a.train}, {});
  const Corpus val = load_inputs({a.val}, {});
  const auto start = Clock::now();

  std::vector<Tokens> tokens;
  tokens.reserve(train.size());
  for (const auto& r : train.records()) tokens.push_back(tokenize(r.text));
  const Vocab vocab = build_vocab(tokens, a.vocab_size, /*reserve_special=*/true);
  const auto train_set = encode_corpus(train, vocab, a.max_len);
  const auto val_set = encode_corpus(val, vocab, a.max_len);

  bilstm::NetTrainConfig base;
  base.hidden = a.hidden;
  base.embed = a.embed_dim;
  base.dropout = a.dropout;
  base.batch_size = a.batch_size;
  base.learning_rate = a.lr;
  base.max_epochs = a.max_epochs;
  base.patience = a.patience;
  base.seed = common.seed;
  base.threads = common.threads;
  const std::vector<bilstm::NetTrainConfig> configs =
      a.single_config ? std::vector{base} : bilstm::paper_grid(base);
  const bilstm::GridResult grid = bilstm::grid_search(train_set, val_set, vocab.size(), configs);
  const double train_seconds = seconds_since(start);
  const auto& best = grid.rows[grid.best];

  const bilstm::EvalResult train_eval = bilstm::evaluate(grid.winner.model, train_set, common.threads);

  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  const auto prov = make_provenance(common, {a.train, a.val});
  persist::BiLstmBundle bundle{grid.winner.model, vocab, a.max_len, best.config};
  persist::save(bundle, dir / kBilstmFile, prov);
  save_vocab(vocab, dir / "vocab.txt");
  write_text(dir / "history.csv", bilstm::history_csv(grid.winner.history));
  write_text(dir / "grid.csv", bilstm::grid_csv(grid.rows));

  json meta;
  meta["kind"] = "bilstm";
  meta["selected"] = {{"hidden", best.config.hidden},
                      {"dropout", best.config.dropout},
                      {"batch_size", best.config.batch_size},
                      {"learning_rate", best.config.learning_rate}};
  meta["best_epoch"] = best.best_epoch;
  meta["stopped_epoch"] = best.stopped_epoch;
  meta["best_val_accuracy"] = best.best_val_accuracy;
  meta["grid_rows"] = grid.rows.size();
  meta["train_accuracy"] = train_eval.accuracy;
  meta["vocab_size"] = vocab.size();
  meta["vocab_coverage"] = vocab.coverage;
  meta["provenance"] = provenance_json(prov);
  write_text(dir / kTrainMetaFile, meta.dump(2) + "\n");
  write_text(dir / kTimingFile, json{{"train_seconds", train_seconds}}.dump(2) + "\n");
  write_provenance(dir / "provenance.json", prov,
                   {dir / kBilstmFile, dir / "vocab.txt", dir / "history.csv", dir / "grid.csv",
                    dir / kTrainMetaFile});

  out << fmt::format(
      "selected: hidden={} dropout={} batch_size={} lr={} (val accuracy {:.4f} at epoch {}, "
      "stopped at {}, {} configs)\n",
      best.config.hidden, best.config.dropout, best.config.batch_size, best.config.learning_rate,
      best.best_val_accuracy, best.best_epoch, best.stopped_epoch, grid.rows.size());
  return kExitOk;
}

int run_train(const TrainArgs& a, const Common& common, std::ostream& out) {
  if (a.kind == "tfidf-logreg") return train_logreg(a, common, out);
  if (a.kind == "bilstm") return train_bilstm(a, common, out);
  throw InputError("--model-kind must be tfidf-logreg or bilstm");
}

// ---------------------------------------------------------------------------
// evaluate / predict

// A trained model directory, loaded whichever kind it holds.
struct LoadedModel {
  std::string kind;
  std::optional<TfidfModel> tfidf;
  std::optional<logreg::Model> logreg;
  std::optional<persist::BiLstmBundle> bilstm;
  std::vector<fs::path> files;

  std::vector<double> probabilities(const Corpus& corpus, std::size_t threads) const {
    if (kind == "bilstm") {
      std::vector<bilstm::Example> set = encode_corpus(corpus, bilstm->vocab, bilstm->max_len);
      return bilstm::evaluate(bilstm->model, set, threads).probabilities;
    }
    std::vector<SparseVector> X;
    X.reserve(corpus.size());
    for (const auto& r : corpus.records()) X.push_back(transform(*tfidf, analyze_for_tfidf(r.text)));
    return logreg::predict_proba(*logreg, X);
  }
};

LoadedModel load_model_dir(const fs::path& dir) {
  LoadedModel m;
  if (fs::exists(dir / kBilstmFile)) {
    m.kind = "bilstm";
    m.bilstm = persist::load_bilstm(dir / kBilstmFile);
    m.files = {dir / kBilstmFile};
    return m;
  }
  if (fs::exists(dir / kLogregFile) && fs::exists(dir / kTfidfFile)) {
    m.kind = "tfidf-logreg";
    m.tfidf = persist::load_tfidf(dir / kTfidfFile);
    m.logreg = persist::load_logreg(dir / kLogregFile);
    m.files = {dir / kTfidfFile, dir / kLogregFile};
    if (m.tfidf->dim() != m.logreg->dim()) {
      throw InputError(fmt::format(
          "dim mismatch: featurizer has {} terms but the classifier expects {} features",
          m.tfidf->dim(), m.logreg->dim()));
    }
    return m;
  }
  throw InputError("no model found in " + dir.string() + " (expected " + kBilstmFile +
                   " or " + kTfidfFile + " + " + kLogregFile + ")");
}

std::optional<json> read_json_if_present(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

int run_evaluate(const EvalArgs& a, const Common& common, std::ostream& out) {
  const LoadedModel model = load_model_dir(a.model);
  const Corpus corpus = load_inputs({a.input}, {});
  if (corpus.empty()) throw InputError("evaluation corpus is empty");

  const auto start = Clock::now();
  const std::vector<double> probs = model.probabilities(corpus, common.threads);
  const double infer_seconds = seconds_since(start);

  const std::vector<int> y = corpus.labels();
  std::vector<int> pred;
  pred.reserve(probs.size());
  for (double p : probs) pred.push_back(p >= a.threshold ? 1 : 0);

  persist::MetricsBundle bundle;
  bundle.model_kind = model.kind;
  bundle.model_name = model_display_name(model.kind);
  bundle.n_samples = corpus.size();
  bundle.threshold = a.threshold;
  bundle.confusion = metrics::confusion(y, pred);
  bundle.prf = metrics::prf(bundle.confusion);
  const bool both = bundle.confusion.tp + bundle.confusion.fn > 0 &&
                    bundle.confusion.tn + bundle.confusion.fp > 0;
  if (both) {
    bundle.roc = metrics::roc_curve(y, probs);
    bundle.auc = bundle.roc.auc;
  }

  if (!a.train_input.empty()) {
    const Corpus train = load_inputs({a.train_input}, {});
    const std::vector<double> tp = model.probabilities(train, common.threads);
    std::vector<int> tpred;
    for (double p : tp) tpred.push_back(p >= a.threshold ? 1 : 0);
    bundle.train_accuracy = logreg::accuracy(train.labels(), tpred);
  } else if (auto meta = read_json_if_present(fs::path(a.model) / kTrainMetaFile)) {
    if (meta->contains("train_accuracy")) bundle.train_accuracy = (*meta)["train_accuracy"].get<double>();
  }
  if (!a.no_timing) {
    persist::Timing timing;
    timing.inference_seconds = infer_seconds;
    if (auto t = read_json_if_present(fs::path(a.model) / kTimingFile)) {
      timing.train_seconds = t->value("train_seconds", 0.0);
    }
    bundle.timing = timing;
  }

  std::vector<fs::path> inputs = {a.input};
  inputs.insert(inputs.end(), model.files.begin(), model.files.end());
  if (!a.train_input.empty()) inputs.push_back(a.train_input);
  bundle.provenance = make_provenance(common, inputs);

  const auto files = persist::write_report(bundle, a.out_dir);
  out << format_tables(std::span(&bundle, 1));
  out << fmt::format("report written to {}\n", files.metrics_json.parent_path().string());
  return kExitOk;
}

int run_predict(const EvalArgs& a, const Common& common, std::ostream& out) {
  const LoadedModel model = load_model_dir(a.model);
  const Corpus corpus = load_inputs({a.input}, {});
  const std::vector<double> probs = model.probabilities(corpus, common.threads);

  std::string csv = "id,probability,label\n";
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const std::string& id = corpus[i].id;
    const bool quote = id.find_first_of(",\"\n\r") != std::string::npos;
    std::string field = id;
    if (quote) {
      field.clear();
      field += '"';
      for (char c : id) {
        if (c == '"') field += '"';
        field += c;
      }
      field += '"';
    }
    csv += fmt::format("{},{},{}\n", field, probs[i], probs[i] >= a.threshold ? 1 : 0);
  }
  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  write_text(out_path, csv);
  std::vector<fs::path> inputs = {a.input};
  inputs.insert(inputs.end(), model.files.begin(), model.files.end());
  write_provenance(fs::path(a.out + ".provenance.json"), make_provenance(common, inputs), {out_path});
  out << fmt::format("wrote {} predictions to {}\n", probs.size(), out_path.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

int run_report(const ReportArgs& a, std::ostream& out) {
  std::vector<persist::MetricsBundle> bundles;
  for (const auto& m : a.metrics) bundles.push_back(persist::read_report_json(m));
  const std::string text = persist::format_tables(bundles);
  if (!a.out.empty()) {
    const fs::path p(a.out);
    if (p.has_parent_path()) ensure_dir(p.parent_path());
    write_text(p, text);
  }
  out << text;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"aitd: detect AI-generated vs human-written text"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "TOML file supplying any flag; the command line wins");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Global random seed")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker thread cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Load, merge and clean JSONL/CSV corpora");
  ingest_cmd->add_option("-i,--input", ingest.inputs, "Input files (.jsonl or .csv)")->required();
  ingest_cmd->add_option("-o,--out", ingest.out, "Output JSONL corpus")->required();
  ingest_cmd->add_option("--stats", ingest.stats_out, "Stats JSON path (default <out>.stats.json)");
  add_column_flags(ingest_cmd, ingest.columns);

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Topic-grouped train/val/test split");
  split_cmd->add_option("-i,--input", split.inputs, "Input corpora")->required();
  split_cmd->add_option("-o,--out-dir", split.out_dir, "Output directory")->required();
  split_cmd->add_option("--targets", split.targets, "Target fractions, e.g. 0.7,0.2,0.1");
  split_cmd->add_option("--manifest", split.manifest, "Existing manifest JSON to apply");
  split_cmd->add_option("--preset", split.preset, "Named preset manifest (paper)");
  split_cmd->add_flag("--shuffle-ties", split.shuffle_ties,
                      "Shuffle equal-size topics with the seed before assignment");
  add_column_flags(split_cmd, split.columns);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train tfidf-logreg or bilstm");
  train_cmd->add_option("--model-kind", train.kind, "tfidf-logreg | bilstm")
      ->required()
      ->check(CLI::IsMember({"tfidf-logreg", "bilstm"}));
  train_cmd->add_option("--train", train.train, "Training partition")->required();
  train_cmd->add_option("--val", train.val, "Validation partition (bilstm)");
  train_cmd->add_option("-o,--out-dir", train.out_dir, "Model output directory")->required();
  train_cmd->add_flag("--single-config", train.single_config,
                      "Train one configuration from the flags instead of the grid");
  train_cmd->add_option("--max-features", train.max_features)->capture_default_str();
  train_cmd->add_option("--C", train.C, "Inverse regularisation strength")->capture_default_str();
  train_cmd->add_option("--penalty", train.penalty, "l1 | l2")->capture_default_str();
  train_cmd->add_option("--grid-max-features", train.grid_max_features)->delimiter(',');
  train_cmd->add_option("--grid-C", train.grid_C)->delimiter(',');
  train_cmd->add_option("--grid-penalty", train.grid_penalty)->delimiter(',');
  train_cmd->add_option("--folds", train.folds)->capture_default_str();
  train_cmd->add_option("--max-iters", train.max_iters)->capture_default_str();
  train_cmd->add_option("--tolerance", train.tolerance)->capture_default_str();
  train_cmd->add_option("--step-size", train.step_size)->capture_default_str();
  train_cmd->add_option("--hidden", train.hidden)->capture_default_str();
  train_cmd->add_option("--dropout", train.dropout)->capture_default_str();
  train_cmd->add_option("--batch-size", train.batch_size)->capture_default_str();
  train_cmd->add_option("--lr", train.lr)->capture_default_str();
  train_cmd->add_option("--embed-dim", train.embed_dim)->capture_default_str();
  train_cmd->add_option("--vocab-size", train.vocab_size)->capture_default_str();
  train_cmd->add_option("--max-len", train.max_len)->capture_default_str();
  train_cmd->add_option("--max-epochs", train.max_epochs)->capture_default_str();
  train_cmd->add_option("--patience", train.patience)->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model and write the metrics report");
  eval_cmd->add_option("-m,--model", eval.model, "Model directory from train")->required();
  eval_cmd->add_option("-i,--input", eval.input, "Labelled evaluation corpus")->required();
  eval_cmd->add_option("-o,--out-dir", eval.out_dir, "Report directory")->required();
  eval_cmd->add_option("--train-input", eval.train_input,
                       "Training corpus for the overfit gap (default: train_meta.json)");
  eval_cmd->add_option("--threshold", eval.threshold)->capture_default_str();
  eval_cmd->add_flag("--no-timing", eval.no_timing, "Leave wall-clock timings out of the report");

  EvalArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Write per-record probabilities and labels");
  predict_cmd->add_option("-m,--model", predict.model, "Model directory from train")->required();
  predict_cmd->add_option("-i,--input", predict.input, "Corpus to score")->required();
  predict_cmd->add_option("-o,--out", predict.out, "Output CSV")->required();
  predict_cmd->add_option("--threshold", predict.threshold)->capture_default_str();

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Render comparison tables from metrics.json files");
  report_cmd->add_option("--metrics", report.metrics, "metrics.json files")->required();
  report_cmd->add_option("-o,--out", report.out, "Text output path");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (ingest_cmd->parsed()) return run_ingest(ingest, common, out);
    if (split_cmd->parsed()) return run_split(split, common, out, err);
    if (train_cmd->parsed()) return run_train(train, common, out);
    if (eval_cmd->parsed()) return run_evaluate(eval, common, out);
    if (predict_cmd->parsed()) return run_predict(predict, common, out);
    if (report_cmd->parsed()) return run_report(report, out);
  } catch (const DegenerateDataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace aitd::cli
