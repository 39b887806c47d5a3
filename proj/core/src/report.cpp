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

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>

#include "aitd/error.hpp"
#include "aitd/persist.hpp"

namespace aitd::persist {

using nlohmann::json;

std::optional<double> MetricsBundle::overfit_gap() const {
  if (!train_accuracy) return std::nullopt;
  return metrics::overfit_gap(*train_accuracy, prf.accuracy);
}

namespace {

json scores_json(const metrics::ClassScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

metrics::ClassScores scores_from(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_double(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

std::string confusion_csv(const metrics::ConfusionMatrix& cm) {
  return fmt::format(",pred_human,pred_ai\ntrue_human,{},{}\ntrue_ai,{},{}\n", cm.tn, cm.fp,
                     cm.fn, cm.tp);
}

std::string roc_csv(const metrics::RocCurve& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) out += fmt::format("{},{},{}\n", p.threshold, p.fpr, p.tpr);
  return out;
}

}  // namespace

std::string report_json(const MetricsBundle& b) {
  json doc;
  doc["model"] = b.model_name;
  doc["kind"] = b.model_kind;
  doc["n_samples"] = b.n_samples;
  doc["threshold"] = b.threshold;
  doc["accuracy"] = b.prf.accuracy;
  doc["auc"] = optional_json(b.auc);
  doc["confusion"] = {{"tp", b.confusion.tp},
                      {"fp", b.confusion.fp},
                      {"fn", b.confusion.fn},
                      {"tn", b.confusion.tn}};
  doc["per_class"] = {{"ai", scores_json(b.prf.ai)}, {"human", scores_json(b.prf.human)}};
  doc["train_accuracy"] = optional_json(b.train_accuracy);
  doc["overfit_gap_pp"] = optional_json(b.overfit_gap());
  if (b.timing) {
    doc["timing"] = {{"train_seconds", b.timing->train_seconds},
                     {"inference_seconds", b.timing->inference_seconds}};
  }
  if (b.roc.points.empty()) {
    doc["roc"] = {{"omitted", true}, {"reason", "no ROC points"}};
  } else {
    doc["roc"] = {{"file", "roc.csv"}, {"points", b.roc.points.size()}};
  }
  doc["provenance"] = {{"seed", b.provenance.seed},
                       {"tool_version", b.provenance.tool_version},
                       {"inputs", b.provenance.inputs}};
  return doc.dump(2) + "\n";
}

ReportFiles write_report(const MetricsBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create report directory " + dir.string() + ": " + ec.message());

  ReportFiles files;
  files.metrics_json = dir / "metrics.json";
  files.confusion_csv = dir / "confusion.csv";
  files.text_table = dir / "report.txt";
  write_text(files.metrics_json, report_json(bundle));
  write_text(files.confusion_csv, confusion_csv(bundle.confusion));
  if (!bundle.roc.points.empty()) {
    files.roc_csv = dir / "roc.csv";
    write_text(*files.roc_csv, roc_csv(bundle.roc));
  }
  write_text(files.text_table, format_tables(std::span(&bundle, 1)));
  return files;
}

MetricsBundle read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read report " + path.string());
  try {
    const json doc = json::parse(in);
    MetricsBundle b;
    b.model_name = doc.at("model").get<std::string>();
    b.model_kind = doc.at("kind").get<std::string>();
    b.n_samples = doc.at("n_samples").get<std::size_t>();
    b.threshold = doc.at("threshold").get<double>();
    const json& cm = doc.at("confusion");
    b.confusion = {cm.at("tp").get<std::uint64_t>(), cm.at("fp").get<std::uint64_t>(),
                   cm.at("fn").get<std::uint64_t>(), cm.at("tn").get<std::uint64_t>()};
    b.prf.accuracy = doc.at("accuracy").get<double>();
    b.prf.ai = scores_from(doc.at("per_class").at("ai"));
    b.prf.human = scores_from(doc.at("per_class").at("human"));
    b.auc = optional_double(doc, "auc");
    b.train_accuracy = optional_double(doc, "train_accuracy");
    if (auto it = doc.find("timing"); it != doc.end()) {
      b.timing = Timing{it->at("train_seconds").get<double>(),
                        it->at("inference_seconds").get<double>()};
    }
    const json& prov = doc.at("provenance");
    b.provenance.seed = prov.at("seed").get<std::uint64_t>();
    b.provenance.tool_version = prov.at("tool_version").get<std::string>();
    b.provenance.inputs = prov.at("inputs").get<std::map<std::string, std::string>>();
    return b;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": malformed report: " + e.what());
  }
}

std::string format_tables(std::span<const MetricsBundle> bundles) {
  std::size_t width = 5;
  for (const auto& b : bundles) width = std::max(width, b.model_name.size());

  std::string out = "Model performance on the evaluation set\n";
  out += fmt::format("{:<{}}  {:>8}  {:>7}  {:>10}  {:>9}\n", "Model", width, "Accuracy",
                     "ROC-AUC", "Train (s)", "Infer (s)");
  for (const auto& b : bundles) {
    const std::string acc = fmt::format("{:.2f}%", 100.0 * b.prf.accuracy);
    const std::string auc = b.auc ? fmt::format("{:.2f}", *b.auc) : "--";
    const std::string train = b.timing ? fmt::format("{:.2f}", b.timing->train_seconds) : "--";
    const std::string infer =
        b.timing ? fmt::format("{:.2f}", b.timing->inference_seconds) : "--";
    out += fmt::format("{:<{}}  {:>8}  {:>7}  {:>10}  {:>9}\n", b.model_name, width, acc, auc,
                       train, infer);
  }

  out += "\nPer-class metrics\n";
  out += fmt::format("{:<{}}  {:<5}  {:>9}  {:>6}  {:>4}\n", "Model", width, "Class", "Precision",
                     "Recall", "F1");
  for (const auto& b : bundles) {
    auto row = [&](std::string_view cls, const metrics::ClassScores& s) {
      out += fmt::format("{:<{}}  {:<5}  {:>9.2f}  {:>6.2f}  {:>4.2f}\n", b.model_name, width, cls,
                         s.precision, s.recall, s.f1);
    };
    row("Human", b.prf.human);
    row("AI", b.prf.ai);
  }

  out += "\nConfusion matrices (rows: true class, columns: predicted)\n";
  for (const auto& b : bundles) {
    const auto& cm = b.confusion;
    out += fmt::format("{}: human->human {}  human->ai {}  ai->human {}  ai->ai {}\n",
                       b.model_name, cm.tn, cm.fp, cm.fn, cm.tp);
    if (auto gap = b.overfit_gap()) {
      out += fmt::format("{}: train accuracy {:.2f}%, overfit gap {:.2f} pp\n", b.model_name,
                         100.0 * *b.train_accuracy, *gap);
    }
  }
  return out;
}

}  // namespace aitd::persist
