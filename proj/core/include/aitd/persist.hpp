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

#ifndef AITD_PERSIST_HPP_
#define AITD_PERSIST_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aitd/bilstm.hpp"
#include "aitd/logreg.hpp"
#include "aitd/metrics.hpp"
#include "aitd/textproc.hpp"
#include "aitd/tfidf.hpp"

namespace aitd::persist {

// Model file layout (all integers little-endian):
//
//   "AITD"            4 bytes magic
//   version           u32, currently 1
//   kind              u8  (1 = tfidf, 2 = logreg, 3 = bilstm)
//   header length     u32
//   header            UTF-8 JSON: dims, config, seed, payload_sha256, ...
//   payload           f64 little-endian parameter arrays in declared order
//
// payload_sha256 is the SHA-256 of the payload bytes.
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'A', 'I', 'T', 'D'};

enum class ModelKind : std::uint8_t { kTfidf = 1, kLogreg = 2, kBilstm = 3 };

std::string_view to_string(ModelKind kind);

// Origin of an artifact: seed, tool version and input file digests.
struct Provenance {
  std::uint64_t seed = 42;
  std::string tool_version;
  std::map<std::string, std::string> inputs;  // file name -> sha256

  Provenance();
};

struct ModelFile {
  ModelKind kind = ModelKind::kTfidf;
  std::uint32_t version = kFormatVersion;
  std::string header;  // JSON text
  std::vector<double> payload;
};

// Fills payload_sha256/payload_count into the header before encoding.
std::vector<std::uint8_t> encode(ModelKind kind, std::string_view header_json,
                                 std::span<const double> payload);
// Throws FormatError on bad magic, unsupported version, hash mismatch or
// payload length mismatch.
ModelFile decode(std::span<const std::uint8_t> bytes);

ModelFile read_model_file(const std::filesystem::path& path);

struct BiLstmBundle {
  bilstm::Model model;
  Vocab vocab;
  std::size_t max_len = 600;
  bilstm::NetTrainConfig config;
};

void save(const TfidfModel& model, const std::filesystem::path& path, const Provenance& prov);
void save(const logreg::Model& model, const std::filesystem::path& path, const Provenance& prov);
void save(const BiLstmBundle& bundle, const std::filesystem::path& path, const Provenance& prov);

TfidfModel load_tfidf(const std::filesystem::path& path);
logreg::Model load_logreg(const std::filesystem::path& path);
BiLstmBundle load_bilstm(const std::filesystem::path& path);

using AnyModel = std::variant<TfidfModel, logreg::Model, BiLstmBundle>;
AnyModel load(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Evaluation reports.

struct Timing {
  double train_seconds = 0.0;
  double inference_seconds = 0.0;
};

struct MetricsBundle {
  std::string model_name;  // display name, e.g. "Logistic Reg."
  std::string model_kind;  // tfidf-logreg | bilstm
  std::size_t n_samples = 0;
  double threshold = 0.5;
  metrics::ConfusionMatrix confusion;
  metrics::PrfReport prf;
  std::optional<double> auc;
  metrics::RocCurve roc;  // no points: ROC CSV is skipped
  std::optional<double> train_accuracy;
  std::optional<Timing> timing;
  Provenance provenance;

  std::optional<double> overfit_gap() const;
};

struct ReportFiles {
  std::filesystem::path metrics_json;
  std::filesystem::path confusion_csv;
  std::optional<std::filesystem::path> roc_csv;
  std::filesystem::path text_table;
};

// Writes metrics.json, confusion.csv, roc.csv (when the curve has points) and
// report.txt into `dir`, creating it if needed.
ReportFiles write_report(const MetricsBundle& bundle, const std::filesystem::path& dir);

std::string report_json(const MetricsBundle& bundle);
// Reads the scalar content of metrics.json back (ROC points are not stored
// in the JSON).
MetricsBundle read_report_json(const std::filesystem::path& path);

// Side-by-side accuracy/AUC/timing table and per-class precision/recall/F1
// table for one or more models.
std::string format_tables(std::span<const MetricsBundle> bundles);

}  // namespace aitd::persist

#endif  // AITD_PERSIST_HPP_
