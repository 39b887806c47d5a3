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

#include "aitd/persist.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "aitd/error.hpp"
#include "aitd/hash.hpp"
#include "aitd/version.hpp"

namespace aitd::persist {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTfidf:
      return "tfidf";
    case ModelKind::kLogreg:
      return "logreg";
    case ModelKind::kBilstm:
      return "bilstm";
  }
  return "unknown";
}

Provenance::Provenance() : tool_version(kToolVersion) {}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(in[at + k]) << (8 * k);
  return v;
}

std::vector<std::uint8_t> payload_bytes(std::span<const double> payload) {
  std::vector<std::uint8_t> out;
  out.reserve(payload.size() * 8);
  for (double d : payload) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  return out;
}

std::string hash_bytes(std::span<const std::uint8_t> bytes) {
  return sha256_hex(std::as_bytes(bytes));
}

json provenance_json(const Provenance& p) {
  return {{"seed", p.seed}, {"tool_version", p.tool_version}, {"inputs", p.inputs}};
}

std::string terms_digest(const std::vector<std::string>& terms) {
  std::string joined;
  for (const auto& t : terms) {
    joined += t;
    joined += '\n';
  }
  return sha256_hex(joined);
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write failed for " + path.string());
}

json parse_header(const ModelFile& file, ModelKind expected) {
  if (file.kind != expected) {
    throw FormatError(fmt::format("expected a {} model file, found {}", to_string(expected),
                                  to_string(file.kind)));
  }
  return json::parse(file.header);
}

void check_count(std::size_t expected, std::size_t actual, std::string_view what) {
  if (expected != actual) {
    throw FormatError(fmt::format("{}: declared dims imply {} values, payload holds {}", what,
                                  expected, actual));
  }
}

Vocab vocab_from_header(const json& h, bool specials) {
  Vocab v;
  v.specials = specials;
  v.terms = h.at("vocab").get<std::vector<std::string>>();
  if (terms_digest(v.terms) != h.at("vocab_sha256").get<std::string>()) {
    throw FormatError("vocabulary digest mismatch");
  }
  v.coverage = h.value("vocab_coverage", 0.0);
  v.reindex();
  return v;
}

json net_config_json(const bilstm::NetTrainConfig& c) {
  return {{"hidden", c.hidden},         {"embed", c.embed},
          {"dropout", c.dropout},       {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate}, {"max_epochs", c.max_epochs},
          {"patience", c.patience},     {"seed", c.seed},
          {"beta1", c.beta1},           {"beta2", c.beta2},
          {"epsilon", c.epsilon},       {"threads", c.threads}};
}

bilstm::NetTrainConfig net_config_from(const json& j) {
  bilstm::NetTrainConfig c;
  c.hidden = j.at("hidden").get<std::size_t>();
  c.embed = j.at("embed").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.patience = j.at("patience").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.threads = j.value("threads", std::size_t{1});
  return c;
}

// Missing or mistyped header fields surface as FormatError.
template <typename Fn>
auto guard_header(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": malformed model header: " + e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> encode(ModelKind kind, std::string_view header_json,
                                 std::span<const double> payload) {
  const std::vector<std::uint8_t> body = payload_bytes(payload);
  json header = json::parse(header_json);
  header["format_version"] = kFormatVersion;
  header["kind"] = to_string(kind);
  header["payload_count"] = payload.size();
  header["payload_sha256"] = hash_bytes(body);
  const std::string text = header.dump();

  std::vector<std::uint8_t> out;
  out.reserve(13 + text.size() + body.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(kind));
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ModelFile decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 13 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("bad magic: not an aitd model file");
  }
  ModelFile file;
  file.version = get_u32(bytes, 4);
  if (file.version != kFormatVersion) {
    throw FormatError(fmt::format("unsupported model file version {}", file.version));
  }
  const std::uint8_t kind = bytes[8];
  if (kind < 1 || kind > 3) throw FormatError(fmt::format("unknown model kind tag {}", kind));
  file.kind = static_cast<ModelKind>(kind);
  const std::uint32_t header_len = get_u32(bytes, 9);
  if (13 + static_cast<std::size_t>(header_len) > bytes.size()) {
    throw FormatError("truncated model header");
  }
  file.header.assign(reinterpret_cast<const char*>(bytes.data() + 13), header_len);
  json header;
  try {
    header = json::parse(file.header);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed model header: ") + e.what());
  }

  const auto body = bytes.subspan(13 + header_len);
  if (body.size() % 8 != 0) throw FormatError("payload is not a whole number of f64 values");
  const std::size_t count = body.size() / 8;
  if (header.value("payload_count", std::size_t{0}) != count) {
    throw FormatError(fmt::format("dim mismatch: header declares {} values, payload holds {}",
                                  header.value("payload_count", std::size_t{0}), count));
  }
  if (hash_bytes(body) != header.value("payload_sha256", std::string{})) {
    throw FormatError("payload hash mismatch: model file is corrupted");
  }
  file.payload.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(body[i * 8 + k]) << (8 * k);
    file.payload[i] = std::bit_cast<double>(bits);
  }
  return file;
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read model file " + path.string());
  const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
  try {
    return decode(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save(const TfidfModel& model, const std::filesystem::path& path, const Provenance& prov) {
  json h;
  h["dims"] = {{"vocab_size", model.vocab.size()}};
  h["config"] = {{"ngram_range", {1, 2}},
                 {"stopwords", "en-179"},
                 {"stopwords_sha256", english_stopwords_sha256()},
                 {"idf", "smooth"},
                 {"norm", "l2"}};
  h["n_docs"] = model.n_docs;
  h["seed"] = prov.seed;
  h["provenance"] = provenance_json(prov);
  h["vocab"] = model.vocab.terms;
  h["vocab_sha256"] = terms_digest(model.vocab.terms);
  h["vocab_coverage"] = model.vocab.coverage;
  write_bytes(path, encode(ModelKind::kTfidf, h.dump(), model.idf));
}

void save(const logreg::Model& model, const std::filesystem::path& path, const Provenance& prov) {
  json h;
  h["dims"] = {{"features", model.weights.size()}};
  h["config"] = {{"penalty", logreg::to_string(model.penalty)}, {"C", model.C}};
  h["meta"] = {{"iterations", model.meta.iterations}, {"final_loss", model.meta.final_loss}};
  h["seed"] = prov.seed;
  h["provenance"] = provenance_json(prov);
  std::vector<double> payload = model.weights;
  payload.push_back(model.bias);
  write_bytes(path, encode(ModelKind::kLogreg, h.dump(), payload));
}

void save(const BiLstmBundle& bundle, const std::filesystem::path& path, const Provenance& prov) {
  const auto& d = bundle.model.dims;
  json h;
  h["dims"] = {{"vocab", d.vocab}, {"embed", d.embed}, {"hidden", d.hidden}, {"dense", d.dense}};
  h["max_len"] = bundle.max_len;
  h["config"] = net_config_json(bundle.config);
  h["seed"] = prov.seed;
  h["provenance"] = provenance_json(prov);
  h["tensor_order"] = {"embedding", "fwd.W", "fwd.U", "fwd.b", "bwd.W", "bwd.U", "bwd.b",
                       "fc1.W", "fc1.b", "fc2.W", "fc2.b"};
  h["vocab"] = bundle.vocab.terms;
  h["vocab_sha256"] = terms_digest(bundle.vocab.terms);
  h["vocab_coverage"] = bundle.vocab.coverage;
  if (bundle.vocab.size() != d.vocab) {
    throw std::invalid_argument("BiLSTM vocabulary size does not match the embedding");
  }
  std::vector<double> payload;
  payload.reserve(bundle.model.params.parameter_count());
  for (auto t : bundle.model.params.tensors()) payload.insert(payload.end(), t.begin(), t.end());
  write_bytes(path, encode(ModelKind::kBilstm, h.dump(), payload));
}

TfidfModel load_tfidf(const std::filesystem::path& path) {
  return guard_header(path, [&] {
    const ModelFile file = read_model_file(path);
    const json h = parse_header(file, ModelKind::kTfidf);
    TfidfModel m;
    m.vocab = vocab_from_header(h, false);
    check_count(h.at("dims").at("vocab_size").get<std::size_t>(), m.vocab.size(), "tfidf vocab");
    check_count(m.vocab.size(), file.payload.size(), "tfidf idf");
    m.idf = file.payload;
    m.n_docs = h.at("n_docs").get<std::size_t>();
    return m;
  });
}

logreg::Model load_logreg(const std::filesystem::path& path) {
  return guard_header(path, [&] {
    const ModelFile file = read_model_file(path);
    const json h = parse_header(file, ModelKind::kLogreg);
    const auto features = h.at("dims").at("features").get<std::size_t>();
    check_count(features + 1, file.payload.size(), "logreg");
    logreg::Model m;
    m.weights.assign(file.payload.begin(), file.payload.end() - 1);
    m.bias = file.payload.back();
    m.penalty = logreg::parse_penalty(h.at("config").at("penalty").get<std::string>());
    m.C = h.at("config").at("C").get<double>();
    m.meta.iterations = h.at("meta").at("iterations").get<int>();
    m.meta.final_loss = h.at("meta").at("final_loss").get<double>();
    return m;
  });
}

BiLstmBundle load_bilstm(const std::filesystem::path& path) {
  return guard_header(path, [&] {
    const ModelFile file = read_model_file(path);
    const json h = parse_header(file, ModelKind::kBilstm);
    const json& dims = h.at("dims");
    BiLstmBundle b;
    b.model.dims = {dims.at("vocab").get<std::size_t>(), dims.at("embed").get<std::size_t>(),
                    dims.at("hidden").get<std::size_t>(), dims.at("dense").get<std::size_t>()};
    b.model.params = bilstm::Params::zeros(b.model.dims);
    check_count(b.model.params.parameter_count(), file.payload.size(), "bilstm");
    std::size_t at = 0;
    for (auto t : b.model.params.tensors()) {
      std::copy_n(file.payload.begin() + static_cast<std::ptrdiff_t>(at), t.size(), t.begin());
      at += t.size();
    }
    b.vocab = vocab_from_header(h, true);
    check_count(b.model.dims.vocab, b.vocab.size(), "bilstm vocab");
    b.max_len = h.at("max_len").get<std::size_t>();
    b.config = net_config_from(h.at("config"));
    return b;
  });
}

AnyModel load(const std::filesystem::path& path) {
  const ModelFile file = read_model_file(path);
  switch (file.kind) {
    case ModelKind::kTfidf:
      return load_tfidf(path);
    case ModelKind::kLogreg:
      return load_logreg(path);
    case ModelKind::kBilstm:
      break;
  }
  return load_bilstm(path);
}

}  // namespace aitd::persist
