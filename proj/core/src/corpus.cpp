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

#include "aitd/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

#include "aitd/error.hpp"

namespace aitd {

using nlohmann::json;

void Corpus::add(Record record) {
  if (!ids_.insert(record.id).second) {
    throw InputError("duplicate record id '" + record.id + "'");
  }
  records_.push_back(std::move(record));
}

bool Corpus::contains_id(std::string_view id) const {
  return ids_.contains(std::string(id));
}

std::vector<int> Corpus::labels() const {
  std::vector<int> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(to_int(r.label));
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string_view trim_ascii(std::string_view s) {
  const auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Label label_from_json(const json& value, const std::string& where) {
  if (value.is_boolean()) return value.get<bool>() ? Label::kAi : Label::kHuman;
  if (value.is_number()) {
    const double v = value.get<double>();
    if (v == 0.0) return Label::kHuman;
    if (v == 1.0) return Label::kAi;
  } else if (value.is_string()) {
    if (auto parsed = parse_label(value.get<std::string>())) return *parsed;
  }
  throw InputError(where + ": label must be 0 or 1, got " + value.dump());
}

}  // namespace

std::optional<Label> parse_label(std::string_view raw) {
  const std::string v = lower_ascii(trim_ascii(raw));
  if (v == "0" || v == "0.0" || v == "human" || v == "false" || v == "no") {
    return Label::kHuman;
  }
  if (v == "1" || v == "1.0" || v == "ai" || v == "true" || v == "yes") {
    return Label::kAi;
  }
  return std::nullopt;
}

Corpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  const std::string filename = path.filename().string();
  Corpus corpus(path.string());

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_ascii(line).empty()) continue;
    const std::string where = fmt::format("{}:{}", path.string(), line_no);

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw InputError(where + ": expected a JSON object");

    Record rec;
    if (auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
      rec.id = it->is_string() ? it->get<std::string>() : it->dump();
    } else {
      rec.id = fmt::format("{}:{}", filename, line_no);
    }

    auto text = obj.find("text");
    if (text == obj.end()) throw InputError(where + ": missing \"text\"");
    if (text->is_string()) {
      rec.text = text->get<std::string>();
    } else if (!text->is_null()) {
      throw InputError(where + ": \"text\" must be a string");
    }

    auto label = obj.find("label");
    if (label == obj.end()) throw InputError(where + ": missing \"label\"");
    rec.label = label_from_json(*label, where);

    auto source = obj.find("source");
    if (source == obj.end() || !source->is_string() ||
        source->get<std::string>().empty()) {
      throw InputError(where + ": missing or empty \"source\"");
    }
    rec.source = source->get<std::string>();

    try {
      corpus.add(std::move(rec));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return corpus;
}

namespace {

// Splits RFC-4180 content into rows. Row numbers are 1-based and count the
// header; a row's number is the physical line on which it starts.
struct CsvRow {
  std::size_t number = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRow> parse_csv(std::string_view data, const std::string& name) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t line = 1;
  row.number = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool row_has_content = false;
  std::size_t quote_start_line = 0;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row = CsvRow{};
    row_has_content = false;
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw InputError(fmt::format("{}: row {}: stray quote inside unquoted field",
                                       name, row.number));
        }
        in_quotes = true;
        field_was_quoted = true;
        row_has_content = true;
        quote_start_line = line;
        break;
      case ',':
        row_has_content = true;
        end_field();
        break;
      case '\r':
        if (i + 1 < data.size() && data[i + 1] == '\n') break;
        field.push_back(c);
        break;
      case '\n':
        ++line;
        if (row_has_content || !field.empty()) {
          end_row();
        } else {
          row.fields.clear();
        }
        row.number = line;
        break;
      default:
        if (field_was_quoted) {
          throw InputError(fmt::format(
              "{}: row {}: characters after closing quote", name, row.number));
        }
        field.push_back(c);
        row_has_content = true;
    }
  }
  if (in_quotes) {
    throw InputError(fmt::format("{}: row {}: unbalanced quote (opened on line {})",
                                 name, row.number, quote_start_line));
  }
  if (row_has_content || !field.empty()) end_row();
  return rows;
}

}  // namespace

Corpus load_csv(const std::filesystem::path& path, const CsvColumnMap& columns) {
  const std::string data = read_file(path);
  const std::string name = path.string();
  std::vector<CsvRow> rows = parse_csv(data, name);
  if (rows.empty()) throw InputError(name + ": missing header row");

  const auto& header = rows.front().fields;
  auto column_index = [&](const std::string& column) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) {
      throw InputError(name + ": mapped column '" + column + "' not in header");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t text_col = column_index(columns.text);
  const std::size_t label_col = column_index(columns.label);
  const std::size_t source_col = column_index(columns.source);
  const std::optional<std::size_t> id_col =
      columns.id.empty() ? std::nullopt : std::optional(column_index(columns.id));

  Corpus corpus(name);
  const std::string filename = path.filename().string();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    const std::string where = fmt::format("{}: row {}", name, row.number);
    if (row.fields.size() != header.size()) {
      throw InputError(fmt::format("{}: expected {} fields, found {}", where,
                                   header.size(), row.fields.size()));
    }
    Record rec;
    rec.id = id_col ? row.fields[*id_col] : fmt::format("{}:{}", filename, row.number);
    if (rec.id.empty()) rec.id = fmt::format("{}:{}", filename, row.number);
    rec.text = row.fields[text_col];
    auto label = parse_label(row.fields[label_col]);
    if (!label) {
      throw InputError(where + ": unrecognised label '" + row.fields[label_col] + "'");
    }
    rec.label = *label;
    rec.source = columns.source_prefix + row.fields[source_col];
    if (row.fields[source_col].empty()) throw InputError(where + ": empty source");
    try {
      corpus.add(std::move(rec));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return corpus;
}

Corpus load_any(const std::filesystem::path& path, const CsvColumnMap& columns) {
  std::string ext = lower_ascii(path.extension().string());
  if (ext == ".csv") return load_csv(path, columns);
  return load_jsonl(path);
}

void save_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  for (const auto& r : corpus.records()) {
    json obj = {{"id", r.id}, {"text", r.text}, {"label", to_int(r.label)},
                {"source", r.source}};
    out << obj.dump() << '\n';
  }
  if (!out) throw InputError("write failed for " + path.string());
}

Corpus concat(std::span<const Corpus> parts, std::vector<std::string>* collisions) {
  Corpus merged;
  std::string provenance;
  for (const Corpus& part : parts) {
    if (!provenance.empty()) provenance += ';';
    provenance += part.provenance();
    for (const Record& r : part.records()) {
      Record copy = r;
      if (merged.contains_id(copy.id)) {
        if (collisions) collisions->push_back(copy.id);
        std::size_t n = 2;
        std::string renamed;
        do {
          renamed = fmt::format("{}#{}", r.id, n++);
        } while (merged.contains_id(renamed));
        copy.id = std::move(renamed);
      }
      merged.add(std::move(copy));
    }
  }
  merged.set_provenance(std::move(provenance));
  return merged;
}

CleanResult clean(const Corpus& corpus) {
  CleanResult result{Corpus(corpus.provenance()), 0};
  for (const Record& r : corpus.records()) {
    std::string text;
    text.reserve(r.text.size());
    for (std::size_t i = 0; i < r.text.size(); ++i) {
      if (r.text[i] == '\r' && i + 1 < r.text.size() && r.text[i + 1] == '\n') continue;
      text.push_back(r.text[i]);
    }
    std::string_view trimmed = trim_ascii(text);
    if (trimmed.empty()) {
      ++result.dropped;
      continue;
    }
    Record kept = r;
    kept.text = std::string(trimmed);
    result.corpus.add(std::move(kept));
  }
  return result;
}

CorpusStats stats(const Corpus& corpus) {
  CorpusStats s;
  for (const Record& r : corpus.records()) {
    LabelCounts& src = s.per_source[r.source];
    for (LabelCounts* c : {&s.overall, &src}) {
      ++c->total;
      if (r.label == Label::kAi) {
        ++c->ai;
      } else {
        ++c->human;
      }
    }
  }
  return s;
}

std::string format_stats(const CorpusStats& s) {
  std::size_t width = 7;
  for (const auto& [name, _] : s.per_source) width = std::max(width, name.size());
  std::string out;
  auto row = [&](std::string_view name, const LabelCounts& c) {
    out += fmt::format("{:<{}}  {:>8}  {:>8}  {:>8}  {:>6.1f}%  {:>6.1f}%\n", name, width,
                       c.total, c.human, c.ai, 100.0 * c.human_ratio(),
                       100.0 * c.ai_ratio());
  };
  out += fmt::format("{:<{}}  {:>8}  {:>8}  {:>8}  {:>7}  {:>7}\n", "source", width,
                     "total", "human", "ai", "human%", "ai%");
  for (const auto& [name, counts] : s.per_source) row(name, counts);
  row("(all)", s.overall);
  if (s.dropped) out += fmt::format("dropped during cleaning: {}\n", s.dropped);
  if (s.duplicate_id_collisions) {
    out += fmt::format("duplicate id collisions: {}\n", s.duplicate_id_collisions);
  }
  return out;
}

}  // namespace aitd
