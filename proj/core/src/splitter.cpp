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

#include "aitd/splitter.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <set>

#include "aitd/error.hpp"
#include "aitd/resources.hpp"
#include "aitd/rng.hpp"

namespace aitd {

using nlohmann::json;

std::string_view to_string(Partition p) {
  switch (p) {
    case Partition::kTrain:
      return "train";
    case Partition::kVal:
      return "val";
    case Partition::kTest:
      return "test";
  }
  return "?";
}

std::optional<Partition> parse_partition(std::string_view name) {
  if (name == "train") return Partition::kTrain;
  if (name == "val") return Partition::kVal;
  if (name == "test") return Partition::kTest;
  return std::nullopt;
}

std::optional<Partition> SplitManifest::find(std::string_view topic) const {
  for (const auto& a : assignments) {
    if (a.topic == topic) return a.partition;
  }
  return std::nullopt;
}

bool SplitManifest::is_partition() const {
  std::set<std::string_view> seen;
  for (const auto& a : assignments) {
    if (!seen.insert(a.topic).second) return false;
  }
  return true;
}

std::size_t SplitManifest::count(Partition p) const {
  return static_cast<std::size_t>(std::count_if(
      assignments.begin(), assignments.end(),
      [p](const TopicAssignment& a) { return a.partition == p; }));
}

void validate_targets(const std::array<double, 3>& targets) {
  double sum = 0.0;
  for (double t : targets) {
    if (!(t > 0.0 && t < 1.0)) {
      throw InputError(fmt::format("split target {} must lie in (0, 1)", t));
    }
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError(fmt::format("split targets sum to {}, expected 1", sum));
  }
}

SplitManifest assign_topics(const std::map<std::string, std::size_t>& topic_sizes,
                            const std::array<double, 3>& targets, std::uint64_t seed,
                            const AssignOptions& options) {
  validate_targets(targets);
  if (topic_sizes.size() < 3) {
    throw InputError(fmt::format("topic split needs at least 3 topics, found {}",
                                 topic_sizes.size()));
  }

  std::vector<std::pair<std::string, std::size_t>> order(topic_sizes.begin(),
                                                         topic_sizes.end());
  // std::map iteration already gives name order; a stable sort on size keeps it.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (options.shuffle_equal_size) {
    Rng rng(seed, RngStream::kTopicTies);
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && order[j].second == order[i].second) ++j;
      rng.shuffle(std::span(order).subspan(i, j - i));
      i = j;
    }
  }

  std::size_t total = 0;
  for (const auto& [_, n] : order) total += n;
  const double denom = total > 0 ? static_cast<double>(total) : 1.0;

  std::array<std::size_t, 3> filled{};
  std::array<std::size_t, 3> topics_in{};
  SplitManifest manifest;
  manifest.targets = targets;
  manifest.seed = seed;

  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t remaining = order.size() - k;
    const std::size_t empty_parts = static_cast<std::size_t>(
        std::count(topics_in.begin(), topics_in.end(), std::size_t{0}));
    const bool must_fill_empty = empty_parts > 0 && remaining <= empty_parts;

    int best = -1;
    double best_deficit = 0.0;
    for (int p = 0; p < 3; ++p) {
      if (must_fill_empty && topics_in[p] != 0) continue;
      const double deficit = targets[p] - static_cast<double>(filled[p]) / denom;
      // Deficits within 1e-12 count as equal; the earlier partition wins.
      if (best < 0 || deficit > best_deficit + 1e-12) {
        best = p;
        best_deficit = deficit;
      }
    }
    filled[best] += order[k].second;
    ++topics_in[best];
    manifest.assignments.push_back({order[k].first, static_cast<Partition>(best)});
  }

  std::sort(manifest.assignments.begin(), manifest.assignments.end(),
            [](const auto& a, const auto& b) { return a.topic < b.topic; });
  return manifest;
}

SplitManifest assign_topics(const Corpus& corpus, const std::array<double, 3>& targets,
                            std::uint64_t seed, const AssignOptions& options) {
  std::map<std::string, std::size_t> sizes;
  for (const Record& r : corpus.records()) ++sizes[r.source];
  return assign_topics(sizes, targets, seed, options);
}

const Corpus& SplitResult::operator[](Partition p) const {
  switch (p) {
    case Partition::kTrain:
      return train;
    case Partition::kVal:
      return val;
    case Partition::kTest:
      break;
  }
  return test;
}

SplitResult apply_manifest(const Corpus& corpus, const SplitManifest& manifest) {
  std::map<std::string, Partition, std::less<>> route;
  for (const auto& a : manifest.assignments) route.emplace(a.topic, a.partition);

  SplitResult out{Corpus(corpus.provenance() + "#train"),
                  Corpus(corpus.provenance() + "#val"),
                  Corpus(corpus.provenance() + "#test"),
                  {}};
  std::set<std::string_view> seen;
  for (const Record& r : corpus.records()) {
    auto it = route.find(r.source);
    if (it == route.end()) {
      throw InputError("source '" + r.source + "' is not covered by the split manifest");
    }
    seen.insert(it->first);
    switch (it->second) {
      case Partition::kTrain:
        out.train.add(r);
        break;
      case Partition::kVal:
        out.val.add(r);
        break;
      case Partition::kTest:
        out.test.add(r);
        break;
    }
  }
  for (const auto& [topic, _] : route) {
    if (!seen.contains(topic)) {
      out.warnings.push_back("manifest topic '" + topic + "' has no records");
    }
  }
  return out;
}

LeakageReport verify_no_leakage(const SplitManifest& manifest, const Corpus& train,
                                const Corpus& val, const Corpus& test) {
  std::map<std::string, std::set<Partition>> observed;
  const std::array<const Corpus*, 3> parts = {&train, &val, &test};
  for (Partition p : kPartitions) {
    for (const Record& r : parts[static_cast<int>(p)]->records()) {
      observed[r.source].insert(p);
    }
  }
  std::map<std::string, std::vector<Partition>> declared;
  for (const auto& a : manifest.assignments) {
    declared[a.topic].push_back(a.partition);
  }

  LeakageReport report;
  std::set<std::string> topics;
  for (const auto& [t, _] : observed) topics.insert(t);
  for (const auto& [t, _] : declared) topics.insert(t);
  for (const std::string& topic : topics) {
    const auto obs_it = observed.find(topic);
    const auto dec_it = declared.find(topic);
    std::vector<Partition> obs;
    if (obs_it != observed.end()) obs.assign(obs_it->second.begin(), obs_it->second.end());
    std::vector<Partition> dec;
    if (dec_it != declared.end()) dec = dec_it->second;

    bool ok = true;
    if (dec.size() > 1) ok = false;  // listed more than once: not a partition
    if (obs.size() > 1) ok = false;  // records of one topic in several partitions
    if (obs.size() == 1 && (dec.size() != 1 || dec.front() != obs.front())) ok = false;
    if (!ok) {
      report.pass = false;
      report.violations.push_back({topic, std::move(obs), std::move(dec)});
    }
  }
  return report;
}

namespace {

// Collects "assignments" entries in document order, keeping duplicates that a
// DOM parse would collapse.
class AssignmentSax : public nlohmann::json_sax<json> {
 public:
  std::vector<std::pair<std::string, std::string>> entries;
  std::string error;

  bool null() override { return scalar("null"); }
  bool boolean(bool) override { return scalar("boolean"); }
  bool number_integer(number_integer_t) override { return scalar("number"); }
  bool number_unsigned(number_unsigned_t) override { return scalar("number"); }
  bool number_float(number_float_t, const string_t&) override { return scalar("number"); }
  bool binary(binary_t&) override { return scalar("binary"); }
  bool string(string_t& val) override {
    if (in_assignments()) entries.emplace_back(pending_, val);
    return true;
  }
  bool start_object(std::size_t) override {
    if (in_assignments()) return fail("assignment values must be strings");
    ++depth_;
    return true;
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    if (in_assignments()) return fail("assignment values must be strings");
    ++depth_;
    return true;
  }
  bool end_array() override {
    --depth_;
    return true;
  }
  bool key(string_t& val) override {
    if (depth_ == 1) top_key_ = val;
    if (depth_ == 2 && top_key_ == "assignments") pending_ = val;
    return true;
  }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    return fail(ex.what());
  }

 private:
  bool in_assignments() const { return depth_ == 2 && top_key_ == "assignments"; }
  bool scalar(const char* kind) {
    if (in_assignments()) {
      return fail(std::string("assignment values must be strings, got ") + kind);
    }
    return true;
  }
  bool fail(std::string msg) {
    if (error.empty()) error = std::move(msg);
    return false;
  }

  int depth_ = 0;
  std::string top_key_;
  std::string pending_;
};

}  // namespace

SplitManifest manifest_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("manifest: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("manifest: expected a JSON object");

  SplitManifest m;
  if (auto it = doc.find("targets"); it != doc.end()) {
    if (!it->is_array() || it->size() != 3) {
      throw InputError("manifest: \"targets\" must be an array of three fractions");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*it)[i].is_number()) throw InputError("manifest: targets must be numbers");
      m.targets[i] = (*it)[i].get<double>();
    }
    validate_targets(m.targets);
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer()) throw InputError("manifest: \"seed\" must be an integer");
    m.seed = it->get<std::uint64_t>();
  }
  auto assignments = doc.find("assignments");
  if (assignments == doc.end() || !assignments->is_object()) {
    throw InputError("manifest: missing \"assignments\" object");
  }

  AssignmentSax sax;
  json::sax_parse(text, &sax);
  if (!sax.error.empty()) throw InputError("manifest: " + sax.error);
  for (auto& [topic, part] : sax.entries) {
    auto p = parse_partition(part);
    if (!p) {
      throw InputError("manifest: topic '" + topic + "' has unknown partition '" + part +
                       "'");
    }
    m.assignments.push_back({topic, *p});
  }
  return m;
}

std::string manifest_to_json(const SplitManifest& m) {
  // Assembled by hand so that duplicate topics survive a round trip.
  std::string out = "{\n";
  out += fmt::format("  \"targets\": [{}, {}, {}],\n", json(m.targets[0]).dump(),
                     json(m.targets[1]).dump(), json(m.targets[2]).dump());
  out += fmt::format("  \"seed\": {},\n", m.seed);
  out += "  \"assignments\": {";
  for (std::size_t i = 0; i < m.assignments.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += fmt::format("    {}: \"{}\"", json(m.assignments[i].topic).dump(),
                       to_string(m.assignments[i].partition));
  }
  out += m.assignments.empty() ? "}\n" : "\n  }\n";
  out += "}\n";
  return out;
}

SplitManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read manifest " + path.string());
  const std::string text(std::istreambuf_iterator<char>(in), {});
  try {
    return manifest_from_json(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_manifest(const SplitManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << manifest_to_json(manifest);
}

SplitManifest paper_split_manifest() {
  return manifest_from_json(resources::paper_split_manifest());
}

std::string leakage_report_to_json(const LeakageReport& report) {
  json doc;
  doc["status"] = report.pass ? "PASS" : "FAIL";
  json violations = json::array();
  for (const auto& v : report.violations) {
    json obs = json::array();
    for (Partition p : v.observed) obs.push_back(to_string(p));
    json dec = json::array();
    for (Partition p : v.declared) dec.push_back(to_string(p));
    violations.push_back({{"topic", v.topic}, {"observed", obs}, {"declared", dec}});
  }
  doc["violations"] = std::move(violations);
  return doc.dump(2) + "\n";
}

}  // namespace aitd
