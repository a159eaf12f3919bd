#include "fever_forge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fever_forge/error.hpp"
#include "json.hpp"

namespace fever_forge {

using nlohmann::json;

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

// Reads one JSON object per non-blank line and hands it to `fn` with the
// 1-based line number. Parse failures become ParseError.
template <typename Fn>
void for_each_record(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (is_blank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, number, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) {
      throw ParseError(source, number, "record is not a JSON object");
    }
    try {
      fn(record, number);
    } catch (const ParseError&) {
      throw;
    } catch (const json::exception& e) {
      throw ParseError(source, number, e.what());
    } catch (const Error& e) {
      throw ParseError(source, number, e.what());
    }
  }
}

std::string read_id(const json& record, const char* field) {
  if (!record.contains(field)) {
    throw Error(std::string("missing field \"") + field + "\"");
  }
  const json& id = record.at(field);
  if (id.is_string()) {
    if (id.get<std::string>().empty()) throw Error("empty id");
    return id.get<std::string>();
  }
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw Error(std::string("field \"") + field +
              "\" must be a string or an integer");
}

std::string read_string(const json& record, const char* field) {
  if (!record.contains(field) || !record.at(field).is_string()) {
    throw Error(std::string("missing or non-string field \"") + field + "\"");
  }
  return record.at(field).get<std::string>();
}

// Accepts [page, line] and the released four-element form
// [annotation_id, evidence_id, page, line]. A null page (how NEI instances are
// released) yields nullopt.
std::optional<EvidenceSentenceId> read_sentence_id(const json& item) {
  if (!item.is_array() || (item.size() != 2 && item.size() != 4)) {
    throw Error("evidence sentence must be [page, line]");
  }
  const std::size_t offset = item.size() == 4 ? 2 : 0;
  const json& page = item[offset];
  const json& line = item[offset + 1];
  if (page.is_null() && item.size() == 4) return std::nullopt;
  if (!page.is_string() || page.get<std::string>().empty()) {
    throw Error("evidence page must be a non-empty string");
  }
  if (!line.is_number_integer() || line.get<long long>() < 0) {
    throw Error("evidence line must be a non-negative integer");
  }
  return EvidenceSentenceId{canonicalize_title(page.get<std::string>()),
                            static_cast<int>(line.get<long long>())};
}

json sentence_to_json(const EvidenceSentenceId& id) {
  return json::array({id.page, id.line});
}

}  // namespace

std::string canonicalize_title(std::string_view title) {
  std::string out;
  out.reserve(title.size());
  for (std::size_t i = 0; i < title.size(); ++i) {
    const char c = title[i];
    if (c == '%' && i + 2 < title.size()) {
      const int hi = hex_value(title[i + 1]);
      const int lo = hex_value(title[i + 2]);
      if (hi >= 0 && lo >= 0) {
        const char decoded = static_cast<char>(hi * 16 + lo);
        if (decoded != '%' && hex_value(decoded) < 0) {
          out.push_back(decoded == ' ' ? '_' : decoded);
          i += 2;
          continue;
        }
      }
    }
    out.push_back(c == ' ' ? '_' : c);
  }
  return out;
}

std::string to_string(const EvidenceSentenceId& id) {
  return id.page + ":" + std::to_string(id.line);
}

void WikiSnapshot::add_page(std::string_view title,
                            std::vector<std::string> lines) {
  std::string key = canonicalize_title(title);
  if (key.empty()) throw Error("empty page title");
  if (pages_.count(key) != 0) throw Error("duplicate page \"" + key + "\"");
  pages_.emplace(std::move(key), std::move(lines));
}

const std::vector<std::string>* WikiSnapshot::find_page(
    std::string_view title) const {
  auto it = pages_.find(title);
  if (it == pages_.end()) it = pages_.find(canonicalize_title(title));
  return it == pages_.end() ? nullptr : &it->second;
}

const std::string* WikiSnapshot::find(const EvidenceSentenceId& id) const {
  const auto* lines = find_page(id.page);
  if (lines == nullptr || id.line < 0 ||
      static_cast<std::size_t>(id.line) >= lines->size()) {
    return nullptr;
  }
  return &(*lines)[static_cast<std::size_t>(id.line)];
}

const std::string& WikiSnapshot::lookup(const EvidenceSentenceId& id) const {
  const auto* lines = find_page(id.page);
  if (lines == nullptr) throw Error("unknown page \"" + id.page + "\"");
  if (id.line < 0 || static_cast<std::size_t>(id.line) >= lines->size()) {
    throw Error("line " + std::to_string(id.line) + " out of range for page \"" +
                id.page + "\" (" + std::to_string(lines->size()) + " lines)");
  }
  return (*lines)[static_cast<std::size_t>(id.line)];
}

std::vector<Instance> parse_dataset(std::istream& in,
                                    const std::string& source_name,
                                    Warnings* warnings) {
  std::vector<Instance> instances;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_record(in, source_name, [&](const json& record, std::size_t line) {
    Instance instance;
    instance.id = read_id(record, "id");
    instance.claim = read_string(record, "claim");
    if (is_blank(instance.claim)) throw Error("claim is empty");
    instance.label = parse_label(read_string(record, "label"));

    if (record.contains("evidence") && !record.at("evidence").is_null()) {
      const json& groups = record.at("evidence");
      if (!groups.is_array()) throw Error("evidence must be an array");
      std::set<std::vector<EvidenceSentenceId>> seen_groups;
      for (const json& group : groups) {
        if (!group.is_array()) {
          throw Error("evidence combination must be an array");
        }
        EvidenceCombination combination;
        bool had_null = false;
        for (const json& item : group) {
          auto id = read_sentence_id(item);
          if (!id) {
            had_null = true;
            continue;
          }
          if (std::find(combination.sentences.begin(),
                        combination.sentences.end(),
                        *id) != combination.sentences.end()) {
            if (warnings) {
              warnings->push_back(source_name + ":" + std::to_string(line) +
                                  ": duplicate sentence " + to_string(*id) +
                                  " in one combination dropped");
            }
            continue;
          }
          combination.sentences.push_back(std::move(*id));
        }
        if (combination.sentences.empty()) {
          if (had_null) continue;
          throw Error("evidence combination is empty");
        }
        auto key = combination.sentences;
        std::sort(key.begin(), key.end());
        if (!seen_groups.insert(std::move(key)).second) {
          if (warnings) {
            warnings->push_back(source_name + ":" + std::to_string(line) +
                                ": duplicate evidence combination dropped");
          }
          continue;
        }
        instance.evidence.push_back(std::move(combination));
      }
    }
    if (instance.label != Label::kNotEnoughInfo && instance.evidence.empty()) {
      throw Error("instance labelled " +
                  std::string(label_name(instance.label)) +
                  " has no evidence");
    }
    auto [it, inserted] = seen.emplace(instance.id, line);
    if (!inserted) {
      throw Error("duplicate id \"" + instance.id + "\" (first seen on line " +
                  std::to_string(it->second) + ")");
    }
    instances.push_back(std::move(instance));
  });
  return instances;
}

std::vector<Instance> load_dataset(const std::filesystem::path& path,
                                   Warnings* warnings) {
  auto in = open_input(path);
  return parse_dataset(in, path.string(), warnings);
}

std::string instance_to_json(const Instance& instance) {
  json evidence = json::array();
  for (const auto& combination : instance.evidence) {
    json group = json::array();
    for (const auto& id : combination.sentences) {
      group.push_back(sentence_to_json(id));
    }
    evidence.push_back(std::move(group));
  }
  json record = {{"id", instance.id},
                 {"claim", instance.claim},
                 {"label", label_file_name(instance.label)},
                 {"evidence", std::move(evidence)}};
  return record.dump();
}

void write_dataset(std::ostream& out, const std::vector<Instance>& instances) {
  for (const auto& instance : instances) out << instance_to_json(instance) << '\n';
}

std::vector<Prediction> parse_predictions(std::istream& in,
                                          const std::string& source_name) {
  std::vector<Prediction> predictions;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_record(in, source_name, [&](const json& record, std::size_t line) {
    Prediction prediction;
    prediction.instance_id = read_id(record, "id");
    prediction.predicted_label =
        parse_label(read_string(record, "predicted_label"));
    if (record.contains("predicted_evidence") &&
        !record.at("predicted_evidence").is_null()) {
      const json& items = record.at("predicted_evidence");
      if (!items.is_array()) throw Error("predicted_evidence must be an array");
      for (const json& item : items) {
        if (auto id = read_sentence_id(item)) {
          prediction.predicted_evidence.push_back(std::move(*id));
        }
      }
    }
    auto [it, inserted] = seen.emplace(prediction.instance_id, line);
    if (!inserted) {
      throw Error("multiple predictions for id \"" + prediction.instance_id +
                  "\" (first on line " + std::to_string(it->second) + ")");
    }
    predictions.push_back(std::move(prediction));
  });
  return predictions;
}

std::vector<LabeledPrediction> join_predictions(
    const std::vector<Prediction>& predictions,
    const std::vector<Instance>& dataset) {
  std::unordered_map<std::string_view, const Instance*> by_id;
  by_id.reserve(dataset.size());
  for (const auto& instance : dataset) by_id.emplace(instance.id, &instance);

  std::unordered_set<std::string_view> joined;
  std::vector<LabeledPrediction> out;
  out.reserve(predictions.size());
  for (const auto& prediction : predictions) {
    auto it = by_id.find(prediction.instance_id);
    if (it == by_id.end()) {
      throw Error("prediction for unknown instance id \"" +
                  prediction.instance_id + "\"");
    }
    if (!joined.insert(prediction.instance_id).second) {
      throw Error("multiple predictions for instance id \"" +
                  prediction.instance_id + "\"");
    }
    out.push_back(LabeledPrediction{*it->second, prediction});
  }
  return out;
}

std::vector<LabeledPrediction> load_predictions(
    const std::filesystem::path& path, const std::vector<Instance>& dataset) {
  auto in = open_input(path);
  return join_predictions(parse_predictions(in, path.string()), dataset);
}

std::string prediction_to_json(const Prediction& prediction) {
  json evidence = json::array();
  for (const auto& id : prediction.predicted_evidence) {
    evidence.push_back(sentence_to_json(id));
  }
  json record = {{"id", prediction.instance_id},
                 {"predicted_label", label_file_name(prediction.predicted_label)},
                 {"predicted_evidence", std::move(evidence)}};
  return record.dump();
}

void write_predictions(std::ostream& out,
                       const std::vector<Prediction>& predictions) {
  for (const auto& p : predictions) out << prediction_to_json(p) << '\n';
}

WikiSnapshot parse_wiki_snapshot(std::istream& in,
                                 const std::string& source_name,
                                 WikiSnapshot snapshot) {
  for_each_record(in, source_name, [&](const json& record, std::size_t) {
    std::string title = read_string(record, "title");
    if (!record.contains("lines") || !record.at("lines").is_array()) {
      throw Error("missing array field \"lines\"");
    }
    std::vector<std::string> lines;
    for (const json& text : record.at("lines")) {
      if (!text.is_string()) throw Error("page lines must be strings");
      lines.push_back(text.get<std::string>());
    }
    snapshot.add_page(title, std::move(lines));
  });
  return snapshot;
}

WikiSnapshot load_wiki_snapshot(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    WikiSnapshot snapshot;
    for (const auto& file : files) {
      auto in = open_input(file);
      snapshot = parse_wiki_snapshot(in, file.string(), std::move(snapshot));
    }
    return snapshot;
  }
  auto in = open_input(path);
  return parse_wiki_snapshot(in, path.string());
}

std::vector<EvidenceSentenceId> missing_evidence(
    const WikiSnapshot& snapshot, const std::vector<Instance>& instances) {
  std::set<EvidenceSentenceId> missing;
  for (const auto& instance : instances) {
    for (const auto& combination : instance.evidence) {
      for (const auto& id : combination.sentences) {
        if (snapshot.find(id) == nullptr) missing.insert(id);
      }
    }
  }
  return {missing.begin(), missing.end()};
}

}  // namespace fever_forge
