// Copyright 2026 The effcorp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "effcorp/corpus_io.h"

#include <map>

#include "effcorp/digest.h"
#include "effcorp/error.h"

namespace effcorp {

using nlohmann::json;

json RecordToJson(const AbstractRecord &record) {
  json sections = json::array();
  for (const Section &section : record.sections) {
    json labels = json::array();
    for (CanonicalLabel l : section.label_canonical.labels()) {
      labels.push_back(LabelName(l));
    }
    json spans = json::array();
    for (const Span &span : section.sentence_spans) {
      spans.push_back({span.begin, span.end});
    }
    sections.push_back({{"label_raw", section.label_raw},
                        {"label_canonical", std::move(labels)},
                        {"text", section.text},
                        {"sentence_spans", std::move(spans)}});
  }
  json out = {{"pmid", record.pmid},
              {"title", record.title},
              {"source", SourceName(record.source)},
              {"sections", std::move(sections)}};
  out["language"] = record.language ? json(*record.language) : json(nullptr);
  return out;
}

namespace {

const json &Field(const json &object, const char *key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string StringField(const json &object, const char *key) {
  const json &value = Field(object, key);
  if (!value.is_string()) {
    throw ValidationError(std::string("field '") + key + "' is not a string");
  }
  return value.get<std::string>();
}

}  // namespace

AbstractRecord RecordFromJson(const json &j) {
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  AbstractRecord record;
  record.pmid = StringField(j, "pmid");
  record.title = StringField(j, "title");
  std::string source = StringField(j, "source");
  auto parsed_source = ParseSource(source);
  if (!parsed_source) throw ValidationError("unknown source '" + source + "'");
  record.source = *parsed_source;

  auto lang = j.find("language");
  if (lang != j.end() && !lang->is_null()) {
    if (!lang->is_string()) throw ValidationError("field 'language' is not a string");
    record.language = lang->get<std::string>();
  }

  const json &sections = Field(j, "sections");
  if (!sections.is_array()) throw ValidationError("field 'sections' is not an array");
  for (const json &s : sections) {
    if (!s.is_object()) throw ValidationError("section is not an object");
    Section section;
    section.label_raw = StringField(s, "label_raw");
    section.text = StringField(s, "text");
    const json &labels = Field(s, "label_canonical");
    LabelSet set;
    // A bare string is accepted for hand-written fixtures.
    if (labels.is_string()) {
      auto l = ParseLabel(labels.get<std::string>());
      if (!l) throw ValidationError("unknown canonical label " + labels.dump());
      set.Insert(*l);
    } else if (labels.is_array()) {
      for (const json &name : labels) {
        if (!name.is_string()) throw ValidationError("canonical label is not a string");
        auto l = ParseLabel(name.get<std::string>());
        if (!l) throw ValidationError("unknown canonical label " + name.dump());
        set.Insert(*l);
      }
    } else {
      throw ValidationError("field 'label_canonical' has the wrong type");
    }
    section.label_canonical = set;
    const json &spans = Field(s, "sentence_spans");
    if (!spans.is_array()) throw ValidationError("field 'sentence_spans' is not an array");
    for (const json &span : spans) {
      if (!span.is_array() || span.size() != 2 || !span[0].is_number_unsigned() ||
          !span[1].is_number_unsigned()) {
        throw ValidationError("sentence span is not a pair of offsets");
      }
      section.sentence_spans.push_back(
          {span[0].get<std::size_t>(), span[1].get<std::size_t>()});
    }
    record.sections.push_back(std::move(section));
  }
  return record;
}

std::string SerializeRecord(const AbstractRecord &record) {
  return RecordToJson(record).dump(-1, ' ', false,
                                   json::error_handler_t::strict);
}

std::string SerializeCorpus(const std::vector<AbstractRecord> &records) {
  std::string out;
  for (const AbstractRecord &record : records) {
    out += SerializeRecord(record);
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> SplitLines(std::string_view contents) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<AbstractRecord> ParseCorpus(std::string_view contents) {
  std::vector<AbstractRecord> records;
  std::map<std::string, std::size_t> line_of_pmid;
  auto lines = SplitLines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    if (lines[i].find_first_not_of(" \t") == std::string_view::npos) continue;
    AbstractRecord record;
    try {
      record = RecordFromJson(json::parse(lines[i]));
    } catch (const json::exception &e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    } catch (const ValidationError &e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    }
    auto [it, inserted] = line_of_pmid.emplace(record.pmid, line_no);
    if (!inserted) {
      throw ValidationError("duplicate pmid " + record.pmid + " on lines " +
                            std::to_string(it->second) + " and " +
                            std::to_string(line_no));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<AbstractRecord> ReadCorpus(const std::string &path) {
  return ParseCorpus(ReadFile(path));
}

CorpusManifest WriteCorpus(const std::vector<AbstractRecord> &records,
                           const std::string &path, CorpusStage stage) {
  auto violations = ValidateCorpus(records);
  if (!violations.empty()) {
    std::string message = "corpus failed validation:";
    for (const auto &v : violations) message += "\n  " + v;
    throw ValidationError(message, violations);
  }
  std::string bytes = SerializeCorpus(records);
  WriteFile(path, bytes);
  return {records.size(), stage, Sha256Hex(bytes)};
}

json ManifestToJson(const CorpusManifest &manifest) {
  return {{"record_count", manifest.record_count},
          {"stage", CorpusStageName(manifest.stage)},
          {"content_digest", manifest.content_digest}};
}

}  // namespace effcorp
