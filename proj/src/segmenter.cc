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

#include "effcorp/segmenter.h"

#include <fstream>
#include <vector>

#include "effcorp/error.h"
#include "effcorp/text.h"
#include "effcorp/unicode.h"

namespace effcorp {

namespace {

constexpr std::size_t kMinHeadingTail = 2;
constexpr std::size_t kMaxHeadingTail = 40;

bool IsHeadingChar(char c) {
  return (c >= 'A' && c <= 'Z') || c == ' ' || c == '/' || c == '&' || c == '-';
}

// Length of an inline heading "[A-Z][A-Z /&-]{2,40}:" at `pos`, including
// the colon, or 0.
std::size_t HeadingLengthAt(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] < 'A' || text[pos] > 'Z') return 0;
  std::size_t end = pos + 1;
  while (end < text.size() && IsHeadingChar(text[end]) &&
         end - pos - 1 < kMaxHeadingTail) {
    ++end;
  }
  std::size_t tail = end - pos - 1;
  if (end >= text.size() || text[end] != ':' || tail < kMinHeadingTail) return 0;
  return end + 1 - pos;
}

bool AtSentenceStart(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  while (i > 0 && (text[i - 1] == ' ' || text[i - 1] == '\t' ||
                   text[i - 1] == '\n' || text[i - 1] == '\r')) {
    --i;
  }
  if (i == 0) return true;
  if (i == pos) return false;
  char prev = text[i - 1];
  return prev == '.' || prev == '?' || prev == '!';
}

struct Heading {
  std::size_t begin;     // first heading character
  std::size_t body;      // first character after the colon
  std::string label;
};

std::vector<Heading> FindHeadings(std::string_view text) {
  std::vector<Heading> headings;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    if (!AtSentenceStart(text, pos)) continue;
    std::size_t length = HeadingLengthAt(text, pos);
    if (length == 0) continue;
    std::string_view label = Trim(text.substr(pos, length - 1));
    headings.push_back({pos, pos + length, std::string(label)});
    pos += length - 1;
  }
  return headings;
}

std::vector<Section> SplitBlock(const Section &block, const LabelMap &map) {
  std::vector<Heading> headings = FindHeadings(block.text);
  if (headings.empty()) {
    Section section = block;
    section.label_canonical = map.Map(section.label_raw);
    return {section};
  }
  std::vector<Section> sections;
  std::string_view text = block.text;
  std::string_view lead = Trim(text.substr(0, headings.front().begin));
  if (!lead.empty()) {
    Section section;
    section.text = std::string(lead);
    section.label_canonical = map.Map("");
    sections.push_back(std::move(section));
  }
  for (std::size_t i = 0; i < headings.size(); ++i) {
    std::size_t end = i + 1 < headings.size() ? headings[i + 1].begin : text.size();
    Section section;
    section.label_raw = headings[i].label;
    section.text = std::string(Trim(text.substr(headings[i].body, end - headings[i].body)));
    section.label_canonical = map.Map(section.label_raw);
    sections.push_back(std::move(section));
  }
  return sections;
}

}  // namespace

std::string NormalizeHeading(std::string_view raw) {
  std::string folded = FoldCase(raw);
  std::string spaced;
  for (std::size_t pos = 0; pos < folded.size();) {
    std::size_t next;
    char32_t c = DecodeAt(folded, pos, &next);
    if (c == U'&' || c == U'/') {
      spaced += " and ";
    } else if (IsWordChar(c)) {
      spaced.append(folded, pos, next - pos);
    } else {
      spaced += ' ';
    }
    pos = next;
  }
  std::string out;
  for (Token &t : Tokenize(spaced)) {
    if (!out.empty()) out += ' ';
    out += t.normalized;
  }
  return out;
}

LabelMap LabelMap::Default() {
  using L = CanonicalLabel;
  LabelMap map;
  for (const char *raw : {"background", "backgrounds", "objective", "objectives",
                          "aim", "aims", "introduction", "purpose", "purposes"}) {
    map.Add(raw, {L::kBackgroundObjectives});
  }
  for (const char *raw : {"method", "methods", "materials and methods",
                          "methodology", "design", "study design", "setting"}) {
    map.Add(raw, {L::kMethods});
  }
  for (const char *raw : {"result", "results", "findings"}) {
    map.Add(raw, {L::kResults});
  }
  for (const char *raw : {"conclusion", "conclusions", "interpretation", "discussion"}) {
    map.Add(raw, {L::kConclusions});
  }
  return map;
}

LabelMap LabelMap::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label map " + path);
  LabelMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected raw_label<TAB>labels",
                       line_no);
    }
    auto labels = LabelSet::Parse(line.substr(tab + 1));
    if (!labels || labels->empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": unknown canonical label",
                       line_no);
    }
    map.Add(line.substr(0, tab), *labels);
  }
  return map;
}

void LabelMap::Add(std::string_view raw, LabelSet labels) {
  std::string key = NormalizeHeading(raw);
  if (key.empty()) return;
  table_[key].Merge(labels);
}

LabelSet LabelMap::Map(std::string_view raw) const {
  const LabelSet others{CanonicalLabel::kOthers};
  std::string key = NormalizeHeading(raw);
  if (key.empty() || key == "none" || key == "unassigned") return others;

  auto whole = table_.find(key);
  if (whole != table_.end()) {
    if (mode_ == CombinedMode::kExclusive && whole->second.size() > 1) return others;
    return whole->second;
  }

  std::vector<std::string> parts(1);
  for (Token &t : Tokenize(key)) {
    if (t.normalized == "and") {
      parts.emplace_back();
      continue;
    }
    if (!parts.back().empty()) parts.back() += ' ';
    parts.back() += t.normalized;
  }
  LabelSet result;
  std::size_t matched_parts = 0;
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t next = i + 1;
    std::string joined;
    for (std::size_t j = i; j < parts.size(); ++j) {
      joined += (j == i ? "" : " and ") + parts[j];
      auto it = table_.find(joined);
      if (it != table_.end()) {
        result.Merge(it->second);
        next = j + 1;
      }
    }
    if (next > i + 1 || table_.contains(parts[i])) ++matched_parts;
    i = next;
  }
  if (result.empty()) return others;
  if (mode_ == CombinedMode::kExclusive && (matched_parts > 1 || result.size() > 1)) {
    return others;
  }
  return result;
}

AbstractRecord DetectSections(const AbstractRecord &record, const LabelMap &map) {
  AbstractRecord out = record;
  bool labelled = false;
  for (const Section &s : record.sections) labelled = labelled || !s.label_raw.empty();
  if (labelled) {
    for (Section &s : out.sections) s.label_canonical = map.Map(s.label_raw);
  } else {
    out.sections.clear();
    for (const Section &block : record.sections) {
      for (Section &s : SplitBlock(block, map)) out.sections.push_back(std::move(s));
    }
  }
  FillSentenceSpans(&out);
  return out;
}

std::string SelectText(const AbstractRecord &record, LabelSet labels) {
  std::string out;
  for (const Section &section : record.sections) {
    if (!section.label_canonical.Intersects(labels) || section.text.empty()) continue;
    if (!out.empty()) out += ' ';
    out += section.text;
  }
  return out;
}

}  // namespace effcorp
