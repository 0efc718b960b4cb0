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

#include "effcorp/record.h"

#include <algorithm>
#include <bit>
#include <map>

#include "effcorp/unicode.h"

namespace effcorp {

std::string_view PolarityName(Polarity polarity) {
  switch (polarity) {
    case Polarity::kPositive:
      return "positive";
    case Polarity::kNegative:
      return "negative";
    case Polarity::kNeutral:
      return "neutral";
  }
  return "neutral";
}

std::optional<Polarity> ParsePolarity(std::string_view name) {
  for (Polarity p : kAllPolarities) {
    if (PolarityName(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view LabelName(CanonicalLabel label) {
  switch (label) {
    case CanonicalLabel::kBackgroundObjectives:
      return "BackgroundObjectives";
    case CanonicalLabel::kMethods:
      return "Methods";
    case CanonicalLabel::kResults:
      return "Results";
    case CanonicalLabel::kConclusions:
      return "Conclusions";
    case CanonicalLabel::kOthers:
      return "Others";
  }
  return "Others";
}

std::optional<CanonicalLabel> ParseLabel(std::string_view name) {
  for (CanonicalLabel l : kAllLabels) {
    if (LabelName(l) == name) return l;
  }
  return std::nullopt;
}

std::size_t LabelSet::size() const {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<CanonicalLabel> LabelSet::labels() const {
  std::vector<CanonicalLabel> out;
  for (CanonicalLabel l : kAllLabels) {
    if (Contains(l)) out.push_back(l);
  }
  return out;
}

std::string LabelSet::ToString() const {
  std::string out;
  for (CanonicalLabel l : labels()) {
    if (!out.empty()) out += ',';
    out += LabelName(l);
  }
  return out;
}

std::optional<LabelSet> LabelSet::Parse(std::string_view list) {
  LabelSet set;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view name = Trim(list.substr(pos, comma - pos));
    if (!name.empty()) {
      auto label = ParseLabel(name);
      if (!label) return std::nullopt;
      set.Insert(*label);
    }
    pos = comma + 1;
  }
  return set;
}

std::string_view SourceName(Source source) {
  switch (source) {
    case Source::kPubmedXml:
      return "pubmed_xml";
    case Source::kJsonl:
      return "jsonl";
    case Source::kFixture:
      return "fixture";
  }
  return "fixture";
}

std::optional<Source> ParseSource(std::string_view name) {
  for (Source s : {Source::kPubmedXml, Source::kJsonl, Source::kFixture}) {
    if (SourceName(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view CorpusStageName(CorpusStage stage) {
  switch (stage) {
    case CorpusStage::kRaw:
      return "raw";
    case CorpusStage::kStage1:
      return "stage1";
    case CorpusStage::kStage2:
      return "stage2";
    case CorpusStage::kStage3:
      return "stage3";
    case CorpusStage::kSegmented:
      return "segmented";
    case CorpusStage::kNormalized:
      return "normalized";
  }
  return "raw";
}

bool PmidLess(std::string_view a, std::string_view b) {
  auto numeric = [](std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (numeric(a) && numeric(b)) {
    std::string_view ta = a.substr(std::min(a.find_first_not_of('0'), a.size()));
    std::string_view tb = b.substr(std::min(b.find_first_not_of('0'), b.size()));
    if (ta.size() != tb.size()) return ta.size() < tb.size();
    if (ta != tb) return ta < tb;
  }
  return a < b;
}

std::vector<std::string> ValidateRecord(const AbstractRecord &record) {
  std::vector<std::string> violations;
  std::string who = "record " + (record.pmid.empty() ? "<no pmid>" : record.pmid);
  if (record.pmid.empty()) violations.push_back(who + ": empty pmid");
  if (Trim(record.title).empty()) violations.push_back(who + ": empty title");
  if (!IsNfc(record.title)) violations.push_back(who + ": title is not NFC-normalized");
  for (std::size_t i = 0; i < record.sections.size(); ++i) {
    const Section &section = record.sections[i];
    std::string where = who + " section " + std::to_string(i);
    if (section.label_canonical.empty()) {
      violations.push_back(where + ": empty canonical label set");
    }
    if (!IsNfc(section.text)) {
      violations.push_back(where + ": text is not NFC-normalized");
    }
    std::size_t last_end = 0;
    for (std::size_t j = 0; j < section.sentence_spans.size(); ++j) {
      const Span &span = section.sentence_spans[j];
      if (span.begin >= span.end || span.end > section.text.size() ||
          span.begin < last_end) {
        violations.push_back(where + ": sentence span " + std::to_string(j) +
                             " [" + std::to_string(span.begin) + ", " +
                             std::to_string(span.end) +
                             ") is empty, out of bounds or overlapping");
      }
      last_end = std::max(last_end, span.end);
    }
  }
  return violations;
}

std::vector<std::string> ValidateCorpus(
    const std::vector<AbstractRecord> &records) {
  std::vector<std::string> violations;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (auto &v : ValidateRecord(records[i])) violations.push_back(std::move(v));
    auto [it, inserted] = seen.emplace(records[i].pmid, i);
    if (!inserted && !records[i].pmid.empty()) {
      violations.push_back("duplicate pmid " + records[i].pmid +
                           " at records " + std::to_string(it->second) +
                           " and " + std::to_string(i));
    }
  }
  return violations;
}

bool IsEnglish(const AbstractRecord &record) {
  if (!record.language || record.language->empty()) return true;
  std::string lang = FoldCase(*record.language);
  return lang == "eng" || lang == "en";
}

std::string AbstractBody(const AbstractRecord &record) {
  std::string out;
  for (const Section &section : record.sections) {
    if (section.text.empty()) continue;
    if (!out.empty()) out += ' ';
    out += section.text;
  }
  return out;
}

}  // namespace effcorp
