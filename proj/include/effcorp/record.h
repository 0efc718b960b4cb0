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

// Core corpus types shared by every pipeline stage.

#ifndef EFFCORP_RECORD_H_
#define EFFCORP_RECORD_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace effcorp {

// Effect polarity. The enumerator order is the tie-breaking class order used
// throughout (positive < negative < neutral).
enum class Polarity : uint8_t { kPositive = 0, kNegative = 1, kNeutral = 2 };

inline constexpr std::array<Polarity, 3> kAllPolarities = {
    Polarity::kPositive, Polarity::kNegative, Polarity::kNeutral};

std::string_view PolarityName(Polarity polarity);
std::optional<Polarity> ParsePolarity(std::string_view name);

// The five canonical abstract section labels.
enum class CanonicalLabel : uint8_t {
  kBackgroundObjectives = 0,
  kMethods = 1,
  kResults = 2,
  kConclusions = 3,
  kOthers = 4,
};

inline constexpr std::array<CanonicalLabel, 5> kAllLabels = {
    CanonicalLabel::kBackgroundObjectives, CanonicalLabel::kMethods,
    CanonicalLabel::kResults, CanonicalLabel::kConclusions,
    CanonicalLabel::kOthers};

std::string_view LabelName(CanonicalLabel label);
std::optional<CanonicalLabel> ParseLabel(std::string_view name);

// Small set of canonical labels, iterated in enumerator order.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<CanonicalLabel> labels) {
    for (CanonicalLabel l : labels) Insert(l);
  }

  static LabelSet All() {
    return LabelSet{CanonicalLabel::kBackgroundObjectives,
                    CanonicalLabel::kMethods, CanonicalLabel::kResults,
                    CanonicalLabel::kConclusions, CanonicalLabel::kOthers};
  }

  void Insert(CanonicalLabel label) { bits_ |= Bit(label); }
  void Merge(LabelSet other) { bits_ |= other.bits_; }
  bool Contains(CanonicalLabel label) const { return bits_ & Bit(label); }
  bool Intersects(LabelSet other) const { return bits_ & other.bits_; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<CanonicalLabel> labels() const;

  // Comma-joined names, e.g. "Methods,Results".
  std::string ToString() const;
  // Parses a comma-separated list of canonical names; nullopt on unknown.
  static std::optional<LabelSet> Parse(std::string_view list);

  bool operator==(const LabelSet &) const = default;

 private:
  static uint8_t Bit(CanonicalLabel l) {
    return static_cast<uint8_t>(1u << static_cast<unsigned>(l));
  }
  uint8_t bits_ = 0;
};

// Half-open byte range [begin, end) into a UTF-8 string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool operator==(const Span &) const = default;
};

struct Section {
  std::string label_raw;
  LabelSet label_canonical{CanonicalLabel::kOthers};
  std::string text;
  std::vector<Span> sentence_spans;

  bool operator==(const Section &) const = default;
};

enum class Source : uint8_t { kPubmedXml, kJsonl, kFixture };

std::string_view SourceName(Source source);
std::optional<Source> ParseSource(std::string_view name);

// One abstract. A record with no sections is a title-only record.
struct AbstractRecord {
  std::string pmid;
  std::string title;
  std::vector<Section> sections;
  std::optional<std::string> language;
  Source source = Source::kFixture;

  bool title_only() const { return sections.empty(); }
  bool operator==(const AbstractRecord &) const = default;
};

enum class CorpusStage : uint8_t {
  kRaw,
  kStage1,
  kStage2,
  kStage3,
  kSegmented,
  kNormalized,
};

std::string_view CorpusStageName(CorpusStage stage);

struct CorpusManifest {
  std::size_t record_count = 0;
  CorpusStage stage = CorpusStage::kRaw;
  std::string content_digest;
};

// Orders pmids numerically when both are digit strings, lexicographically
// otherwise.
bool PmidLess(std::string_view a, std::string_view b);

// Invariant violations of a single record, empty when valid.
std::vector<std::string> ValidateRecord(const AbstractRecord &record);

// Per-record violations plus pmid uniqueness.
std::vector<std::string> ValidateCorpus(
    const std::vector<AbstractRecord> &records);

// True for records without a language tag or tagged as English.
bool IsEnglish(const AbstractRecord &record);

// Text of all sections joined by single spaces.
std::string AbstractBody(const AbstractRecord &record);

}  // namespace effcorp

#endif  // EFFCORP_RECORD_H_
