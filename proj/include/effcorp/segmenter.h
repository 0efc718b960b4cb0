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

#ifndef EFFCORP_SEGMENTER_H_
#define EFFCORP_SEGMENTER_H_

#include <map>
#include <string>
#include <string_view>

#include "effcorp/record.h"

namespace effcorp {

// Synonym table from normalized raw headings to canonical labels.
//
// File format, one entry per line:
//   raw_label <TAB> canonical[,canonical]
// '#' starts a comment line.
class LabelMap {
 public:
  // How headings naming several sections ("METHODS AND RESULTS") map.
  enum class CombinedMode {
    kUnion,      // union of the parts
    kExclusive,  // Others
  };

  // Built-in synonyms for background/objective/aim/introduction/purpose,
  // methods/design/setting, results/findings, conclusions/interpretation/
  // discussion.
  static LabelMap Default();

  // Throws IoError or ParseError (location = line number).
  static LabelMap Load(const std::string &path);

  void Add(std::string_view raw, LabelSet labels);

  // Lowercased, punctuation-stripped heading looked up whole first, then
  // split on "and", "&" and "/" with the longest known runs of parts
  // mapped individually. Unknown, empty, "none" and "unassigned" headings
  // give {Others}. Never returns an empty set.
  LabelSet Map(std::string_view raw) const;

  void set_combined_mode(CombinedMode mode) { mode_ = mode; }
  CombinedMode combined_mode() const { return mode_; }

  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, LabelSet> table_;
  CombinedMode mode_ = CombinedMode::kUnion;
};

// Lowercase, turn '&' and '/' into the word "and", replace other
// punctuation by spaces, collapse whitespace.
std::string NormalizeHeading(std::string_view raw);

// Maps labels of labelled sections. When no section carries a raw label,
// each text block is split on inline headings ("BACKGROUND:") that start a
// sentence; text before the first heading becomes an Others section.
// Section texts are substrings of the original blocks. Sentence spans are
// recomputed for every section.
AbstractRecord DetectSections(const AbstractRecord &record, const LabelMap &map);

// Section texts whose label set intersects `labels`, in document order,
// joined by single spaces.
std::string SelectText(const AbstractRecord &record, LabelSet labels);

}  // namespace effcorp

#endif  // EFFCORP_SEGMENTER_H_
