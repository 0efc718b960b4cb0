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

// Canonical line-delimited JSON corpus files.
//
// One record per line, keys sorted, no insignificant whitespace:
//
//   {"language":null,"pmid":"123","sections":[{"label_canonical":["Others"],
//    "label_raw":"","sentence_spans":[[0,42]],"text":"..."}],
//    "source":"pubmed_xml","title":"..."}
//
// Sentence spans are UTF-8 byte offsets into the section text.

#ifndef EFFCORP_CORPUS_IO_H_
#define EFFCORP_CORPUS_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "effcorp/record.h"

namespace effcorp {

nlohmann::json RecordToJson(const AbstractRecord &record);

// Throws ValidationError on missing or mistyped fields.
AbstractRecord RecordFromJson(const nlohmann::json &json);

// Canonical one-line serialization, without the trailing newline.
std::string SerializeRecord(const AbstractRecord &record);

// Canonical file contents: one serialized record per line.
std::string SerializeCorpus(const std::vector<AbstractRecord> &records);

// Parses file contents. Throws ParseError naming the 1-based line for
// malformed lines and ValidationError naming both lines for duplicate pmids.
std::vector<AbstractRecord> ParseCorpus(std::string_view contents);

std::vector<AbstractRecord> ReadCorpus(const std::string &path);

// Validates, serializes and writes the corpus; the manifest digest is the
// SHA-256 of the bytes written. Throws ValidationError listing every
// violation, IoError when the path is not writable.
CorpusManifest WriteCorpus(const std::vector<AbstractRecord> &records,
                           const std::string &path,
                           CorpusStage stage = CorpusStage::kRaw);

nlohmann::json ManifestToJson(const CorpusManifest &manifest);

// Splits contents into lines, dropping a trailing empty line and any '\r'.
std::vector<std::string_view> SplitLines(std::string_view contents);

}  // namespace effcorp

#endif  // EFFCORP_CORPUS_IO_H_
