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

// Reader for the PubMed article-set XML subset used by the corpus: PMID,
// ArticleTitle, Language and the AbstractText blocks (with their Label or
// NlmCategory attributes). Everything else is ignored.

#ifndef EFFCORP_PUBMED_XML_H_
#define EFFCORP_PUBMED_XML_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "effcorp/record.h"

namespace effcorp {

struct SkippedArticle {
  std::size_t article_index = 0;  // 0-based position in the document
  std::string pmid;               // may be empty
  std::string reason;
};

struct PubmedParseResult {
  std::vector<AbstractRecord> records;
  std::vector<SkippedArticle> skipped;
};

// Parses one article-set document. Gzip-compressed input is detected by its
// magic bytes and inflated first. Throws ParseError (location = byte offset)
// on malformed XML.
PubmedParseResult ParsePubmedXml(std::string_view bytes);

// Inflates gzip/zlib data; returns the input unchanged when it is not
// compressed.
std::string MaybeGunzip(std::string_view bytes);

}  // namespace effcorp

#endif  // EFFCORP_PUBMED_XML_H_
