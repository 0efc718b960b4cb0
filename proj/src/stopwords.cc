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

#include <fstream>

#include "effcorp/error.h"
#include "effcorp/text.h"
#include "effcorp/unicode.h"

namespace effcorp {

namespace {

// Articles, determiners, pronouns, auxiliaries, prepositions, conjunctions
// and a few discourse adverbs. data/stopwords_en.txt holds the same list.
constexpr const char *kStopwords[] = {
    "a", "an", "the", "this", "that", "these", "those", "each", "every",
    "either", "neither", "some", "any", "all", "both", "few", "many", "much",
    "more", "most", "other", "such", "no", "nor", "not", "only", "own",
    "same", "so", "than", "too", "very", "i", "me", "my", "myself", "we",
    "our", "ours", "ourselves", "you", "your", "yours", "he", "him", "his",
    "she", "her", "hers", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "whose", "am",
    "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "can", "could", "may", "might",
    "must", "shall", "should", "will", "would", "of", "on", "in", "for", "to",
    "from", "by", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "up", "down", "out", "off",
    "over", "under", "at", "as", "among", "within", "without", "upon", "via",
    "per", "across", "and", "or", "but", "if", "because", "while", "until",
    "although", "though", "whether", "since", "unless", "whereas", "yet",
    "again", "further", "then", "once", "here", "there", "when", "where",
    "why", "how", "also", "just", "now", "thus", "however", "therefore",
};

}  // namespace

const StopwordSet &DefaultStopwords() {
  static const StopwordSet *set = [] {
    auto *s = new StopwordSet;
    for (const char *w : kStopwords) s->insert(w);
    return s;
  }();
  return *set;
}

StopwordSet LoadStopwords(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file " + path);
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view word = Trim(line);
    if (word.empty() || word.front() == '#') continue;
    set.insert(FoldCase(word));
  }
  return set;
}

}  // namespace effcorp
