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

#include "effcorp/features.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "effcorp/error.h"

namespace effcorp {

Vocabulary Vocabulary::Build(const std::vector<std::vector<std::string>> &documents,
                             std::size_t min_df) {
  if (documents.empty()) throw ValidationError("cannot build a vocabulary from no documents");
  if (min_df == 0) throw ValidationError("min_df must be at least 1");
  std::map<std::string, std::size_t> df;
  for (const auto &doc : documents) {
    for (const std::string &token : std::set<std::string>(doc.begin(), doc.end())) ++df[token];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto &[token, count] : df) {
    if (count >= min_df) kept.emplace_back(token, count);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  std::vector<std::size_t> counts;
  for (auto &[token, count] : kept) {
    tokens.push_back(token);
    counts.push_back(count);
  }
  return Vocabulary(std::move(tokens), std::move(counts), min_df);
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> df,
                       std::size_t min_df)
    : tokens_(std::move(tokens)), df_(std::move(df)), min_df_(min_df) {
  if (tokens_.size() != df_.size()) {
    throw ValidationError("vocabulary tokens and document frequencies differ in length");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw ValidationError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::Index(const std::string &token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json Vocabulary::ToJson() const {
  return {{"tokens", tokens_}, {"df", df_}, {"min_df", min_df_}};
}

Vocabulary Vocabulary::FromJson(const nlohmann::json &json) {
  try {
    return Vocabulary(json.at("tokens").get<std::vector<std::string>>(),
                      json.at("df").get<std::vector<std::size_t>>(),
                      json.at("min_df").get<std::size_t>());
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("bad vocabulary: ") + e.what());
  }
}

std::string_view FeatureModeName(FeatureMode mode) {
  return mode == FeatureMode::kCounts ? "counts" : "binary";
}

std::optional<FeatureMode> ParseFeatureMode(std::string_view name) {
  if (name == "counts") return FeatureMode::kCounts;
  if (name == "binary") return FeatureMode::kBinary;
  return std::nullopt;
}

FeatureVector Vectorize(const std::vector<std::string> &tokens,
                        const Vocabulary &vocabulary, FeatureMode mode) {
  std::map<uint32_t, double> counts;
  for (const std::string &token : tokens) {
    if (auto index = vocabulary.Index(token)) counts[static_cast<uint32_t>(*index)] += 1.0;
  }
  FeatureVector v;
  v.mode = mode;
  v.dimension = vocabulary.size();
  for (auto [index, count] : counts) {
    v.entries.emplace_back(index, mode == FeatureMode::kBinary ? 1.0 : count);
  }
  return v;
}

std::vector<std::string> BagOfWords(std::string_view text, const StopwordSet *stopwords) {
  return TokenStrings(text, stopwords);
}

}  // namespace effcorp
