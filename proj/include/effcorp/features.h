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

#ifndef EFFCORP_FEATURES_H_
#define EFFCORP_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "effcorp/text.h"

namespace effcorp {

class Vocabulary {
 public:
  // Tokens with document frequency >= min_df, indexed by (df descending,
  // token ascending). Throws ValidationError for an empty corpus or
  // min_df == 0.
  static Vocabulary Build(const std::vector<std::vector<std::string>> &documents,
                          std::size_t min_df = 1);

  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> df,
             std::size_t min_df);

  std::optional<std::size_t> Index(const std::string &token) const;

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string> &tokens() const { return tokens_; }
  const std::vector<std::size_t> &df() const { return df_; }
  std::size_t min_df() const { return min_df_; }

  nlohmann::json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json &json);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
  std::size_t min_df_ = 1;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class FeatureMode : uint8_t { kCounts, kBinary };

std::string_view FeatureModeName(FeatureMode mode);
std::optional<FeatureMode> ParseFeatureMode(std::string_view name);

// Sparse vector with strictly increasing indices and positive values.
struct FeatureVector {
  std::vector<std::pair<uint32_t, double>> entries;
  FeatureMode mode = FeatureMode::kCounts;
  std::size_t dimension = 0;
};

// Out-of-vocabulary tokens are dropped.
FeatureVector Vectorize(const std::vector<std::string> &tokens,
                        const Vocabulary &vocabulary, FeatureMode mode);

// Bag-of-words tokens: normalized word tokens, punctuation dropped,
// stopwords removed only when `stopwords` is given.
std::vector<std::string> BagOfWords(std::string_view text,
                                    const StopwordSet *stopwords = nullptr);

}  // namespace effcorp

#endif  // EFFCORP_FEATURES_H_
