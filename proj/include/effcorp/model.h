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

// Multinomial and Bernoulli naive Bayes, and one-vs-rest linear SVM
// trained with Pegasos subgradient steps.
//
// Naive Bayes with additive smoothing alpha over V features:
//   multinomial  theta_jc = (N_jc + alpha) / (N_c + alpha V)
//   Bernoulli    p_jc     = (df_jc + alpha) / (n_c + 2 alpha)
// where N_jc is the total count of feature j in class c, N_c the sum over
// j, df_jc the number of class-c documents containing j and n_c the number
// of class-c documents. Priors are class frequencies.

#ifndef EFFCORP_MODEL_H_
#define EFFCORP_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "effcorp/features.h"

namespace effcorp {

enum class ModelKind : uint8_t { kMultinomialNb, kBernoulliNb, kLinearSvm };

std::string_view ModelKindName(ModelKind kind);
// Accepts the full names and mnb, bnb, svm.
std::optional<ModelKind> ParseModelKind(std::string_view name);

// Feature mode each kind trains on.
FeatureMode ModeFor(ModelKind kind);

struct TrainConfig {
  double alpha = 1.0;
  double lambda = 1e-4;
  int epochs = 100;
  uint64_t seed = 42;
};

nlohmann::json TrainConfigToJson(const TrainConfig &config);

struct Prediction {
  std::string label;
  std::vector<double> scores;  // aligned with Model::classes()
};

// Classes in polarity order when every label names a polarity, otherwise
// sorted.
std::vector<std::string> DeriveClasses(const std::vector<std::string> &labels);

class Model {
 public:
  // Throws ValidationError when fewer than two classes are given, a class
  // has no training example, a label is not a class, the vectors do not
  // match the vocabulary or the kind's feature mode, or a
  // hyperparameter is out of range. `classes` defaults to DeriveClasses.
  static Model Train(ModelKind kind, const std::vector<FeatureVector> &vectors,
                     const std::vector<std::string> &labels, Vocabulary vocabulary,
                     const TrainConfig &config = {},
                     std::optional<std::vector<std::string>> classes = std::nullopt);

  // Argmax of the class scores, ties to the earlier class. Scores are
  // normalized log-posteriors for naive Bayes and margins for the SVM.
  // Throws ValidationError on a dimension mismatch.
  Prediction Predict(const FeatureVector &vector) const;

  // Vectorizes `tokens` with the model's vocabulary and mode.
  FeatureVector Featurize(const std::vector<std::string> &tokens) const;

  // Sum over one-vs-rest problems of lambda/2 |w|^2 + mean hinge loss, the
  // bias counted as a weight. Zero for naive Bayes.
  double RegularizedHingeLoss(const std::vector<FeatureVector> &vectors,
                              const std::vector<std::string> &labels) const;

  nlohmann::json ToJson() const;
  static Model FromJson(const nlohmann::json &json);
  // Compact JSON with sorted keys; identical models serialize identically.
  std::string Serialize() const;
  void Save(const std::string &path) const;
  static Model Load(const std::string &path);

  // Free-form description of how documents were turned into tokens,
  // stored under config.preprocessing.
  const nlohmann::json &preprocessing() const { return preprocessing_; }
  void set_preprocessing(nlohmann::json preprocessing) { preprocessing_ = std::move(preprocessing); }

  ModelKind kind() const { return kind_; }
  const std::vector<std::string> &classes() const { return classes_; }
  const Vocabulary &vocabulary() const { return vocabulary_; }
  const TrainConfig &config() const { return config_; }
  FeatureMode mode() const { return mode_; }

  static constexpr int kFormatVersion = 1;

 private:
  void TrainNaiveBayes(const std::vector<FeatureVector> &vectors,
                       const std::vector<std::size_t> &labels);
  void TrainSvm(const std::vector<FeatureVector> &vectors,
                const std::vector<std::size_t> &labels);
  void PrepareBernoulli();

  ModelKind kind_ = ModelKind::kMultinomialNb;
  std::vector<std::string> classes_;
  Vocabulary vocabulary_;
  TrainConfig config_;
  FeatureMode mode_ = FeatureMode::kCounts;
  nlohmann::json preprocessing_ = nlohmann::json::object();

  // Naive Bayes: log_likelihood_ holds log theta (multinomial) or log p
  // (Bernoulli); log_complement_ holds log(1 - p).
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_likelihood_;
  std::vector<std::vector<double>> log_complement_;
  std::vector<double> absent_sum_;

  // SVM.
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
};

}  // namespace effcorp

#endif  // EFFCORP_MODEL_H_
