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

#ifndef EFFCORP_TESTS_ORACLES_H_
#define EFFCORP_TESTS_ORACLES_H_

// Reference computations written independently of the library, shared by
// the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "effcorp/features.h"
#include "effcorp/model.h"

namespace effcorp::testing {

using Document = std::vector<std::string>;

// Posterior of each class for `test` by direct products of probabilities.
// The vocabulary is every token seen in training.
inline std::vector<double> BruteForcePosterior(bool bernoulli, const std::vector<Document> &train,
                                               const std::vector<std::string> &labels,
                                               const std::vector<std::string> &classes,
                                               const Document &test, double alpha) {
  std::set<std::string> vocab;
  for (const Document &d : train) vocab.insert(d.begin(), d.end());
  const double v = static_cast<double>(vocab.size());
  std::vector<double> joint;
  for (const std::string &c : classes) {
    double docs = 0, tokens = 0;
    std::map<std::string, double> count, df;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (labels[i] != c) continue;
      docs += 1;
      for (const std::string &t : train[i]) {
        count[t] += 1;
        tokens += 1;
      }
      for (const std::string &t : std::set<std::string>(train[i].begin(), train[i].end())) df[t] += 1;
    }
    double p = docs / static_cast<double>(train.size());
    if (bernoulli) {
      std::set<std::string> present(test.begin(), test.end());
      for (const std::string &t : vocab) {
        double theta = (df[t] + alpha) / (docs + 2 * alpha);
        p *= present.contains(t) ? theta : 1 - theta;
      }
    } else {
      for (const std::string &t : test) {
        if (vocab.contains(t)) p *= (count[t] + alpha) / (tokens + alpha * v);
      }
    }
    joint.push_back(p);
  }
  double total = 0;
  for (double j : joint) total += j;
  for (double &j : joint) j /= total;
  return joint;
}

struct NbOracleResult {
  std::size_t corpora = 0;
  std::size_t predictions = 0;
  double max_error = 0.0;
};

// Every two-class corpus of one to four documents drawn with repetition
// from the nine non-empty bags of at most two tokens over {a, b, c}.
// Compares the model's posteriors against BruteForcePosterior.
inline NbOracleResult NbOracle(ModelKind kind, double alpha = 1.0) {
  const bool bernoulli = kind == ModelKind::kBernoulliNb;
  std::vector<Document> bags;
  const std::vector<std::string> tokens = {"a", "b", "c"};
  for (const std::string &t : tokens) bags.push_back({t});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) bags.push_back({tokens[i], tokens[j]});
  }
  std::vector<Document> tests = bags;
  tests.push_back({});
  tests.push_back({"a", "a", "c"});
  tests.push_back({"z", "b"});

  const std::vector<std::string> classes = {"P", "N"};
  const std::size_t items = bags.size() * 2;  // (bag, label)
  NbOracleResult result;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> walk = [&](std::size_t from) {
    if (!pick.empty()) {
      std::vector<Document> train;
      std::vector<std::string> labels;
      for (std::size_t item : pick) {
        train.push_back(bags[item / 2]);
        labels.push_back(classes[item % 2]);
      }
      bool both = std::count(labels.begin(), labels.end(), "P") > 0 &&
                  std::count(labels.begin(), labels.end(), "N") > 0;
      if (both) {
        Vocabulary vocab = Vocabulary::Build(train);
        std::vector<FeatureVector> vectors;
        for (const Document &d : train) vectors.push_back(Vectorize(d, vocab, ModeFor(kind)));
        TrainConfig config;
        config.alpha = alpha;
        Model model = Model::Train(kind, vectors, labels, vocab, config, classes);
        ++result.corpora;
        for (const Document &t : tests) {
          Prediction p = model.Predict(model.Featurize(t));
          std::vector<double> expected = BruteForcePosterior(bernoulli, train, labels, classes, t, alpha);
          for (std::size_t c = 0; c < classes.size(); ++c) {
            result.max_error = std::max(result.max_error, std::fabs(std::exp(p.scores[c]) - expected[c]));
          }
          ++result.predictions;
        }
      }
    }
    if (pick.size() == 4) return;
    for (std::size_t item = from; item < items; ++item) {
      pick.push_back(item);
      walk(item);
      pick.pop_back();
    }
  };
  walk(0);
  return result;
}

struct SeparableSet {
  std::vector<FeatureVector> vectors;
  std::vector<std::string> labels;
  Vocabulary vocabulary;
};

// 300 points, 100 per class, uniformly within +-0.9 of (8,1), (1,8) and
// (8,8). Each class is linearly separable from the other two.
inline SeparableSet MakeSeparableSet(uint64_t seed = 7) {
  SeparableSet set;
  set.vocabulary = Vocabulary({"x", "y"}, {300, 300}, 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.9, 0.9);
  const double centers[3][2] = {{8, 1}, {1, 8}, {8, 8}};
  const char *names[3] = {"east", "north", "far"};
  for (int i = 0; i < 300; ++i) {
    int c = i % 3;
    FeatureVector v;
    v.mode = FeatureMode::kCounts;
    v.dimension = 2;
    v.entries = {{0, centers[c][0] + jitter(rng)}, {1, centers[c][1] + jitter(rng)}};
    set.vectors.push_back(v);
    set.labels.push_back(names[c]);
  }
  return set;
}

inline double TrainingAccuracy(const Model &model, const std::vector<FeatureVector> &vectors,
                               const std::vector<std::string> &labels) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) hits += model.Predict(vectors[i]).label == labels[i];
  return static_cast<double>(hits) / static_cast<double>(vectors.size());
}

}  // namespace effcorp::testing

#endif  // EFFCORP_TESTS_ORACLES_H_
