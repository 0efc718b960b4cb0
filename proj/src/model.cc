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

#include "effcorp/model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/random.h"
#include "effcorp/record.h"

namespace effcorp {

namespace {

constexpr double kMinScale = 1e-9;

double Dot(const std::vector<double> &w, const FeatureVector &x) {
  double sum = 0.0;
  for (auto [index, value] : x.entries) sum += w[index] * value;
  return sum;
}

void CheckVector(const FeatureVector &v, std::size_t dimension) {
  if (v.dimension != dimension) {
    throw ValidationError("feature vector has dimension " + std::to_string(v.dimension) +
                          ", model expects " + std::to_string(dimension));
  }
  for (std::size_t i = 0; i < v.entries.size(); ++i) {
    if (v.entries[i].first >= dimension ||
        (i > 0 && v.entries[i].first <= v.entries[i - 1].first)) {
      throw ValidationError("feature indices must be increasing and below the dimension");
    }
  }
}

std::size_t ArgMax(const std::vector<double> &scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMultinomialNb: return "multinomial_nb";
    case ModelKind::kBernoulliNb: return "bernoulli_nb";
    case ModelKind::kLinearSvm: return "linear_svm";
  }
  return "";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  if (name == "multinomial_nb" || name == "mnb") return ModelKind::kMultinomialNb;
  if (name == "bernoulli_nb" || name == "bnb") return ModelKind::kBernoulliNb;
  if (name == "linear_svm" || name == "svm") return ModelKind::kLinearSvm;
  return std::nullopt;
}

FeatureMode ModeFor(ModelKind kind) {
  return kind == ModelKind::kBernoulliNb ? FeatureMode::kBinary : FeatureMode::kCounts;
}

nlohmann::json TrainConfigToJson(const TrainConfig &config) {
  return {{"alpha", config.alpha},
          {"lambda", config.lambda},
          {"epochs", config.epochs},
          {"seed", config.seed}};
}

std::vector<std::string> DeriveClasses(const std::vector<std::string> &labels) {
  std::set<std::string> distinct(labels.begin(), labels.end());
  bool polar = std::all_of(distinct.begin(), distinct.end(), [](const std::string &l) {
    return ParsePolarity(l).has_value();
  });
  if (!polar) return {distinct.begin(), distinct.end()};
  std::vector<std::string> classes;
  for (Polarity p : kAllPolarities) {
    std::string name(PolarityName(p));
    if (distinct.contains(name)) classes.push_back(name);
  }
  return classes;
}

Model Model::Train(ModelKind kind, const std::vector<FeatureVector> &vectors,
                   const std::vector<std::string> &labels, Vocabulary vocabulary,
                   const TrainConfig &config,
                   std::optional<std::vector<std::string>> classes) {
  if (vectors.size() != labels.size()) {
    throw ValidationError("got " + std::to_string(vectors.size()) + " vectors and " +
                          std::to_string(labels.size()) + " labels");
  }
  Model m;
  m.kind_ = kind;
  m.vocabulary_ = std::move(vocabulary);
  m.config_ = config;
  m.mode_ = ModeFor(kind);
  m.classes_ = classes ? *classes : DeriveClasses(labels);
  if (m.classes_.size() < 2) {
    throw ValidationError("training needs at least two classes, got " +
                          std::to_string(m.classes_.size()));
  }
  if (std::set<std::string>(m.classes_.begin(), m.classes_.end()).size() != m.classes_.size()) {
    throw ValidationError("duplicate class name");
  }
  if (kind != ModelKind::kLinearSvm && !(config.alpha > 0.0)) {
    throw ValidationError("alpha must be positive");
  }
  if (kind == ModelKind::kLinearSvm && (!(config.lambda > 0.0) || config.epochs < 1)) {
    throw ValidationError("lambda must be positive and epochs at least 1");
  }

  std::vector<std::size_t> label_index;
  std::vector<std::size_t> per_class(m.classes_.size(), 0);
  for (const std::string &label : labels) {
    auto it = std::find(m.classes_.begin(), m.classes_.end(), label);
    if (it == m.classes_.end()) throw ValidationError("label '" + label + "' is not a class");
    label_index.push_back(static_cast<std::size_t>(it - m.classes_.begin()));
    ++per_class[label_index.back()];
  }
  for (std::size_t c = 0; c < m.classes_.size(); ++c) {
    if (per_class[c] == 0) {
      throw ValidationError("class '" + m.classes_[c] + "' has no training examples");
    }
  }
  for (const FeatureVector &v : vectors) {
    CheckVector(v, m.vocabulary_.size());
    if (v.mode != m.mode_) {
      throw ValidationError(std::string(ModelKindName(kind)) + " trains on " +
                            std::string(FeatureModeName(m.mode_)) + " vectors");
    }
  }

  if (kind == ModelKind::kLinearSvm) {
    m.TrainSvm(vectors, label_index);
  } else {
    m.TrainNaiveBayes(vectors, label_index);
  }
  return m;
}

void Model::TrainNaiveBayes(const std::vector<FeatureVector> &vectors,
                            const std::vector<std::size_t> &labels) {
  const std::size_t k = classes_.size();
  const std::size_t v = vocabulary_.size();
  const double alpha = config_.alpha;
  std::vector<double> docs(k, 0.0);
  std::vector<std::vector<double>> counts(k, std::vector<double>(v, 0.0));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    docs[labels[i]] += 1.0;
    for (auto [index, value] : vectors[i].entries) counts[labels[i]][index] += value;
  }
  log_prior_.assign(k, 0.0);
  log_likelihood_.assign(k, std::vector<double>(v, 0.0));
  log_complement_.clear();
  for (std::size_t c = 0; c < k; ++c) {
    log_prior_[c] = std::log(docs[c] / static_cast<double>(vectors.size()));
    if (kind_ == ModelKind::kMultinomialNb) {
      double total = 0.0;
      for (double n : counts[c]) total += n;
      double denominator = std::log(total + alpha * static_cast<double>(v));
      for (std::size_t j = 0; j < v; ++j) {
        log_likelihood_[c][j] = std::log(counts[c][j] + alpha) - denominator;
      }
    }
  }
  if (kind_ == ModelKind::kBernoulliNb) {
    log_complement_.assign(k, std::vector<double>(v, 0.0));
    for (std::size_t c = 0; c < k; ++c) {
      double denominator = std::log(docs[c] + 2.0 * alpha);
      for (std::size_t j = 0; j < v; ++j) {
        log_likelihood_[c][j] = std::log(counts[c][j] + alpha) - denominator;
        log_complement_[c][j] = std::log(docs[c] - counts[c][j] + alpha) - denominator;
      }
    }
  }
  PrepareBernoulli();
}

void Model::PrepareBernoulli() {
  absent_sum_.assign(classes_.size(), 0.0);
  if (kind_ != ModelKind::kBernoulliNb) return;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    for (double lc : log_complement_[c]) absent_sum_[c] += lc;
  }
}

void Model::TrainSvm(const std::vector<FeatureVector> &vectors,
                     const std::vector<std::size_t> &labels) {
  const std::size_t k = classes_.size();
  const std::size_t v = vocabulary_.size();
  const std::size_t n = vectors.size();
  const double lambda = config_.lambda;

  std::mt19937_64 rng(config_.seed);
  std::vector<std::vector<std::size_t>> orders;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (int e = 0; e < config_.epochs; ++e) {
    SeededShuffle(&order, &rng);
    orders.push_back(order);
  }

  weights_.assign(k, std::vector<double>(v, 0.0));
  bias_.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    // w = scale * u, b = scale * ub, so the shrink step is O(1).
    std::vector<double> &u = weights_[c];
    double ub = 0.0;
    double scale = 1.0;
    std::size_t t = 0;
    for (const auto &epoch_order : orders) {
      for (std::size_t i : epoch_order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double y = labels[i] == c ? 1.0 : -1.0;
        const double margin = y * scale * (Dot(u, vectors[i]) + ub);
        const double shrink = 1.0 - eta * lambda;
        if (shrink <= 0.0) {
          std::fill(u.begin(), u.end(), 0.0);
          ub = 0.0;
          scale = 1.0;
        } else {
          scale *= shrink;
        }
        if (margin < 1.0) {
          const double step = eta * y / scale;
          for (auto [index, value] : vectors[i].entries) u[index] += step * value;
          ub += step;
        }
        if (scale < kMinScale) {
          for (double &w : u) w *= scale;
          ub *= scale;
          scale = 1.0;
        }
      }
    }
    for (double &w : u) w *= scale;
    bias_[c] = ub * scale;
  }
}

FeatureVector Model::Featurize(const std::vector<std::string> &tokens) const {
  return Vectorize(tokens, vocabulary_, mode_);
}

Prediction Model::Predict(const FeatureVector &x) const {
  CheckVector(x, vocabulary_.size());
  const std::size_t k = classes_.size();
  Prediction p;
  p.scores.assign(k, 0.0);
  if (kind_ == ModelKind::kLinearSvm) {
    for (std::size_t c = 0; c < k; ++c) p.scores[c] = Dot(weights_[c], x) + bias_[c];
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      double joint = log_prior_[c];
      if (kind_ == ModelKind::kMultinomialNb) {
        joint += Dot(log_likelihood_[c], x);
      } else {
        joint += absent_sum_[c];
        for (auto [index, value] : x.entries) {
          if (value > 0.0) joint += log_likelihood_[c][index] - log_complement_[c][index];
        }
      }
      p.scores[c] = joint;
    }
    double top = *std::max_element(p.scores.begin(), p.scores.end());
    double sum = 0.0;
    for (double s : p.scores) sum += std::exp(s - top);
    double log_evidence = top + std::log(sum);
    for (double &s : p.scores) s -= log_evidence;
  }
  p.label = classes_[ArgMax(p.scores)];
  return p;
}

double Model::RegularizedHingeLoss(const std::vector<FeatureVector> &vectors,
                                   const std::vector<std::string> &labels) const {
  if (kind_ != ModelKind::kLinearSvm || vectors.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    double norm = bias_[c] * bias_[c];
    for (double w : weights_[c]) norm += w * w;
    double hinge = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      double y = labels[i] == classes_[c] ? 1.0 : -1.0;
      hinge += std::max(0.0, 1.0 - y * (Dot(weights_[c], vectors[i]) + bias_[c]));
    }
    total += config_.lambda / 2.0 * norm + hinge / static_cast<double>(vectors.size());
  }
  return total;
}

nlohmann::json Model::ToJson() const {
  nlohmann::json params;
  if (kind_ == ModelKind::kLinearSvm) {
    params["weights"] = weights_;
    params["bias"] = bias_;
  } else {
    params["log_prior"] = log_prior_;
    params["log_likelihood"] = log_likelihood_;
    if (kind_ == ModelKind::kBernoulliNb) params["log_complement"] = log_complement_;
  }
  nlohmann::json config = TrainConfigToJson(config_);
  config["preprocessing"] = preprocessing_;
  return {{"format_version", kFormatVersion},
          {"kind", std::string(ModelKindName(kind_))},
          {"classes", classes_},
          {"feature_mode", std::string(FeatureModeName(mode_))},
          {"vocabulary", vocabulary_.ToJson()},
          {"parameters", params},
          {"config", config}};
}

Model Model::FromJson(const nlohmann::json &json) {
  Model m;
  try {
    if (json.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError("unsupported model format_version " +
                            json.at("format_version").dump());
    }
    auto kind = ParseModelKind(json.at("kind").get<std::string>());
    if (!kind) throw ValidationError("unknown model kind " + json.at("kind").dump());
    m.kind_ = *kind;
    m.classes_ = json.at("classes").get<std::vector<std::string>>();
    m.mode_ = ModeFor(m.kind_);
    m.vocabulary_ = Vocabulary::FromJson(json.at("vocabulary"));
    const nlohmann::json &config = json.at("config");
    m.config_.alpha = config.at("alpha").get<double>();
    m.config_.lambda = config.at("lambda").get<double>();
    m.config_.epochs = config.at("epochs").get<int>();
    m.config_.seed = config.at("seed").get<uint64_t>();
    if (config.contains("preprocessing")) m.preprocessing_ = config["preprocessing"];
    const nlohmann::json &params = json.at("parameters");
    const std::size_t k = m.classes_.size();
    const std::size_t v = m.vocabulary_.size();
    auto check_matrix = [&](const std::vector<std::vector<double>> &matrix) {
      if (matrix.size() != k) throw ValidationError("parameter rows do not match classes");
      for (const auto &row : matrix) {
        if (row.size() != v) throw ValidationError("parameter width does not match vocabulary");
      }
    };
    if (m.kind_ == ModelKind::kLinearSvm) {
      m.weights_ = params.at("weights").get<std::vector<std::vector<double>>>();
      m.bias_ = params.at("bias").get<std::vector<double>>();
      check_matrix(m.weights_);
      if (m.bias_.size() != k) throw ValidationError("bias does not match classes");
    } else {
      m.log_prior_ = params.at("log_prior").get<std::vector<double>>();
      m.log_likelihood_ = params.at("log_likelihood").get<std::vector<std::vector<double>>>();
      check_matrix(m.log_likelihood_);
      if (m.log_prior_.size() != k) throw ValidationError("priors do not match classes");
      if (m.kind_ == ModelKind::kBernoulliNb) {
        m.log_complement_ =
            params.at("log_complement").get<std::vector<std::vector<double>>>();
        check_matrix(m.log_complement_);
      }
      m.PrepareBernoulli();
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("bad model file: ") + e.what());
  }
  if (m.classes_.size() < 2) throw ValidationError("model has fewer than two classes");
  return m;
}

std::string Model::Serialize() const { return ToJson().dump(); }

void Model::Save(const std::string &path) const { WriteFile(path, Serialize() + "\n"); }

Model Model::Load(const std::string &path) {
  std::string contents = ReadFile(path);
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(contents);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
  return FromJson(json);
}

}  // namespace effcorp
