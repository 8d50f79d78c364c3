// SPDX-License-Identifier: MIT

#include "qpredict/ml/classifier.hpp"

#include "qpredict/errors.hpp"

namespace qpredict::ml {

std::vector<int> Classifier::predict_top_k(std::span<const double> x, std::size_t k) const {
  if (k < 1 || k > static_cast<std::size_t>(num_classes_)) {
    throw ModelError("top-k needs 1 <= k <= " + std::to_string(num_classes_));
  }
  auto order = rank_descending(scores(x));
  order.resize(k);
  return order;
}

std::string ClassifierConfig::describe() const {
  auto depth = [](int d) { return d < 0 ? std::string("none") : std::to_string(d); };
  if (name == "rf") {
    return "n_trees=" + std::to_string(forest.n_trees) + " max_depth=" + depth(forest.max_depth) +
           " min_samples_leaf=" + std::to_string(forest.min_samples_leaf);
  }
  if (name == "dt") {
    return "max_depth=" + depth(forest.max_depth) +
           " min_samples_leaf=" + std::to_string(forest.min_samples_leaf);
  }
  if (name == "knn") {
    return "k=" + std::to_string(k);
  }
  return "default";
}

std::unique_ptr<Classifier> make_classifier(const ClassifierConfig& config) {
  if (config.name == "rf") {
    return std::make_unique<RandomForestClassifier>(config.forest, config.seed, config.jobs);
  }
  if (config.name == "dt") {
    return std::make_unique<DecisionTreeClassifier>(config.forest.max_depth,
                                                    config.forest.min_samples_leaf);
  }
  if (config.name == "knn") {
    return std::make_unique<KnnClassifier>(config.k);
  }
  if (config.name == "nb") {
    return std::make_unique<NaiveBayesClassifier>();
  }
  throw ModelError("unknown classifier '" + config.name + "' (expected rf, dt, knn or nb)");
}

RandomForestClassifier::RandomForestClassifier(ForestModel model, std::string name)
    : params_(model.params), seed_(model.seed), name_(std::move(name)), model_(std::move(model)) {
  num_classes_ = model_.num_classes();
}

void RandomForestClassifier::fit(const Matrix& X, std::span<const int> y, int num_classes) {
  model_ = fit_forest(X, y, num_classes, params_, seed_, jobs_);
  num_classes_ = num_classes;
}

std::vector<double> RandomForestClassifier::scores(std::span<const double> x) const {
  return model_.vote_shares(x);
}

namespace {

void check_width(const Predictor& p, std::span<const double> x) {
  if (!p.classifier) {
    throw ModelError("predictor has no classifier");
  }
  if (x.size() != p.schema.size()) {
    throw ModelError("feature vector has " + std::to_string(x.size()) +
                     " values, model schema has " + std::to_string(p.schema.size()));
  }
}

}  // namespace

const std::string& Predictor::predict(std::span<const double> x) const {
  check_width(*this, x);
  return label_space.at(static_cast<std::size_t>(classifier->predict(x)));
}

std::vector<std::string> Predictor::predict_top_k(std::span<const double> x,
                                                  std::size_t k) const {
  check_width(*this, x);
  std::vector<std::string> out;
  for (int c : classifier->predict_top_k(x, k)) {
    out.push_back(label_space.at(static_cast<std::size_t>(c)));
  }
  return out;
}

std::vector<double> Predictor::features_of(const Circuit& c) const {
  return extract_features(c, schema).values;
}

const ForestModel* Predictor::forest() const {
  const auto* rf = dynamic_cast<const RandomForestClassifier*>(classifier.get());
  return rf ? &rf->model() : nullptr;
}

}  // namespace qpredict::ml
