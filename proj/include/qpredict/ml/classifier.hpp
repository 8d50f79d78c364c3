// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/features.hpp"
#include "qpredict/ml/forest.hpp"

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qpredict::ml {

/// Common interface of every classifier evaluated by the harness.
/// Class indices are in [0, num_classes).
class Classifier {
 public:
  virtual ~Classifier() = default;

  /// Short name: rf, dt, knn or nb.
  virtual std::string name() const = 0;
  virtual void fit(const Matrix& X, std::span<const int> y, int num_classes) = 0;
  /// Per-class scores; higher is better.
  virtual std::vector<double> scores(std::span<const double> x) const = 0;

  int predict(std::span<const double> x) const { return argmax(scores(x)); }
  std::vector<int> predict_top_k(std::span<const double> x, std::size_t k) const;
  int num_classes() const { return num_classes_; }

 protected:
  int num_classes_ = 0;
};

/// Hyperparameters for any of the four classifiers.
struct ClassifierConfig {
  std::string name = "rf";
  ForestParams forest;
  int k = 1;  ///< neighbours for knn
  std::uint64_t seed = 0;
  int jobs = 0;

  /// e.g. `n_trees=500 max_depth=20 min_samples_leaf=2`.
  std::string describe() const;
};

std::unique_ptr<Classifier> make_classifier(const ClassifierConfig& config);

class RandomForestClassifier : public Classifier {
 public:
  RandomForestClassifier(ForestParams params, std::uint64_t seed, int jobs = 0,
                         std::string name = "rf")
      : params_(params), seed_(seed), jobs_(jobs), name_(std::move(name)) {}
  explicit RandomForestClassifier(ForestModel model, std::string name = "rf");

  std::string name() const override { return name_; }
  void fit(const Matrix& X, std::span<const int> y, int num_classes) override;
  std::vector<double> scores(std::span<const double> x) const override;

  const ForestModel& model() const { return model_; }
  ForestModel& model() { return model_; }

 private:
  ForestParams params_;
  std::uint64_t seed_ = 0;
  int jobs_ = 0;
  std::string name_;
  ForestModel model_;
};

/// A single CART tree on all rows and features, stored as a one-tree forest.
class DecisionTreeClassifier : public RandomForestClassifier {
 public:
  DecisionTreeClassifier(int max_depth, int min_samples_leaf)
      : RandomForestClassifier(tree_params(max_depth, min_samples_leaf), 0, 1, "dt") {}

  static ForestParams tree_params(int max_depth, int min_samples_leaf) {
    return {1, max_depth, min_samples_leaf, kAllFeatures, false};
  }
};

/// Euclidean k-nearest neighbours on internally standardized features.
/// Neighbours are ordered by (distance, training index).
class KnnClassifier : public Classifier {
 public:
  explicit KnnClassifier(int k) : k_(k) {}
  KnnClassifier(int k, Standardizer scaler, Matrix X, std::vector<int> y, int num_classes);

  std::string name() const override { return "knn"; }
  void fit(const Matrix& X, std::span<const int> y, int num_classes) override;
  /// Neighbour vote counts per class.
  std::vector<double> scores(std::span<const double> x) const override;

  int k() const { return k_; }
  const Standardizer& scaler() const { return scaler_; }
  const Matrix& train_x() const { return X_; }
  const std::vector<int>& train_y() const { return y_; }

 private:
  int k_;
  Standardizer scaler_;
  Matrix X_;  ///< standardized
  std::vector<int> y_;
};

/// Gaussian naive Bayes. Priors are (count + 1) / (N + K) over the K
/// classes seen in training; unseen classes score -infinity.
class NaiveBayesClassifier : public Classifier {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  NaiveBayesClassifier() = default;
  NaiveBayesClassifier(std::vector<double> class_count, Matrix mean, Matrix var);

  std::string name() const override { return "nb"; }
  void fit(const Matrix& X, std::span<const int> y, int num_classes) override;
  /// Log posterior up to a shared constant.
  std::vector<double> scores(std::span<const double> x) const override;

  const std::vector<double>& class_count() const { return class_count_; }
  const Matrix& mean() const { return mean_; }
  const Matrix& var() const { return var_; }

 private:
  void update_priors();

  std::vector<double> class_count_;
  std::vector<double> log_prior_;
  Matrix mean_;
  Matrix var_;
};

/// A fitted classifier together with the feature columns it expects and
/// the option ids behind its class indices.
struct Predictor {
  FeatureSchema schema;
  std::vector<std::string> label_space;
  std::uint64_t seed = 0;
  std::shared_ptr<const Classifier> classifier;

  const std::string& predict(std::span<const double> x) const;
  std::vector<std::string> predict_top_k(std::span<const double> x, std::size_t k) const;
  /// Vote shares for forests, normalized scores otherwise.
  std::vector<double> scores(std::span<const double> x) const { return classifier->scores(x); }
  /// Features of `c` in this predictor's schema order.
  std::vector<double> features_of(const Circuit& c) const;
  /// The forest behind rf/dt predictors, or nullptr.
  const ForestModel* forest() const;
};

/// Model file for any classifier; forests share the save_model format.
void save_predictor(const Predictor& p, const std::filesystem::path& path);
Predictor load_predictor(const std::filesystem::path& path);

}  // namespace qpredict::ml
