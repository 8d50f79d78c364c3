// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/features.hpp"
#include "qpredict/ml/tree.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qpredict::ml {

struct ForestParams {
  int n_trees = 500;
  int max_depth = 20;
  int min_samples_leaf = 2;
  /// 0 means ceil(sqrt(n_features)); kAllFeatures disables subsampling.
  int max_features = 0;
  bool bootstrap = true;

  bool operator==(const ForestParams&) const = default;
};

/// Trained ensemble. `schema` and `label_space` describe the columns of
/// the input vectors and the meaning of class indices.
struct ForestModel {
  ForestParams params;
  std::uint64_t seed = 0;
  FeatureSchema schema;
  std::vector<std::string> label_space;
  std::vector<Tree> trees;

  int num_classes() const { return trees.empty() ? 0 : trees.front().num_classes; }

  /// Fraction of trees voting for each class.
  std::vector<double> vote_shares(std::span<const double> x) const;
  /// Majority vote, lowest class index on ties.
  int predict(std::span<const double> x) const;
  const std::string& predict_label(std::span<const double> x) const;
  /// Classes by descending vote share, lowest index on ties.
  std::vector<int> predict_top_k(std::span<const double> x, std::size_t k) const;

  bool operator==(const ForestModel&) const = default;
};

/// Tree t is grown on a bootstrap sample drawn from
/// CounterRng(seed).derive(t), so results do not depend on `jobs`.
ForestModel fit_forest(const Matrix& X, std::span<const int> y, int num_classes,
                       const ForestParams& params, std::uint64_t seed, int jobs = 0);

/// Serial reference for fit_forest; produces identical trees.
ForestModel fit_forest_ref(const Matrix& X, std::span<const int> y, int num_classes,
                           const ForestParams& params, std::uint64_t seed);

struct ImportanceReport {
  std::vector<std::string> features;
  std::vector<double> importance;  ///< normalized mean over trees
  std::vector<double> stddev;      ///< across trees
  /// False when no tree has a split with positive impurity decrease.
  bool has_splits = false;
};

ImportanceReport feature_importance(const ForestModel& model);

/// Model files are CBOR unless the path ends in `.json`.
void save_model(const ForestModel& model, const std::filesystem::path& path);
ForestModel load_model(const std::filesystem::path& path);

}  // namespace qpredict::ml
