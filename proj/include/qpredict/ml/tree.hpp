// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qpredict::ml {

/// Row-major samples.
using Matrix = std::vector<std::vector<double>>;

/// Gini impurity 1 - sum p_c^2 of a class-count histogram.
double gini(std::span<const double> counts);

inline constexpr int kNoDepthLimit = -1;
/// `max_features` value selecting every feature at every node.
inline constexpr int kAllFeatures = -1;

struct TreeParams {
  int max_depth = kNoDepthLimit;
  int min_samples_leaf = 1;
  /// Candidate features per node; 0 means ceil(sqrt(n_features)).
  int max_features = kAllFeatures;

  bool operator==(const TreeParams&) const = default;
};

/// CART classification tree stored as parallel node arrays. Node 0 is the
/// root; `feature[i] < 0` marks a leaf. `samples` counts bootstrap
/// duplicates, so it is a weight rather than a count of distinct rows.
struct Tree {
  int num_features = 0;
  int num_classes = 0;
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<double> samples;
  std::vector<double> impurity;
  /// Per-class counts; filled for leaves, empty for split nodes.
  std::vector<std::vector<double>> histogram;

  std::size_t size() const { return feature.size(); }
  bool is_leaf(std::size_t node) const { return feature[node] < 0; }
  std::size_t num_leaves() const;
  int depth() const;

  std::size_t leaf_for(std::span<const double> x) const;
  /// Majority class of the reached leaf, lowest index on ties.
  int predict(std::span<const double> x) const;

  /// Unnormalized weighted impurity decrease per feature.
  std::vector<double> impurity_decrease() const;

  bool operator==(const Tree&) const = default;
};

/// Grows a tree on `rows` (indices into X, duplicates allowed) with
/// `y[i]` in [0, num_classes). Each node takes the split with the lowest
/// weighted child impurity among the candidate features; ties go to the
/// lower feature index, then the lower threshold. When a random feature
/// subset has no valid split, the remaining features are searched in the
/// same random order. `rng` is only consulted when features are subsampled.
Tree fit_tree(const Matrix& X, std::span<const int> y, int num_classes,
              const TreeParams& params, std::span<const std::size_t> rows,
              CounterRng& rng);

/// All rows, every feature, no randomness.
Tree fit_tree(const Matrix& X, std::span<const int> y, int num_classes,
              const TreeParams& params = {});

/// Argmax with the lowest index winning ties.
int argmax(std::span<const double> v);

/// Indices sorted by descending value, lower index first on ties.
std::vector<int> rank_descending(std::span<const double> v);

}  // namespace qpredict::ml
