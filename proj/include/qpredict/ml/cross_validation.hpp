// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/ml/classifier.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qpredict::ml {

/// Test-fold index lists. Stratified folds deal each class's shuffled
/// samples round-robin; if any present class has fewer samples than
/// folds, plain shuffled folds are used instead and `stratified` is set
/// to false.
std::vector<std::vector<std::size_t>> kfold_indices(std::span<const int> y, int folds,
                                                    std::uint64_t seed, bool* stratified);

/// Built-in grids. rf: n_trees {100,300,500} x max_depth {10,20,none} x
/// min_samples_leaf {1,2,4}; dt: max_depth x min_samples_leaf; knn: k in
/// {1,3,5,7,9}; nb: one point. `small` keeps the rf depth and leaf axes
/// at n_trees 100.
std::vector<ClassifierConfig> default_grid(const std::string& classifier, bool small = false);

struct CvResult {
  std::vector<ClassifierConfig> grid;
  std::vector<double> mean_accuracy;  ///< aligned with grid
  std::size_t best = 0;               ///< first grid point with the top accuracy
  bool stratified = true;
};

/// Every grid point is scored by k-fold accuracy on the same folds.
CvResult grid_search_cv(const Matrix& X, std::span<const int> y, int num_classes,
                        const std::vector<ClassifierConfig>& grid, int folds,
                        std::uint64_t seed);

}  // namespace qpredict::ml
