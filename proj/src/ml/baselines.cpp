// SPDX-License-Identifier: MIT

#include "qpredict/errors.hpp"
#include "qpredict/ml/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace qpredict::ml {

KnnClassifier::KnnClassifier(int k, Standardizer scaler, Matrix X, std::vector<int> y,
                             int num_classes)
    : k_(k), scaler_(std::move(scaler)), X_(std::move(X)), y_(std::move(y)) {
  num_classes_ = num_classes;
}

void KnnClassifier::fit(const Matrix& X, std::span<const int> y, int num_classes) {
  if (X.empty() || X.size() != y.size()) {
    throw ModelError("knn needs a non-empty training set with one label per row");
  }
  if (k_ < 1) {
    throw ModelError("knn needs k >= 1");
  }
  scaler_ = Standardizer::fit(X);
  X_ = scaler_.transform(X);
  y_.assign(y.begin(), y.end());
  num_classes_ = num_classes;
}

std::vector<double> KnnClassifier::scores(std::span<const double> x) const {
  if (static_cast<std::size_t>(k_) > X_.size()) {
    throw ModelError("k = " + std::to_string(k_) + " exceeds the " +
                     std::to_string(X_.size()) + " training samples");
  }
  const auto z = scaler_.transform(x);
  std::vector<std::pair<double, std::size_t>> dist(X_.size());
  for (std::size_t i = 0; i < X_.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double diff = X_[i][j] - z[j];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
  std::vector<double> votes(static_cast<std::size_t>(num_classes_), 0.0);
  for (int i = 0; i < k_; ++i) {
    votes[y_[dist[i].second]] += 1.0;
  }
  return votes;
}

NaiveBayesClassifier::NaiveBayesClassifier(std::vector<double> class_count, Matrix mean,
                                           Matrix var)
    : class_count_(std::move(class_count)), mean_(std::move(mean)), var_(std::move(var)) {
  num_classes_ = static_cast<int>(class_count_.size());
  update_priors();
}

void NaiveBayesClassifier::update_priors() {
  double n = 0.0;
  double present = 0.0;
  for (double c : class_count_) {
    n += c;
    if (c > 0) present += 1.0;
  }
  log_prior_.assign(class_count_.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < class_count_.size(); ++c) {
    if (class_count_[c] > 0) log_prior_[c] = std::log((class_count_[c] + 1.0) / (n + present));
  }
}

void NaiveBayesClassifier::fit(const Matrix& X, std::span<const int> y, int num_classes) {
  if (X.empty() || X.size() != y.size()) {
    throw ModelError("naive Bayes needs a non-empty training set with one label per row");
  }
  const std::size_t f = X.front().size();
  const auto k = static_cast<std::size_t>(num_classes);
  class_count_.assign(k, 0.0);
  mean_.assign(k, {});
  var_.assign(k, {});
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    if (mean_[c].empty()) {
      mean_[c].assign(f, 0.0);
      var_[c].assign(f, 0.0);
    }
    class_count_[c] += 1.0;
    for (std::size_t j = 0; j < f; ++j) mean_[c][j] += X[i][j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& m : mean_[c]) m /= class_count_[c];
  }
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (std::size_t j = 0; j < f; ++j) {
      const double d = X[i][j] - mean_[c][j];
      var_[c][j] += d * d;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& v : var_[c]) v = std::max(v / class_count_[c], kVarianceFloor);
  }
  num_classes_ = num_classes;
  update_priors();
}

std::vector<double> NaiveBayesClassifier::scores(std::span<const double> x) const {
  std::vector<double> out(log_prior_);
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (mean_[c].empty()) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - mean_[c][j];
      out[c] -= 0.5 * std::log(2.0 * std::numbers::pi * var_[c][j]) + d * d / (2.0 * var_[c][j]);
    }
  }
  return out;
}

}  // namespace qpredict::ml
