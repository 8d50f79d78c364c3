// SPDX-License-Identifier: MIT

#include "qpredict/ml/cross_validation.hpp"

#include "qpredict/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <numeric>

namespace qpredict::ml {

std::vector<std::vector<std::size_t>> kfold_indices(std::span<const int> y, int folds,
                                                    std::uint64_t seed, bool* stratified) {
  if (folds < 2) {
    throw ModelError("cross-validation needs at least 2 folds");
  }
  if (y.size() < static_cast<std::size_t>(folds)) {
    throw ModelError("cannot split " + std::to_string(y.size()) + " samples into " +
                     std::to_string(folds) + " folds");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  const bool strat = std::all_of(by_class.begin(), by_class.end(), [&](const auto& kv) {
    return kv.second.size() >= static_cast<std::size_t>(folds);
  });
  if (stratified) *stratified = strat;

  const CounterRng base(seed);
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  if (strat) {
    std::size_t offset = 0;
    for (auto& [label, members] : by_class) {
      CounterRng rng = base.derive(static_cast<std::uint64_t>(label));
      rng.shuffle(members);
      for (std::size_t j = 0; j < members.size(); ++j) {
        out[(offset + j) % out.size()].push_back(members[j]);
      }
      offset += members.size();
    }
  } else {
    std::vector<std::size_t> all(y.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    CounterRng rng = base.derive(~std::uint64_t{0});
    rng.shuffle(all);
    const std::size_t n = all.size();
    std::size_t pos = 0;
    for (std::size_t f = 0; f < out.size(); ++f) {
      const std::size_t len = n / out.size() + (f < n % out.size() ? 1 : 0);
      out[f].assign(all.begin() + static_cast<long>(pos),
                    all.begin() + static_cast<long>(pos + len));
      pos += len;
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

std::vector<ClassifierConfig> default_grid(const std::string& classifier, bool small) {
  std::vector<ClassifierConfig> grid;
  if (classifier == "rf") {
    const std::vector<int> trees = small ? std::vector<int>{100} : std::vector<int>{100, 300, 500};
    for (int n : trees) {
      for (int depth : {10, 20, kNoDepthLimit}) {
        for (int leaf : {1, 2, 4}) {
          ClassifierConfig c;
          c.name = "rf";
          c.forest = {n, depth, leaf, 0, true};
          grid.push_back(c);
        }
      }
    }
  } else if (classifier == "dt") {
    for (int depth : {5, 10, 20, kNoDepthLimit}) {
      for (int leaf : {1, 2, 4}) {
        ClassifierConfig c;
        c.name = "dt";
        c.forest = DecisionTreeClassifier::tree_params(depth, leaf);
        grid.push_back(c);
      }
    }
  } else if (classifier == "knn") {
    for (int k : {1, 3, 5, 7, 9}) {
      ClassifierConfig c;
      c.name = "knn";
      c.k = k;
      grid.push_back(c);
    }
  } else if (classifier == "nb") {
    ClassifierConfig c;
    c.name = "nb";
    grid.push_back(c);
  } else {
    throw ModelError("unknown classifier '" + classifier + "' (expected rf, dt, knn or nb)");
  }
  return grid;
}

CvResult grid_search_cv(const Matrix& X, std::span<const int> y, int num_classes,
                        const std::vector<ClassifierConfig>& grid, int folds,
                        std::uint64_t seed) {
  if (grid.empty()) {
    throw ModelError("grid search needs at least one parameter combination");
  }
  if (X.size() != y.size()) {
    throw ModelError("feature rows and labels differ in length");
  }
  CvResult res;
  res.grid = grid;
  const auto test_folds = kfold_indices(y, folds, seed, &res.stratified);
  if (!res.stratified) {
    spdlog::warn("a class has fewer than {} samples; using non-stratified folds", folds);
  }

  std::vector<std::vector<std::size_t>> train_folds;
  for (const auto& test : test_folds) {
    std::vector<bool> held(X.size(), false);
    for (std::size_t i : test) held[i] = true;
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (!held[i]) train.push_back(i);
    }
    train_folds.push_back(std::move(train));
  }

  for (const auto& config : grid) {
    double sum = 0.0;
    for (std::size_t f = 0; f < test_folds.size(); ++f) {
      Matrix tx;
      std::vector<int> ty;
      for (std::size_t i : train_folds[f]) {
        tx.push_back(X[i]);
        ty.push_back(y[i]);
      }
      auto clf = make_classifier(config);
      clf->fit(tx, ty, num_classes);
      std::size_t correct = 0;
      for (std::size_t i : test_folds[f]) {
        if (clf->predict(X[i]) == y[i]) ++correct;
      }
      sum += static_cast<double>(correct) / static_cast<double>(test_folds[f].size());
    }
    res.mean_accuracy.push_back(sum / static_cast<double>(test_folds.size()));
  }
  for (std::size_t i = 1; i < res.mean_accuracy.size(); ++i) {
    if (res.mean_accuracy[i] > res.mean_accuracy[res.best]) res.best = i;
  }
  return res;
}

}  // namespace qpredict::ml
