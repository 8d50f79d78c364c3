// SPDX-License-Identifier: MIT

#include "qpredict/ml/forest.hpp"

#include "qpredict/errors.hpp"

#include <cmath>
#include <exception>

#ifdef QPREDICT_HAVE_OPENMP
#include <omp.h>
#endif

namespace qpredict::ml {

namespace {

Tree grow_one(const Matrix& X, std::span<const int> y, int num_classes, const ForestParams& p,
              std::uint64_t seed, std::size_t t) {
  CounterRng rng = CounterRng(seed).derive(t);
  std::vector<std::size_t> rows(X.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = p.bootstrap ? static_cast<std::size_t>(rng.below(X.size())) : i;
  }
  const TreeParams tp{p.max_depth, p.min_samples_leaf, p.max_features};
  return fit_tree(X, y, num_classes, tp, rows, rng);
}

ForestModel prepare(const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees < 1) {
    throw ModelError("a forest needs at least one tree");
  }
  if (params.min_samples_leaf < 1) {
    throw ModelError("min_samples_leaf must be at least 1");
  }
  ForestModel m;
  m.params = params;
  m.seed = seed;
  m.trees.resize(static_cast<std::size_t>(params.n_trees));
  return m;
}

}  // namespace

ForestModel fit_forest_ref(const Matrix& X, std::span<const int> y, int num_classes,
                           const ForestParams& params, std::uint64_t seed) {
  ForestModel m = prepare(params, seed);
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    m.trees[t] = grow_one(X, y, num_classes, params, seed, t);
  }
  return m;
}

ForestModel fit_forest(const Matrix& X, std::span<const int> y, int num_classes,
                       const ForestParams& params, std::uint64_t seed, int jobs) {
#ifdef QPREDICT_HAVE_OPENMP
  ForestModel m = prepare(params, seed);
  // Surface input errors before entering the parallel region.
  m.trees[0] = grow_one(X, y, num_classes, params, seed, 0);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const long n = static_cast<long>(m.trees.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long t = 1; t < n; ++t) {
    try {
      m.trees[t] = grow_one(X, y, num_classes, params, seed, static_cast<std::size_t>(t));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return m;
#else
  (void)jobs;
  return fit_forest_ref(X, y, num_classes, params, seed);
#endif
}

std::vector<double> ForestModel::vote_shares(std::span<const double> x) const {
  if (trees.empty()) {
    throw ModelError("forest has no trees");
  }
  if (static_cast<int>(x.size()) != trees.front().num_features) {
    throw ModelError("feature vector has " + std::to_string(x.size()) +
                     " values, model expects " + std::to_string(trees.front().num_features));
  }
  std::vector<double> votes(static_cast<std::size_t>(num_classes()), 0.0);
  for (const auto& t : trees) {
    votes[t.predict(x)] += 1.0;
  }
  for (double& v : votes) v /= static_cast<double>(trees.size());
  return votes;
}

int ForestModel::predict(std::span<const double> x) const { return argmax(vote_shares(x)); }

const std::string& ForestModel::predict_label(std::span<const double> x) const {
  const int c = predict(x);
  if (static_cast<std::size_t>(c) >= label_space.size()) {
    throw ModelError("model has no label space");
  }
  return label_space[c];
}

std::vector<int> ForestModel::predict_top_k(std::span<const double> x, std::size_t k) const {
  if (k < 1 || k > static_cast<std::size_t>(num_classes())) {
    throw ModelError("top-k needs 1 <= k <= " + std::to_string(num_classes()));
  }
  auto order = rank_descending(vote_shares(x));
  order.resize(k);
  return order;
}

ImportanceReport feature_importance(const ForestModel& model) {
  ImportanceReport rep;
  if (model.trees.empty()) {
    throw ModelError("forest has no trees");
  }
  const std::size_t f = static_cast<std::size_t>(model.trees.front().num_features);
  for (std::size_t j = 0; j < f; ++j) {
    rep.features.push_back(model.schema.size() == f ? model.schema.names[j]
                                                    : "f" + std::to_string(j));
  }
  std::vector<std::vector<double>> per_tree;
  for (const auto& t : model.trees) {
    auto dec = t.impurity_decrease();
    double total = 0.0;
    for (double v : dec) total += v;
    if (total <= 0.0) continue;
    for (double& v : dec) v /= total;
    per_tree.push_back(std::move(dec));
  }
  rep.importance.assign(f, 0.0);
  rep.stddev.assign(f, 0.0);
  if (per_tree.empty()) {
    return rep;
  }
  rep.has_splits = true;
  const double n = static_cast<double>(per_tree.size());
  for (const auto& row : per_tree) {
    for (std::size_t j = 0; j < f; ++j) rep.importance[j] += row[j] / n;
  }
  for (const auto& row : per_tree) {
    for (std::size_t j = 0; j < f; ++j) {
      const double d = row[j] - rep.importance[j];
      rep.stddev[j] += d * d / n;
    }
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < f; ++j) {
    rep.stddev[j] = std::sqrt(rep.stddev[j]);
    sum += rep.importance[j];
  }
  for (double& v : rep.importance) v /= sum;
  return rep;
}

}  // namespace qpredict::ml
