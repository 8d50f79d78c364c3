// SPDX-License-Identifier: MIT

#include "qpredict/ml/tree.hpp"

#include "qpredict/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qpredict::ml {

double gini(std::span<const double> counts) {
  double total = 0.0;
  double sumsq = 0.0;
  for (double c : counts) {
    total += c;
    sumsq += c * c;
  }
  return total > 0.0 ? 1.0 - sumsq / (total * total) : 0.0;
}

int argmax(std::span<const double> v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

std::vector<int> rank_descending(std::span<const double> v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
  return idx;
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(feature.begin(), feature.end(),
                                                [](int f) { return f < 0; }));
}

int Tree::depth() const {
  if (feature.empty()) return 0;
  std::vector<int> level(size(), 0);
  int deepest = 0;
  // Children always have larger indices than their parent.
  for (std::size_t i = 0; i < size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!is_leaf(i)) {
      level[left[i]] = level[i] + 1;
      level[right[i]] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t Tree::leaf_for(std::span<const double> x) const {
  std::size_t node = 0;
  while (!is_leaf(node)) {
    node = static_cast<std::size_t>(x[feature[node]] <= threshold[node] ? left[node]
                                                                          : right[node]);
  }
  return node;
}

int Tree::predict(std::span<const double> x) const { return argmax(histogram[leaf_for(x)]); }

std::vector<double> Tree::impurity_decrease() const {
  std::vector<double> out(static_cast<std::size_t>(num_features), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    if (is_leaf(i)) continue;
    const double dec = samples[i] * impurity[i] - samples[left[i]] * impurity[left[i]] -
                       samples[right[i]] * impurity[right[i]];
    out[feature[i]] += std::max(0.0, dec);
  }
  return out;
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double weighted = std::numeric_limits<double>::infinity();
};

class Builder {
 public:
  Builder(const Matrix& X, std::span<const int> y, int num_classes, const TreeParams& params,
          CounterRng& rng)
      : X_(X), y_(y), k_(num_classes), params_(params), rng_(rng) {
    tree_.num_features = static_cast<int>(X.front().size());
    tree_.num_classes = num_classes;
    const int f = tree_.num_features;
    m_ = params.max_features == kAllFeatures
             ? f
             : (params.max_features == 0 ? static_cast<int>(std::ceil(std::sqrt(f)))
                                         : std::min(params.max_features, f));
  }

  Tree run(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int new_node() {
    tree_.feature.push_back(-1);
    tree_.threshold.push_back(0.0);
    tree_.left.push_back(-1);
    tree_.right.push_back(-1);
    tree_.samples.push_back(0.0);
    tree_.impurity.push_back(0.0);
    tree_.histogram.emplace_back();
    return static_cast<int>(tree_.size()) - 1;
  }

  void best_on_feature(const std::vector<std::size_t>& rows, int f, Split& best) {
    const std::size_t n = rows.size();
    const double min_leaf = params_.min_samples_leaf;
    sorted_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      sorted_[i] = {X_[rows[i]][f], y_[rows[i]]};
    }
    std::sort(sorted_.begin(), sorted_.end());
    if (sorted_.front().first == sorted_.back().first) return;

    std::vector<double> lc(static_cast<std::size_t>(k_), 0.0);
    std::vector<double> rc(static_cast<std::size_t>(k_), 0.0);
    for (const auto& s : sorted_) rc[s.second] += 1.0;
    double lsq = 0.0;
    double rsq = 0.0;
    for (double c : rc) rsq += c * c;

    for (std::size_t i = 0; i + 1 < n; ++i) {
      const int c = sorted_[i].second;
      lsq += 2.0 * lc[c] + 1.0;
      rsq -= 2.0 * rc[c] - 1.0;
      lc[c] += 1.0;
      rc[c] -= 1.0;
      const double nl = static_cast<double>(i + 1);
      const double nr = static_cast<double>(n - i - 1);
      if (sorted_[i].first == sorted_[i + 1].first) continue;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double w = (nl - lsq / nl) + (nr - rsq / nr);
      if (w < best.weighted - 1e-9) {
        double thr = sorted_[i].first + (sorted_[i + 1].first - sorted_[i].first) / 2.0;
        if (thr >= sorted_[i + 1].first) thr = sorted_[i].first;
        best = {f, thr, w};
      }
    }
  }

  Split find_split(const std::vector<std::size_t>& rows) {
    const int f = tree_.num_features;
    Split best;
    if (m_ >= f) {
      for (int j = 0; j < f; ++j) best_on_feature(rows, j, best);
      return best;
    }
    std::vector<int> perm(static_cast<std::size_t>(f));
    std::iota(perm.begin(), perm.end(), 0);
    rng_.shuffle(perm);
    std::vector<int> batch(perm.begin(), perm.begin() + m_);
    std::sort(batch.begin(), batch.end());
    for (int j : batch) best_on_feature(rows, j, best);
    for (std::size_t i = static_cast<std::size_t>(m_); best.feature < 0 && i < perm.size(); ++i) {
      best_on_feature(rows, perm[i], best);
    }
    return best;
  }

  int grow(std::vector<std::size_t> rows, int depth) {
    const int node = new_node();
    std::vector<double> counts(static_cast<std::size_t>(k_), 0.0);
    for (std::size_t r : rows) counts[y_[r]] += 1.0;
    const double imp = gini(counts);
    tree_.samples[node] = static_cast<double>(rows.size());
    tree_.impurity[node] = imp;

    const bool depth_stop = params_.max_depth >= 0 && depth >= params_.max_depth;
    const bool size_stop =
        rows.size() < 2 * static_cast<std::size_t>(std::max(1, params_.min_samples_leaf));
    Split split;
    if (imp > 0.0 && !depth_stop && !size_stop) {
      split = find_split(rows);
    }
    if (split.feature < 0) {
      tree_.histogram[node] = std::move(counts);
      return node;
    }
    std::vector<std::size_t> lrows;
    std::vector<std::size_t> rrows;
    for (std::size_t r : rows) {
      (X_[r][split.feature] <= split.threshold ? lrows : rrows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    tree_.feature[node] = split.feature;
    tree_.threshold[node] = split.threshold;
    const int l = grow(std::move(lrows), depth + 1);
    tree_.left[node] = l;
    const int r = grow(std::move(rrows), depth + 1);
    tree_.right[node] = r;
    return node;
  }

  const Matrix& X_;
  std::span<const int> y_;
  int k_;
  TreeParams params_;
  CounterRng& rng_;
  int m_ = 0;
  Tree tree_;
  std::vector<std::pair<double, int>> sorted_;
};

void check_inputs(const Matrix& X, std::span<const int> y, int num_classes) {
  if (X.empty()) {
    throw ModelError("cannot fit on an empty dataset");
  }
  if (X.size() != y.size()) {
    throw ModelError("feature rows and labels differ in length");
  }
  if (num_classes < 1) {
    throw ModelError("need at least one class");
  }
  const std::size_t f = X.front().size();
  if (f == 0) {
    throw ModelError("cannot fit without features");
  }
  for (const auto& row : X) {
    if (row.size() != f) throw ModelError("feature rows have inconsistent widths");
  }
  for (int label : y) {
    if (label < 0 || label >= num_classes) throw ModelError("label index out of range");
  }
}

}  // namespace

Tree fit_tree(const Matrix& X, std::span<const int> y, int num_classes,
              const TreeParams& params, std::span<const std::size_t> rows, CounterRng& rng) {
  check_inputs(X, y, num_classes);
  if (rows.empty()) {
    throw ModelError("cannot fit a tree on zero rows");
  }
  Builder b(X, y, num_classes, params, rng);
  return b.run({rows.begin(), rows.end()});
}

Tree fit_tree(const Matrix& X, std::span<const int> y, int num_classes,
              const TreeParams& params) {
  std::vector<std::size_t> rows(X.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  CounterRng rng(0);
  return fit_tree(X, y, num_classes, params, rows, rng);
}

}  // namespace qpredict::ml
