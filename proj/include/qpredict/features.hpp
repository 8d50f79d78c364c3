// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qpredict {

/// Exact non-negative fraction. Composite metrics are ratios of integer
/// counts, so they are computed exactly and converted at the end.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  Ratio reduced() const;
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num * b.den == b.num * a.den;
  }
};

Ratio program_communication(const Circuit& c);
Ratio critical_depth(const Circuit& c);
Ratio entanglement_ratio(const Circuit& c);
/// Clamped to [0, 1].
Ratio parallelism(const Circuit& c);
Ratio liveness(const Circuit& c);

/// Ordered feature names. `pruned` lists names removed because they were
/// zero over the whole training set.
struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<std::string> pruned;

  std::size_t size() const { return names.size(); }
  /// Index of `name` in `names`, or -1.
  long index_of(const std::string& name) const;
  bool operator==(const FeatureSchema&) const = default;
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> schema;
};

/// num_qubits, depth, one count_<gate> per standard gate kind, then the
/// five composite metrics.
const FeatureSchema& full_feature_schema();

/// Values for every name in `schema`, which must be a subset of the full
/// schema.
FeatureVector extract_features(const Circuit& c,
                               const FeatureSchema& schema = full_feature_schema());

/// Drops the columns that are zero in every row. Rows follow `schema`.
FeatureSchema prune_constant_features(const FeatureSchema& schema,
                                      std::span<const std::vector<double>> rows);

/// Selects the columns of `target` out of rows laid out by `source`.
std::vector<double> project(std::span<const double> row,
                            const FeatureSchema& source,
                            const FeatureSchema& target);

/// Per-column z-score transform. Zero-variance columns pass through.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> stddev)
      : mean_(std::move(mean)), stddev_(std::move(stddev)) {}

  static Standardizer fit(std::span<const std::vector<double>> rows);

  std::vector<double> transform(std::span<const double> row) const;
  std::vector<std::vector<double>> transform(
      std::span<const std::vector<double>> rows) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

/// Header = schema names, plus a trailing `label` column when `labels` is
/// non-empty. Values use round-trip precision.
void write_feature_csv(const std::string& path, const FeatureSchema& schema,
                       std::span<const std::vector<double>> rows,
                       std::span<const std::string> labels = {});

struct FeatureTable {
  FeatureSchema schema;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;  ///< empty when the file had no label column
};

FeatureTable read_feature_csv(const std::string& path);

}  // namespace qpredict
