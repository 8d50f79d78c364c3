// SPDX-License-Identifier: MIT

#include "qpredict/features.hpp"

#include "qpredict/csv.hpp"
#include "qpredict/dag.hpp"
#include "qpredict/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpredict {

Ratio Ratio::reduced() const {
  if (den == 0) {
    return {0, 1};
  }
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

// Circuits on fewer than two qubits have no composite structure; every
// composite metric is 0 for them.

Ratio program_communication(const Circuit& c) {
  const std::int64_t n = c.num_qubits();
  if (n < 2) {
    return {0, 1};
  }
  const InteractionGraph g = interaction_graph(c);
  return {2 * static_cast<std::int64_t>(g.num_edges()), n * (n - 1)};
}

Ratio critical_depth(const Circuit& c) {
  if (c.num_qubits() < 2) {
    return {0, 1};
  }
  const std::vector<bool> critical = on_longest_path(c);
  std::int64_t total = 0;
  std::int64_t on_path = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.ops()[i].is_multi_qubit_gate()) {
      ++total;
      on_path += critical[i] ? 1 : 0;
    }
  }
  return total == 0 ? Ratio{0, 1} : Ratio{on_path, total};
}

Ratio entanglement_ratio(const Circuit& c) {
  const auto gates = static_cast<std::int64_t>(c.gate_count());
  if (c.num_qubits() < 2 || gates == 0) {
    return {0, 1};
  }
  return {static_cast<std::int64_t>(c.multi_qubit_gate_count()), gates};
}

Ratio parallelism(const Circuit& c) {
  const std::int64_t n = c.num_qubits();
  const std::int64_t d = circuit_depth(c).depth;
  if (n < 2 || d == 0) {
    return {0, 1};
  }
  const auto gates = static_cast<std::int64_t>(c.gate_count());
  // (gates / d - 1) / (n - 1), clamped to [0, 1].
  const std::int64_t num = gates - d;
  const std::int64_t den = d * (n - 1);
  if (num <= 0) {
    return {0, 1};
  }
  if (num >= den) {
    return {1, 1};
  }
  return {num, den};
}

Ratio liveness(const Circuit& c) {
  const std::int64_t n = c.num_qubits();
  const std::int64_t d = circuit_depth(c).depth;
  if (n < 2 || d == 0) {
    return {0, 1};
  }
  // Each instruction occupies exactly one layer on each of its qubits.
  std::int64_t active = 0;
  for (const auto& op : c.ops()) {
    active += static_cast<std::int64_t>(op.qubits.size());
  }
  return {active, n * d};
}

long FeatureSchema::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<long>(it - names.begin());
}

const FeatureSchema& full_feature_schema() {
  static const FeatureSchema schema = [] {
    FeatureSchema s;
    s.names = {"num_qubits", "depth"};
    for (GateKind k : unitary_gate_kinds()) {
      s.names.push_back("count_" + std::string(gate_name(k)));
    }
    for (const char* name : {"program_communication", "critical_depth",
                             "entanglement_ratio", "parallelism", "liveness"}) {
      s.names.emplace_back(name);
    }
    return s;
  }();
  return schema;
}

namespace {

std::vector<double> full_feature_values(const Circuit& c) {
  std::vector<double> v;
  v.reserve(full_feature_schema().size());
  v.push_back(c.num_qubits());
  v.push_back(circuit_depth(c).depth);
  std::vector<double> counts(kNumGateKinds, 0.0);
  for (const auto& op : c.ops()) {
    counts[static_cast<std::size_t>(op.kind)] += 1.0;
  }
  for (GateKind k : unitary_gate_kinds()) {
    v.push_back(counts[static_cast<std::size_t>(k)]);
  }
  v.push_back(program_communication(c).value());
  v.push_back(critical_depth(c).value());
  v.push_back(entanglement_ratio(c).value());
  v.push_back(parallelism(c).value());
  v.push_back(liveness(c).value());
  return v;
}

}  // namespace

std::vector<double> project(std::span<const double> row,
                            const FeatureSchema& source,
                            const FeatureSchema& target) {
  std::vector<double> out;
  out.reserve(target.size());
  for (const auto& name : target.names) {
    const long idx = source.index_of(name);
    if (idx < 0) {
      throw Error("feature '" + name + "' missing from source schema");
    }
    out.push_back(row[static_cast<std::size_t>(idx)]);
  }
  return out;
}

FeatureVector extract_features(const Circuit& c, const FeatureSchema& schema) {
  const auto& full = full_feature_schema();
  std::vector<double> values = full_feature_values(c);
  if (!(schema.names == full.names)) {
    values = project(values, full, schema);
  }
  return FeatureVector{std::move(values), schema.names};
}

FeatureSchema prune_constant_features(const FeatureSchema& schema,
                                      std::span<const std::vector<double>> rows) {
  if (rows.empty()) {
    throw Error("cannot prune features of an empty dataset");
  }
  FeatureSchema out;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const bool all_zero = std::all_of(rows.begin(), rows.end(), [&](const auto& r) {
      if (r.size() != schema.size()) {
        throw Error("row width does not match schema");
      }
      return r[j] == 0.0;
    });
    (all_zero ? out.pruned : out.names).push_back(schema.names[j]);
  }
  out.pruned.insert(out.pruned.begin(), schema.pruned.begin(), schema.pruned.end());
  return out;
}

Standardizer Standardizer::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) {
    throw Error("cannot standardize an empty dataset");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> mean(cols, 0.0);
  std::vector<double> sd(cols, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < cols; ++j) {
      mean[j] += r[j];
    }
  }
  for (double& m : mean) {
    m /= static_cast<double>(rows.size());
  }
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < cols; ++j) {
      sd[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
    }
  }
  for (double& s : sd) {
    s = std::sqrt(s / static_cast<double>(rows.size()));
  }
  return Standardizer(std::move(mean), std::move(sd));
}

std::vector<double> Standardizer::transform(std::span<const double> row) const {
  std::vector<double> out(row.begin(), row.end());
  for (std::size_t j = 0; j < out.size() && j < mean_.size(); ++j) {
    if (stddev_[j] > 0.0) {
      out[j] = (out[j] - mean_[j]) / stddev_[j];
    }
  }
  return out;
}

std::vector<std::vector<double>> Standardizer::transform(
    std::span<const std::vector<double>> rows) const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back(transform(std::span<const double>(r)));
  }
  return out;
}

void write_feature_csv(const std::string& path, const FeatureSchema& schema,
                       std::span<const std::vector<double>> rows,
                       std::span<const std::string> labels) {
  if (!labels.empty() && labels.size() != rows.size()) {
    throw Error("label count does not match row count");
  }
  std::vector<std::vector<std::string>> out;
  out.push_back(schema.names);
  if (!labels.empty()) {
    out.back().emplace_back("label");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> cells;
    for (double v : rows[i]) {
      cells.push_back(csv::format_real(v));
    }
    if (!labels.empty()) {
      cells.push_back(labels[i]);
    }
    out.push_back(std::move(cells));
  }
  csv::write_file(path, out);
}

FeatureTable read_feature_csv(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) {
    throw Error(path + ": missing header");
  }
  FeatureTable table;
  auto header = rows.front();
  const bool labeled = !header.empty() && header.back() == "label";
  if (labeled) {
    header.pop_back();
  }
  table.schema.names = header;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto& cells = rows[i];
    if (cells.size() != header.size() + (labeled ? 1 : 0)) {
      throw Error(path + ": row " + std::to_string(i) + " has wrong width");
    }
    if (labeled) {
      table.labels.push_back(cells.back());
      cells.pop_back();
    }
    std::vector<double> values;
    for (const auto& cell : cells) {
      values.push_back(csv::parse_real(cell));
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

}  // namespace qpredict
