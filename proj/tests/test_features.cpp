// SPDX-License-Identifier: MIT

#include "qpredict/dag.hpp"
#include "qpredict/errors.hpp"
#include "qpredict/features.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

using namespace qpredict;
using qpredict::testing::ghz3;
using qpredict::testing::random_circuit;

namespace {

// Independent ASAP schedule: per-qubit frontier, one layer per instruction.
std::vector<int> asap_layers(const Circuit& c) {
  std::vector<int> frontier(static_cast<std::size_t>(c.num_qubits()), 0);
  std::vector<int> layer;
  for (const auto& op : c.ops()) {
    int l = 0;
    for (Qubit q : op.qubits) l = std::max(l, frontier[q]);
    for (Qubit q : op.qubits) frontier[q] = l + 1;
    layer.push_back(l + 1);
  }
  return layer;
}

double parallelism_oracle(const Circuit& c) {
  const auto layers = asap_layers(c);
  const int d = layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end());
  const int n = c.num_qubits();
  if (n < 2 || d == 0) return 0.0;
  const double ng = static_cast<double>(c.gate_count());
  return std::clamp((ng / d - 1.0) / (n - 1.0), 0.0, 1.0);
}

double liveness_oracle(const Circuit& c) {
  const auto layers = asap_layers(c);
  const int d = layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end());
  const int n = c.num_qubits();
  if (n < 2 || d == 0) return 0.0;
  std::set<std::pair<Qubit, int>> active;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (Qubit q : c.ops()[i].qubits) active.insert({q, layers[i]});
  }
  return static_cast<double>(active.size()) / (static_cast<double>(n) * d);
}

Circuit relabeled(const Circuit& c, const std::vector<Qubit>& perm) {
  std::vector<Instruction> ops = c.ops();
  for (auto& op : ops) {
    for (Qubit& q : op.qubits) q = perm[q];
  }
  return c.with_ops(ops);
}

double feature(const Circuit& c, const std::string& name) {
  const auto v = extract_features(c);
  return v.values[static_cast<std::size_t>(full_feature_schema().index_of(name))];
}

}  // namespace

TEST(Composites, Ghz3ExactRatios) {
  const Circuit c = ghz3();
  EXPECT_EQ(program_communication(c), (Ratio{4, 6}));
  EXPECT_EQ(critical_depth(c), (Ratio{1, 1}));
  EXPECT_EQ(entanglement_ratio(c), (Ratio{2, 3}));
  EXPECT_EQ(liveness(c), (Ratio{8, 12}));
  EXPECT_NEAR(parallelism(c).value(), parallelism_oracle(c), 1e-12);
  EXPECT_DOUBLE_EQ(parallelism(c).value(), 0.0);
}

TEST(Composites, PaperExtremes) {
  // Every pair interacts.
  Circuit full(4);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) full.gate(GateKind::CZ, {a, b});
  }
  EXPECT_EQ(program_communication(full), (Ratio{1, 1}));
  EXPECT_EQ(entanglement_ratio(full), (Ratio{1, 1}));
  // Dependent chain: every multi-qubit gate is on the longest path.
  EXPECT_EQ(critical_depth(ghz3(false)), (Ratio{1, 1}));
  // A gate on every qubit at every layer.
  Circuit busy(3);
  for (int l = 0; l < 4; ++l) {
    for (int q = 0; q < 3; ++q) busy.gate(GateKind::H, {q});
  }
  EXPECT_EQ(liveness(busy), (Ratio{1, 1}));
}

TEST(Composites, SmallExamples) {
  Circuit two_h(2);
  two_h.gate(GateKind::H, {0}).gate(GateKind::H, {1});
  EXPECT_EQ(parallelism(two_h), (Ratio{1, 1}));

  Circuit one_h(2);
  one_h.gate(GateKind::H, {0});
  EXPECT_EQ(liveness(one_h), (Ratio{1, 2}));

  Circuit sequential(2);
  sequential.gate(GateKind::H, {0}).gate(GateKind::X, {0}).gate(GateKind::Z, {0});
  EXPECT_EQ(parallelism(sequential).value(), 0.0);

  Circuit only_h(3);
  only_h.gate(GateKind::H, {0}).gate(GateKind::H, {1});
  EXPECT_EQ(program_communication(only_h).value(), 0.0);
  EXPECT_EQ(critical_depth(only_h).value(), 0.0);
  EXPECT_EQ(entanglement_ratio(only_h).value(), 0.0);
}

TEST(Composites, DegenerateCircuitsAreZero) {
  for (const Circuit& c : {Circuit(1), Circuit(3)}) {
    EXPECT_EQ(program_communication(c).value(), 0.0);
    EXPECT_EQ(critical_depth(c).value(), 0.0);
    EXPECT_EQ(entanglement_ratio(c).value(), 0.0);
    EXPECT_EQ(parallelism(c).value(), 0.0);
    EXPECT_EQ(liveness(c).value(), 0.0);
  }
  Circuit single(1);
  single.gate(GateKind::H, {0}).gate(GateKind::X, {0});
  EXPECT_EQ(liveness(single).value(), 0.0);
}

TEST(Composites, MatchIndependentOraclesProperty) {
  CounterRng rng(77);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const Circuit c = random_circuit(rng, n, static_cast<int>(rng.below(30)), rng.below(2) == 1);
    EXPECT_NEAR(parallelism(c).value(), parallelism_oracle(c), 1e-12);
    EXPECT_NEAR(liveness(c).value(), liveness_oracle(c), 1e-12);
  }
}

TEST(Composites, InUnitIntervalProperty) {
  CounterRng rng(99);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const Circuit c = random_circuit(rng, n, static_cast<int>(rng.below(40)), rng.below(2) == 1);
    for (const Ratio& r : {program_communication(c), critical_depth(c), entanglement_ratio(c),
                           parallelism(c), liveness(c)}) {
      EXPECT_GE(r.value(), 0.0);
      EXPECT_LE(r.value(), 1.0);
    }
  }
}

TEST(Composites, PermutationInvariantProperty) {
  CounterRng rng(5);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const Circuit c = random_circuit(rng, n, 25, true);
    std::vector<Qubit> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    const Circuit p = relabeled(c, perm);
    EXPECT_EQ(program_communication(c), program_communication(p));
    EXPECT_EQ(critical_depth(c), critical_depth(p));
    EXPECT_EQ(entanglement_ratio(c), entanglement_ratio(p));
    EXPECT_EQ(parallelism(c), parallelism(p));
    EXPECT_EQ(liveness(c), liveness(p));
  }
}

TEST(Composites, UnitValuesCharacterizeExtremesProperty) {
  CounterRng rng(6);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const Circuit c = random_circuit(rng, n, 1 + static_cast<int>(rng.below(12)));
    const bool all_multi = c.multi_qubit_gate_count() == c.gate_count();
    EXPECT_EQ(entanglement_ratio(c) == (Ratio{1, 1}), all_multi);
    const auto g = interaction_graph(c);
    const bool complete = g.num_edges() == static_cast<std::size_t>(n * (n - 1) / 2);
    EXPECT_EQ(program_communication(c) == (Ratio{1, 1}), complete);
  }
}

TEST(Features, SchemaLayout) {
  const auto& s = full_feature_schema();
  EXPECT_EQ(s.names.front(), "num_qubits");
  EXPECT_EQ(s.names[1], "depth");
  EXPECT_EQ(s.size(), 2 + unitary_gate_kinds().size() + 5);
  EXPECT_EQ(s.names.back(), "liveness");
  EXPECT_GE(s.index_of("count_cx"), 0);
  EXPECT_EQ(s.index_of("count_measure"), -1);
}

TEST(Features, Ghz3Counts) {
  const Circuit c = ghz3();
  EXPECT_EQ(feature(c, "num_qubits"), 3.0);
  EXPECT_EQ(feature(c, "depth"), 4.0);
  EXPECT_EQ(feature(c, "count_h"), 1.0);
  EXPECT_EQ(feature(c, "count_cx"), 2.0);
  EXPECT_EQ(feature(c, "count_x"), 0.0);
  EXPECT_DOUBLE_EQ(feature(c, "program_communication"), 4.0 / 6.0);
}

TEST(Features, EmptyOneQubitCircuit) {
  const auto v = extract_features(Circuit(1));
  EXPECT_EQ(v.values[0], 1.0);
  for (std::size_t i = 1; i < v.values.size(); ++i) EXPECT_EQ(v.values[i], 0.0);
}

TEST(Features, SubsetSchemaAndDeterminism) {
  FeatureSchema sub{{"depth", "count_cx", "liveness"}, {}};
  const auto v = extract_features(ghz3(), sub);
  EXPECT_EQ(v.values.size(), 3u);
  EXPECT_EQ(v.schema, sub.names);
  EXPECT_EQ(v.values[1], 2.0);
  CounterRng rng(1);
  const Circuit c = random_circuit(rng, 5, 40, true);
  EXPECT_EQ(extract_features(c).values, extract_features(c).values);
  EXPECT_THROW(extract_features(c, FeatureSchema{{"bogus"}, {}}), Error);
}

TEST(Features, PruneDropsAllZeroColumns) {
  FeatureSchema s{{"a", "b", "c"}, {}};
  std::vector<std::vector<double>> rows{{1, 0, 2}, {3, 0, 0}};
  const auto p = prune_constant_features(s, rows);
  EXPECT_EQ(p.names, (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(p.pruned, (std::vector<std::string>{"b"}));
  rows = {{1, 1, 1}};
  EXPECT_EQ(prune_constant_features(s, rows).names, s.names);
  EXPECT_THROW(prune_constant_features(s, std::vector<std::vector<double>>{}), Error);
}

TEST(Features, PruneOnEmptyCircuits) {
  std::vector<std::vector<double>> rows;
  for (int n : {1, 2, 3}) rows.push_back(extract_features(Circuit(n)).values);
  const auto p = prune_constant_features(full_feature_schema(), rows);
  EXPECT_EQ(p.names, (std::vector<std::string>{"num_qubits"}));
  EXPECT_EQ(project(rows[2], full_feature_schema(), p), (std::vector<double>{3.0}));
}

TEST(Standardizer, TwoPointColumnAndConstantColumn) {
  std::vector<std::vector<double>> rows{{1, 5}, {3, 5}};
  const auto s = Standardizer::fit(rows);
  EXPECT_EQ(s.mean(), (std::vector<double>{2, 5}));
  EXPECT_EQ(s.stddev()[0], 1.0);
  const auto t = s.transform(rows);
  EXPECT_EQ(t[0], (std::vector<double>{-1, 5}));
  EXPECT_EQ(t[1], (std::vector<double>{1, 5}));
  const Standardizer stored(s.mean(), s.stddev());
  EXPECT_EQ(stored.transform(rows), t);
  EXPECT_THROW(Standardizer::fit(std::vector<std::vector<double>>{}), Error);
}

TEST(Features, CsvRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "qpredict_features_test.csv";
  CounterRng rng(2);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (int i = 0; i < 10; ++i) {
    rows.push_back(extract_features(random_circuit(rng, 4, 20, true)).values);
    labels.push_back("dev8/A/O" + std::to_string(i % 4));
  }
  write_feature_csv(path.string(), full_feature_schema(), rows, labels);
  const auto table = read_feature_csv(path.string());
  EXPECT_EQ(table.schema, full_feature_schema());
  EXPECT_EQ(table.rows, rows);
  EXPECT_EQ(table.labels, labels);
  std::filesystem::remove(path);
}
