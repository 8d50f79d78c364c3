// SPDX-License-Identifier: MIT

#include "qpredict/circuit.hpp"
#include "qpredict/dag.hpp"
#include "qpredict/errors.hpp"
#include "qpredict/qasm.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace qpredict;
using qpredict::testing::ghz3;
using qpredict::testing::random_circuit;

namespace {

const char* kHeader = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

Circuit parse_body(const std::string& body) { return parse_qasm(std::string(kHeader) + body); }

}  // namespace

TEST(Circuit, RejectsMalformedInstructions) {
  Circuit c(2, 1);
  EXPECT_THROW(c.gate(GateKind::CX, {0, 0}), InvalidCircuitError);
  EXPECT_THROW(c.gate(GateKind::H, {2}), InvalidCircuitError);
  EXPECT_THROW(c.gate(GateKind::RZ, {0}), InvalidCircuitError);
  EXPECT_THROW(c.gate(GateKind::H, {0}, {1.0}), InvalidCircuitError);
  EXPECT_THROW(c.measure(0, 1), InvalidCircuitError);
  EXPECT_EQ(c.size(), 0u);
}

TEST(Circuit, CountsExcludeDirectives) {
  const Circuit c = ghz3();
  EXPECT_EQ(c.size(), 6u);
  EXPECT_EQ(c.gate_count(), 3u);
  EXPECT_EQ(c.multi_qubit_gate_count(), 2u);
  EXPECT_EQ(c.count(GateKind::CX), 2u);
  EXPECT_EQ(c.without_directives().size(), 3u);
}

TEST(Qasm, ParsesFlatRegisters) {
  const Circuit c = parse_body("qreg q[3]; h q[0]; cx q[0],q[1]; cx q[1],q[2];");
  EXPECT_EQ(c.num_qubits(), 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.ops()[0], make_gate(GateKind::H, {0}));
  EXPECT_EQ(c.ops()[1], make_gate(GateKind::CX, {0, 1}));
  EXPECT_EQ(c.ops()[2], make_gate(GateKind::CX, {1, 2}));
}

TEST(Qasm, EmptyCircuit) {
  const Circuit c = parse_body("qreg q[1];");
  EXPECT_EQ(c.num_qubits(), 1);
  EXPECT_TRUE(c.empty());
}

TEST(Qasm, RejectsRepeatedQubit) {
  EXPECT_THROW(parse_body("qreg q[2]; cx q[0],q[0];"), ParseError);
}

TEST(Qasm, FlattensRegistersInDeclarationOrder) {
  const Circuit c = parse_body("qreg a[2]; qreg b[2]; creg m[2]; cx a[1],b[0]; measure b -> m;");
  EXPECT_EQ(c.num_qubits(), 4);
  EXPECT_EQ(c.ops()[0], make_gate(GateKind::CX, {1, 2}));
  EXPECT_EQ(c.ops()[1], make_measure(2, 0));
  EXPECT_EQ(c.ops()[2], make_measure(3, 1));
}

TEST(Qasm, BroadcastsOverRegisters) {
  const Circuit c = parse_body("qreg q[3]; h q;");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.ops()[2], make_gate(GateKind::H, {2}));
}

TEST(Qasm, EvaluatesAngleExpressions) {
  const Circuit c = parse_body("qreg q[1]; rz(-pi/4 + 2*0.5^2) q[0]; u3(sin(pi/2), cos(0), sqrt(4)) q[0];");
  EXPECT_NEAR(c.ops()[0].params[0], -std::numbers::pi / 4 + 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(c.ops()[1].params[0], 1.0);
  EXPECT_DOUBLE_EQ(c.ops()[1].params[1], 1.0);
  EXPECT_DOUBLE_EQ(c.ops()[1].params[2], 2.0);
}

TEST(Qasm, ReportsUnsupportedConstructsByName) {
  try {
    parse_body("qreg q[1]; gate foo a { h a; } foo q[0];");
    FAIL() << "expected UnsupportedError";
  } catch (const UnsupportedError& e) {
    EXPECT_NE(std::string(e.what()).find("gate"), std::string::npos);
  }
  EXPECT_THROW(parse_body("qreg q[1]; creg c[1]; if (c==1) x q[0];"), UnsupportedError);
  EXPECT_THROW(parse_body("qreg q[1]; opaque g a;"), UnsupportedError);
  EXPECT_THROW(parse_body("qreg q[1]; foo q[0];"), UnsupportedError);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0; qubit q;"), UnsupportedError);
}

TEST(Qasm, ReportsRegisterOverflowWithPosition) {
  try {
    parse_body("qreg q[2];\nh q[2];");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Qasm, ReportsSyntaxErrors) {
  EXPECT_THROW(parse_body("qreg q[2]; h q[0]"), ParseError);
  EXPECT_THROW(parse_body("qreg q[2]; rz(1 +) q[0];"), ParseError);
  EXPECT_THROW(parse_body("qreg q[2]; cx q[0] q[1];"), ParseError);
}

TEST(Qasm, RoundTripProperty) {
  CounterRng rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const Circuit c = random_circuit(rng, n, static_cast<int>(rng.below(40)), true);
    const Circuit once = parse_qasm(to_qasm(c));
    EXPECT_EQ(once, c);
    EXPECT_EQ(parse_qasm(to_qasm(once)), once);
  }
}

TEST(Depth, GhzLayersByHand) {
  const DepthSchedule s = circuit_depth(ghz3());
  EXPECT_EQ(s.depth, 4);
  EXPECT_EQ(s.layer_of, (std::vector<int>{1, 2, 3, 3, 4, 4}));
}

TEST(Depth, EmptyAndParallel) {
  EXPECT_EQ(circuit_depth(Circuit(2)).depth, 0);
  Circuit c(2);
  c.gate(GateKind::H, {0}).gate(GateKind::H, {1});
  EXPECT_EQ(circuit_depth(c).depth, 1);
}

TEST(Depth, BarriersOccupyLayers) {
  Circuit c(2);
  c.gate(GateKind::H, {0}).barrier({0, 1}).gate(GateKind::H, {1});
  EXPECT_EQ(circuit_depth(c).layer_of, (std::vector<int>{1, 2, 3}));
}

TEST(Depth, LaterOpOnSharedQubitHasGreaterLayer) {
  CounterRng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Circuit c = random_circuit(rng, 5, 30, true);
    const auto s = circuit_depth(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        const auto& a = c.ops()[i].qubits;
        const auto& b = c.ops()[j].qubits;
        const bool shared = std::any_of(a.begin(), a.end(), [&](Qubit q) {
          return std::find(b.begin(), b.end(), q) != b.end();
        });
        if (shared) EXPECT_GT(s.layer_of[j], s.layer_of[i]);
      }
    }
  }
}

TEST(Depth, InvariantUnderTopologicalReordering) {
  CounterRng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Circuit c = random_circuit(rng, 5, 40, true);
    // Kahn's algorithm with a random choice among ready instructions.
    std::vector<std::vector<std::size_t>> succ(c.size());
    std::vector<int> indeg(c.size(), 0);
    std::vector<long> last(static_cast<std::size_t>(c.num_qubits()), -1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (Qubit q : c.ops()[i].qubits) {
        if (last[q] >= 0) {
          succ[last[q]].push_back(i);
          ++indeg[i];
        }
        last[q] = static_cast<long>(i);
      }
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (indeg[i] == 0) ready.push_back(i);
    }
    std::vector<Instruction> ops;
    while (!ready.empty()) {
      const std::size_t pick = rng.below(ready.size());
      const std::size_t i = ready[pick];
      ready.erase(ready.begin() + static_cast<long>(pick));
      ops.push_back(c.ops()[i]);
      for (std::size_t s : succ[i]) {
        if (--indeg[s] == 0) ready.push_back(s);
      }
    }
    EXPECT_EQ(circuit_depth(c.with_ops(ops)).depth, circuit_depth(c).depth);
  }
}

TEST(InteractionGraph, Examples) {
  const auto g = interaction_graph(ghz3());
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));

  Circuit single(2);
  single.gate(GateKind::H, {0}).gate(GateKind::X, {1}).measure_all();
  EXPECT_EQ(interaction_graph(single).num_edges(), 0u);

  Circuit twice(2);
  twice.gate(GateKind::CX, {0, 1}).gate(GateKind::CX, {0, 1}).barrier({0, 1});
  const auto t = interaction_graph(twice);
  EXPECT_EQ(t.num_edges(), 1u);
  EXPECT_EQ(t.degree(0), 1);
}
