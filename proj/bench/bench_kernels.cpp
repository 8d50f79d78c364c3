// SPDX-License-Identifier: MIT
//
// Parallel kernels against their serial references.

#include "qpredict/compiler.hpp"
#include "qpredict/corpus.hpp"
#include "qpredict/ml/forest.hpp"
#include "qpredict/pipeline.hpp"
#include "qpredict/rng.hpp"
#include "qpredict/statevector.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace qpredict;

namespace {

StateVector plus_state(int n) {
  const std::size_t dim = std::size_t{1} << n;
  return StateVector(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

template <auto Kernel>
void BM_apply(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  StateVector s = plus_state(n);
  const double theta[] = {0.3};
  const GateMatrix m = gate_matrix(GateKind::RXX, theta);
  const Qubit qs[] = {1, static_cast<Qubit>(n - 2)};
  for (auto _ : st) {
    Kernel(s, m, std::span<const Qubit>(qs));
    benchmark::DoNotOptimize(s.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.size()));
}

void apply_par(StateVector& s, const GateMatrix& m, std::span<const Qubit> q) { apply_matrix(s, m, q); }
void apply_ref(StateVector& s, const GateMatrix& m, std::span<const Qubit> q) { apply_matrix_ref(s, m, q); }

struct ForestData {
  ml::Matrix X;
  std::vector<int> y;
};

const ForestData& forest_data() {
  static const ForestData d = [] {
    ForestData out;
    CounterRng rng(3);
    for (int i = 0; i < 400; ++i) {
      std::vector<double> row(12);
      for (double& v : row) v = rng.uniform();
      out.y.push_back((row[0] > 0.5 ? 2 : 0) + (row[1] + row[2] > 1.0 ? 1 : 0));
      out.X.push_back(std::move(row));
    }
    return out;
  }();
  return d;
}

void BM_fit_forest(benchmark::State& st) {
  const auto& d = forest_data();
  for (auto _ : st) benchmark::DoNotOptimize(ml::fit_forest(d.X, d.y, 4, ml::ForestParams{100, 20, 2, 0, true}, 1));
}

void BM_fit_forest_ref(benchmark::State& st) {
  const auto& d = forest_data();
  for (auto _ : st) benchmark::DoNotOptimize(ml::fit_forest_ref(d.X, d.y, 4, ml::ForestParams{100, 20, 2, 0, true}, 1));
}

const std::vector<Circuit>& small_corpus() {
  static const auto c = [] {
    CorpusSpec spec;
    spec.min_qubits = 2;
    spec.max_qubits = 6;
    spec.random_variants = 2;
    spec.qaoa_variants = 1;
    return generate_corpus(spec);
  }();
  return c;
}

const std::vector<CompilationOption>& all_options() {
  static const auto o = enumerate_options(builtin_devices());
  return o;
}

void BM_label(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(label_dataset(small_corpus(), all_options(), builtin_devices()));
}

void BM_label_ref(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(label_dataset_ref(small_corpus(), all_options(), builtin_devices()));
}

}  // namespace

BENCHMARK(BM_apply<apply_par>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_apply<apply_ref>)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_fit_forest)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_forest_ref)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_label)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_label_ref)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
