// SPDX-License-Identifier: MIT

#include "qpredict/corpus.hpp"
#include "qpredict/errors.hpp"
#include "qpredict/pipeline.hpp"
#include "qpredict/qasm.hpp"
#include "qpredict/statevector.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace qpredict;
namespace fs = std::filesystem;

namespace {

const std::vector<DeviceModel>& fleet() { return builtin_devices(); }
const std::vector<CompilationOption>& options() {
  static const auto opts = enumerate_options(fleet());
  return opts;
}

std::vector<std::string> option_ids() {
  std::vector<std::string> ids;
  for (const auto& o : options()) ids.push_back(o.id());
  return ids;
}

// Probability of each assignment of the first `m` qubits, summed over the rest.
std::vector<double> marginal(const StateVector& s, int m) {
  std::vector<double> p(std::size_t{1} << m, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) p[i & ((std::size_t{1} << m) - 1)] += std::norm(s[i]);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<LabeledSample> small_dataset() {
  CorpusSpec spec;
  spec.min_qubits = 2;
  spec.max_qubits = 7;
  spec.random_variants = 4;
  spec.qaoa_variants = 2;
  spec.seed = 3;
  static const auto samples = label_dataset(generate_corpus(spec), options(), fleet());
  return samples;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Corpus, GhzThreeMatchesReference) {
  const Circuit c = generate_circuit("ghz", 3, 0, 0);
  EXPECT_EQ(c.name(), "ghz_n3");
  EXPECT_EQ(c.ops(), qpredict::testing::ghz3().ops());
}

TEST(Corpus, DeutschJozsaSevenIsBalanced) {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const Circuit c = generate_circuit("dj", 7, 0, seed);
    EXPECT_EQ(c.num_qubits(), 7);
    EXPECT_EQ(c.name(), "dj_n7");
    // A balanced oracle never returns the all-zero input register.
    const auto p = marginal(simulate_statevector(c.without_directives()), 6);
    EXPECT_NEAR(p[0], 0.0, 1e-12);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Corpus, WStateHasEqualSingleExcitations) {
  for (int n : {2, 3, 5, 8}) {
    const auto s = simulate_statevector(generate_circuit("wstate", n, 0, 0).without_directives());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool single = i != 0 && (i & (i - 1)) == 0;
      EXPECT_NEAR(std::norm(s[i]), single ? 1.0 / n : 0.0, 1e-12) << n << " " << i;
    }
  }
}

TEST(Corpus, QftOfZeroIsUniform) {
  for (int n : {2, 4, 6}) {
    const auto s = simulate_statevector(generate_circuit("qft", n, 0, 0).without_directives());
    for (const auto& a : s) EXPECT_NEAR(std::norm(a), 1.0 / s.size(), 1e-12);
  }
}

TEST(Corpus, GroverAmplifiesOneState) {
  for (int n : {2, 3, 4, 6, 8}) {
    const Circuit c = generate_circuit("grover", n, 0, 5);
    const int m = c.num_clbits();
    const auto s = simulate_statevector(c.without_directives());
    const auto p = marginal(s, m);
    EXPECT_GT(*std::max_element(p.begin(), p.end()), 0.9) << n;
    // Ancillas are uncomputed.
    double ancilla_zero = 0.0;
    for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) ancilla_zero += std::norm(s[i]);
    EXPECT_NEAR(ancilla_zero, 1.0, 1e-9) << n;
  }
  EXPECT_FALSE(family_supports("grover", 5));
  EXPECT_FALSE(family_supports("grover", 16));
  EXPECT_THROW(generate_circuit("grover", 5, 0, 0), Error);
}

TEST(Corpus, QaoaAndRandomVariants) {
  CorpusSpec spec;
  EXPECT_EQ(family_variants("random", spec), 10);
  EXPECT_EQ(family_variants("qaoa", spec), 3);
  EXPECT_EQ(family_variants("ghz", spec), 1);
  EXPECT_EQ(generate_circuit("qaoa", 6, 2, 0).name(), "qaoa_n6_v2");
  EXPECT_NE(generate_circuit("random", 6, 1, 0), generate_circuit("random", 6, 2, 0));
  EXPECT_NE(generate_circuit("random", 6, 1, 0), generate_circuit("random", 6, 1, 1));
  EXPECT_EQ(generate_circuit("random", 6, 1, 0), generate_circuit("random", 6, 1, 0));
}

TEST(Corpus, FullSweepSizeAndRange) {
  const auto all = generate_corpus(CorpusSpec{});
  EXPECT_GE(all.size(), 2000u);
  std::set<std::string> names;
  for (const auto& c : all) {
    EXPECT_GE(c.num_qubits(), 2);
    EXPECT_LE(c.num_qubits(), 130);
    names.insert(c.name());
  }
  EXPECT_EQ(names.size(), all.size());
}

TEST(Corpus, Errors) {
  CorpusSpec spec;
  spec.families = {"ghz", "teleport"};
  EXPECT_THROW(generate_corpus(spec), Error);
  spec.families = {"ghz"};
  spec.max_qubits = 131;
  EXPECT_THROW(generate_corpus(spec), Error);
  spec.max_qubits = 10;
  spec.min_qubits = 1;
  EXPECT_THROW(generate_corpus(spec), Error);
}

TEST(Corpus, DeterministicPerSeed) {
  CorpusSpec spec;
  spec.max_qubits = 12;
  spec.seed = 9;
  EXPECT_EQ(generate_corpus(spec), generate_corpus(spec));
  auto other = spec;
  other.seed = 10;
  EXPECT_NE(generate_corpus(spec), generate_corpus(other));
}

TEST(Labeling, Ghz3HasFullRanking) {
  const auto samples = label_dataset({qpredict::testing::ghz3()}, options(), fleet());
  ASSERT_EQ(samples.size(), 1u);
  const auto& s = samples[0];
  EXPECT_EQ(s.ranking.size(), 30u);
  EXPECT_EQ(s.label(), s.ranking.options[s.ranking.order[0]].id());
  EXPECT_EQ(s.features, extract_features(qpredict::testing::ghz3()).values);
  EXPECT_EQ(s.num_qubits, 3);
  const auto ids = option_ids();
  EXPECT_NE(std::find(ids.begin(), ids.end(), s.label()), ids.end());
}

TEST(Labeling, ExcludesAllInfeasible) {
  Circuit big(200);
  big.gate(GateKind::H, {0});
  big.set_name("big");
  std::vector<std::string> excluded;
  const auto samples =
      label_dataset({qpredict::testing::ghz3(), big}, options(), fleet(), {}, &excluded);
  EXPECT_EQ(samples.size(), 1u);
  EXPECT_EQ(excluded, (std::vector<std::string>{"big"}));
}

TEST(Labeling, ZeroTimeoutExcludesEverything) {
  std::vector<std::string> excluded;
  const auto samples = label_dataset({qpredict::testing::ghz3(), generate_circuit("qft", 4, 0, 0)},
                                     options(), fleet(), LabelConfig{0.0, 0}, &excluded);
  EXPECT_TRUE(samples.empty());
  EXPECT_EQ(excluded.size(), 2u);
}

TEST(Labeling, ParallelMatchesReferenceAndIsRepeatable) {
  CorpusSpec spec;
  spec.max_qubits = 6;
  spec.random_variants = 2;
  spec.qaoa_variants = 1;
  const auto circuits = generate_corpus(spec);
  const auto ref = label_dataset_ref(circuits, options(), fleet());
  for (int jobs : {1, 3}) {
    const auto par = label_dataset(circuits, options(), fleet(), LabelConfig{10.0, jobs});
    ASSERT_EQ(par.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(par[i].name, ref[i].name);
      EXPECT_EQ(par[i].label(), ref[i].label());
      EXPECT_EQ(par[i].ranking.scores, ref[i].ranking.scores);
      EXPECT_EQ(par[i].ranking.rank_of, ref[i].ranking.rank_of);
    }
  }
}

TEST(Split, PaperSizes) {
  const auto s = split_dataset(2098, 0.3, 0);
  EXPECT_EQ(s.train.size(), 1468u);
  EXPECT_EQ(s.test.size(), 630u);
  const auto h = split_dataset(4, 0.5, 1);
  EXPECT_EQ(h.train.size(), 2u);
  EXPECT_EQ(h.test.size(), 2u);
}

TEST(Split, DeterministicSortedPartition) {
  const auto a = split_dataset(100, 0.3, 5);
  const auto b = split_dataset(100, 0.3, 5);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_TRUE(std::is_sorted(a.train.begin(), a.train.end()));
  EXPECT_TRUE(std::is_sorted(a.test.begin(), a.test.end()));
  std::vector<std::size_t> all = a.train;
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
  EXPECT_NE(split_dataset(100, 0.3, 6).test, a.test);
}

TEST(Split, Errors) {
  EXPECT_THROW(split_dataset(1, 0.3, 0), Error);
  EXPECT_THROW(split_dataset(10, 0.0, 0), Error);
  EXPECT_THROW(split_dataset(10, 1.0, 0), Error);
}

TEST(Report, MeasuresFromRanks) {
  const auto r = report_from_ranks({1, 2, 5, 1}, 30);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.top3, 0.75);
  EXPECT_EQ(r.worst_rank, 5);
  ASSERT_EQ(r.rank_frequency.size(), 30u);
  EXPECT_DOUBLE_EQ(r.rank_frequency[0], 0.5);
  EXPECT_DOUBLE_EQ(r.rank_frequency[4], 0.25);
  EXPECT_NEAR(std::accumulate(r.rank_frequency.begin(), r.rank_frequency.end(), 0.0), 1.0, 1e-12);

  const auto perfect = report_from_ranks({1, 1, 1}, 30);
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.top3, 1.0);
  EXPECT_EQ(perfect.worst_rank, 1);
}

TEST(Report, InvariantsProperty) {
  CounterRng rng(17);
  for (int t = 0; t < 200; ++t) {
    std::vector<int> ranks(1 + rng.below(40));
    for (int& r : ranks) r = 1 + static_cast<int>(rng.below(30));
    const auto rep = report_from_ranks(ranks, 30);
    EXPECT_LE(rep.accuracy, rep.top3);
    EXPECT_LE(rep.top3, 1.0);
    EXPECT_GE(rep.worst_rank, 1);
    EXPECT_LE(rep.worst_rank, 30);
    const double ones = static_cast<double>(std::count(ranks.begin(), ranks.end(), 1)) / ranks.size();
    EXPECT_DOUBLE_EQ(rep.accuracy, ones);
  }
}

TEST(Training, EndToEndOnSmallCorpus) {
  const auto samples = small_dataset();
  ASSERT_GT(samples.size(), 40u);
  TrainConfig cfg;
  cfg.grid = "none";
  cfg.forest.n_trees = 50;
  cfg.seed = 2;
  const auto out = train_and_evaluate(samples, option_ids(), cfg);
  EXPECT_EQ(out.split.test.size(), samples.size() - samples.size() * 7 / 10);
  EXPECT_EQ(out.report.ranks.size(), out.split.test.size());
  EXPECT_LE(out.report.accuracy, out.report.top3);
  EXPECT_EQ(out.predictor.label_space, option_ids());
  EXPECT_LE(out.predictor.schema.size(), full_feature_schema().size());
  EXPECT_TRUE(out.cv.grid.empty());

  // The evaluation re-derives ranks directly from the stored rankings.
  std::vector<LabeledSample> test;
  for (std::size_t i : out.split.test) test.push_back(samples[i]);
  const auto again = evaluate(out.predictor, test);
  EXPECT_EQ(again.ranks, out.report.ranks);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto x = project(test[i].features, full_feature_schema(), out.predictor.schema);
    EXPECT_EQ(again.ranks[i], test[i].ranking.rank(out.predictor.predict(x)));
  }

  const auto repeat = train_and_evaluate(samples, option_ids(), cfg);
  EXPECT_EQ(repeat.report.ranks, out.report.ranks);
}

TEST(Training, GridSearchAndBaselines) {
  const auto samples = small_dataset();
  TrainConfig cfg;
  cfg.classifier = "knn";
  cfg.folds = 3;
  const auto knn = train_and_evaluate(samples, option_ids(), cfg);
  EXPECT_EQ(knn.cv.grid.size(), 5u);
  EXPECT_EQ(knn.chosen.name, "knn");
  EXPECT_EQ(knn.predictor.forest(), nullptr);
  cfg.classifier = "nb";
  EXPECT_EQ(train_and_evaluate(samples, option_ids(), cfg).chosen.name, "nb");
  cfg.classifier = "dt";
  EXPECT_EQ(train_and_evaluate(samples, option_ids(), cfg).cv.grid.size(), 12u);
}

TEST(RuntimeCompare, DeutschJozsaSeven) {
  const auto samples = small_dataset();
  TrainConfig cfg;
  cfg.grid = "none";
  cfg.forest.n_trees = 30;
  const auto out = train_and_evaluate(samples, option_ids(), cfg);
  const Circuit dj = generate_circuit("dj", 7, 0, 0);
  const auto r = runtime_compare(dj, out.predictor, options(), fleet());
  EXPECT_TRUE(r.identical_output);
  EXPECT_GT(r.brute_force_seconds, r.predict_and_compile_seconds);
  EXPECT_GT(r.reduction, 0.0);
  EXPECT_NEAR(r.reduction, 1.0 - r.predict_and_compile_seconds / r.brute_force_seconds, 1e-12);
  const auto ids = option_ids();
  EXPECT_NE(std::find(ids.begin(), ids.end(), r.predicted), ids.end());
}

TEST(RuntimeCompare, SingleOptionHasNoGain) {
  const auto samples = small_dataset();
  TrainConfig cfg;
  cfg.grid = "none";
  cfg.forest.n_trees = 10;
  const auto out = train_and_evaluate(samples, option_ids(), cfg);
  const Circuit dj = generate_circuit("dj", 7, 0, 0);
  const std::vector<double> x = out.predictor.features_of(dj);
  const auto chosen = CompilationOption::parse(out.predictor.predict(x));
  const std::vector<CompilationOption> one{chosen};
  const auto r = runtime_compare(dj, out.predictor, one, fleet());
  EXPECT_TRUE(r.identical_output);
  EXPECT_LT(r.reduction, 0.9);
}

TEST(Export, DotGraphRows) {
  const auto samples = small_dataset();
  TrainConfig cfg;
  cfg.grid = "none";
  cfg.forest.n_trees = 10;
  const auto out = train_and_evaluate(samples, option_ids(), cfg);

  Circuit wide(50, 50);
  wide.gate(GateKind::H, {0});
  for (int q = 0; q + 1 < 50; ++q) wide.gate(GateKind::CX, {q, q + 1});
  wide.measure_all();
  wide.set_name("wide50");
  const auto labeled = label_dataset({qpredict::testing::ghz3(), wide}, options(), fleet());
  ASSERT_EQ(labeled.size(), 2u);

  const auto dir = fresh_dir("qpredict_dots");
  write_dot_graph(dir / "dots.csv", labeled, out.predictor);
  std::ifstream in(dir / "dots.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "circuit,num_qubits,option_id,normalized_score,predicted_flag");
  std::map<std::string, int> rows, flagged, nonzero;
  std::map<std::string, double> flagged_score;
  std::vector<int> qubit_order;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string circuit, nq, opt, score, flag;
    std::getline(ss, circuit, ',');
    std::getline(ss, nq, ',');
    std::getline(ss, opt, ',');
    std::getline(ss, score, ',');
    std::getline(ss, flag, ',');
    ++rows[circuit];
    qubit_order.push_back(std::stoi(nq));
    nonzero[circuit] += std::stod(score) > 0.0;
    if (flag == "1") ++flagged[circuit];
  }
  EXPECT_EQ(rows["ghz3"], 30);
  EXPECT_EQ(rows["wide50"], 30);
  EXPECT_EQ(flagged["ghz3"], 1);
  EXPECT_EQ(flagged["wide50"], 1);
  EXPECT_EQ(nonzero["wide50"], 12);
  EXPECT_EQ(nonzero["ghz3"], 30);
  EXPECT_TRUE(std::is_sorted(qubit_order.begin(), qubit_order.end()));
  fs::remove_all(dir);
}

TEST(Export, FilesRoundTrip) {
  const auto samples = small_dataset();
  const auto dir = fresh_dir("qpredict_files");
  CorpusSpec spec;
  spec.max_qubits = 5;
  const auto corpus = generate_corpus(spec);
  write_corpus(dir, corpus);
  const auto back = read_corpus(dir);
  ASSERT_EQ(back.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(back[i].name(), corpus[i].name());
    EXPECT_EQ(back[i].ops().size(), corpus[i].ops().size());
  }

  write_labels(dir, samples);
  const auto labels = read_labels(dir);
  ASSERT_EQ(labels.size(), samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(labels[i].name, samples[i].name);
    EXPECT_EQ(labels[i].label(), samples[i].label());
    EXPECT_EQ(labels[i].features, samples[i].features);
    EXPECT_EQ(labels[i].ranking.rank_of, samples[i].ranking.rank_of);
    for (std::size_t k = 0; k < 30; ++k) {
      EXPECT_EQ(labels[i].ranking.scores[k], samples[i].ranking.scores[k]);
    }
  }
  const std::string first = slurp(dir / "labels.csv");
  write_labels(dir, labels);
  EXPECT_EQ(slurp(dir / "labels.csv"), first);

  const auto split = split_dataset(samples.size(), 0.3, 4);
  write_split(dir, samples, split);
  const auto s2 = read_split(dir, samples);
  EXPECT_EQ(s2.train, split.train);
  EXPECT_EQ(s2.test, split.test);

  EXPECT_EQ(content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
  fs::remove_all(dir);
}

TEST(Export, HistogramAndImportance) {
  const auto samples = small_dataset();
  TrainConfig cfg;
  cfg.grid = "none";
  cfg.forest.n_trees = 20;
  const auto out = train_and_evaluate(samples, option_ids(), cfg);
  const auto dir = fresh_dir("qpredict_figs");
  write_rank_histogram(dir / "hist.csv", out.report);
  write_importance(dir / "imp.csv", out.predictor);
  auto column_sum = [](const fs::path& p, std::size_t col) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    double sum = 0.0;
    int rows = 0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string cell;
      for (std::size_t c = 0; c <= col; ++c) std::getline(ss, cell, ',');
      sum += std::stod(cell);
      ++rows;
    }
    return std::make_pair(sum, rows);
  };
  const auto [hist, hist_rows] = column_sum(dir / "hist.csv", 2);
  EXPECT_NEAR(hist, 1.0, 1e-9);
  EXPECT_EQ(hist_rows, 30);
  const auto [imp, imp_rows] = column_sum(dir / "imp.csv", 1);
  EXPECT_NEAR(imp, 1.0, 1e-6);
  EXPECT_EQ(imp_rows, static_cast<int>(out.predictor.schema.size()));
  write_report(dir / "report.json", out, samples.size());
  const std::string report = slurp(dir / "report.json");
  for (const char* key : {"\"accuracy\"", "\"top3\"", "\"worst_rank\"", "\"reference\""}) {
    EXPECT_NE(report.find(key), std::string::npos) << key;
  }
  fs::remove_all(dir);
}
