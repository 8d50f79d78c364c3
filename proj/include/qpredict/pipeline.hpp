// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/compiler.hpp"
#include "qpredict/corpus.hpp"
#include "qpredict/features.hpp"
#include "qpredict/ml/classifier.hpp"
#include "qpredict/ml/cross_validation.hpp"
#include "qpredict/scoring.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qpredict {

/// One labeled circuit: full-schema features and the ground-truth ranking
/// over every option. The label is the ranking's best option.
struct LabeledSample {
  std::string name;
  int num_qubits = 0;
  std::vector<double> features;
  OptionRanking ranking;

  std::string label() const { return ranking.best().id(); }
};

struct LabelConfig {
  double timeout_seconds = 10.0;
  int jobs = 0;  ///< 0 = all available threads
};

/// Brute-force labels, in circuit order. Circuits with no feasible option
/// are skipped; their names are appended to `excluded` when given.
std::vector<LabeledSample> label_dataset(const std::vector<Circuit>& circuits,
                                         std::span<const CompilationOption> options,
                                         std::span<const DeviceModel> devices,
                                         const LabelConfig& config = {},
                                         std::vector<std::string>* excluded = nullptr);

/// Serial reference for label_dataset.
std::vector<LabeledSample> label_dataset_ref(const std::vector<Circuit>& circuits,
                                             std::span<const CompilationOption> options,
                                             std::span<const DeviceModel> devices,
                                             const LabelConfig& config = {},
                                             std::vector<std::string>* excluded = nullptr);

struct Split {
  std::vector<std::size_t> train;  ///< ascending
  std::vector<std::size_t> test;   ///< ascending
};

/// Seeded shuffle; the first floor(n * (1 - f)) indices train.
Split split_dataset(std::size_t n, double test_fraction, std::uint64_t seed);

struct EvalReport {
  double accuracy = 0.0;
  double top3 = 0.0;
  int worst_rank = 0;
  int num_options = 0;
  std::vector<int> ranks;             ///< per test sample
  std::vector<double> rank_frequency; ///< index r-1 holds the share of rank r
};

/// Measures from per-sample ranks of the predictions.
EvalReport report_from_ranks(std::vector<int> ranks, int num_options);

/// Ground-truth rank of each sample's predicted option.
EvalReport evaluate(const ml::Predictor& predictor, std::span<const LabeledSample> test);

struct TrainConfig {
  std::string classifier = "rf";
  /// full, small or none. `none` fits `forest` / `k` directly.
  std::string grid = "full";
  int folds = 5;
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  ml::ForestParams forest;
  int k = 1;
  int jobs = 0;
};

struct TrainOutcome {
  ml::Predictor predictor;
  ml::CvResult cv;  ///< empty grid when grid = none
  ml::ClassifierConfig chosen;
  Split split;
  EvalReport report;
  double majority_accuracy = 0.0;  ///< most frequent training label on the test set
};

/// Split, prune features on the training part, grid search, refit on the
/// whole training part and evaluate on the test part. Class indices follow
/// `option_ids`.
TrainOutcome train_and_evaluate(const std::vector<LabeledSample>& samples,
                                const std::vector<std::string>& option_ids,
                                const TrainConfig& config);

struct RuntimeComparison {
  double brute_force_seconds = 0.0;
  double predict_and_compile_seconds = 0.0;
  double reduction = 0.0;  ///< 1 - fast / slow
  std::string predicted;
  bool identical_output = false;  ///< fast-path circuit equals the sweep's
};

RuntimeComparison runtime_compare(const Circuit& c, const ml::Predictor& predictor,
                                  std::span<const CompilationOption> options,
                                  std::span<const DeviceModel> devices);

// Dataset directory files.

/// circuits/<name>.qasm plus manifest.csv (file, name, num_qubits, fnv1a64).
void write_corpus(const std::filesystem::path& dir, const std::vector<Circuit>& circuits);
std::vector<Circuit> read_corpus(const std::filesystem::path& dir);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string content_hash(std::string_view text);

/// labels.csv (sample, num_qubits, label, one score column per option) and
/// features.csv (full schema plus label), rows aligned.
void write_labels(const std::filesystem::path& dir, const std::vector<LabeledSample>& samples);
std::vector<LabeledSample> read_labels(const std::filesystem::path& dir);

/// split.csv: sample, partition.
void write_split(const std::filesystem::path& dir, const std::vector<LabeledSample>& samples,
                 const Split& split);
Split read_split(const std::filesystem::path& dir, const std::vector<LabeledSample>& samples);

/// rank, count, frequency for ranks 1..num_options.
void write_rank_histogram(const std::filesystem::path& path, const EvalReport& report);

/// circuit, num_qubits, option_id, normalized_score, predicted_flag;
/// circuits ordered by qubit count, options in ranking order.
void write_dot_graph(const std::filesystem::path& path, std::span<const LabeledSample> test,
                     const ml::Predictor& predictor);

/// feature, importance, std. Header only for classifiers without importances.
void write_importance(const std::filesystem::path& path, const ml::Predictor& predictor);

void write_report(const std::filesystem::path& path, const TrainOutcome& outcome,
                  std::size_t num_samples);

}  // namespace qpredict
