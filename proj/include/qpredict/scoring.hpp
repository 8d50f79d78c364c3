// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/compiler.hpp"
#include "qpredict/device.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpredict {

/// Expected fidelity of a compiled circuit. Infeasible options score 0.
struct EvalScore {
  double value = 0.0;
  bool feasible = false;

  bool operator==(const EvalScore&) const = default;
};

inline EvalScore infeasible_score() { return {0.0, false}; }

/// Sum of log gate and readout fidelities over `c`, whose qubits are
/// physical qubits of `d`. Barriers are ignored. Throws DeviceError when
/// an instruction has no calibration entry.
double log_fidelity(const Circuit& c, const DeviceModel& d);

EvalScore evaluate_score(const Circuit& compiled, const DeviceModel& d);
EvalScore evaluate_score(const CompiledResult& r, const DeviceModel& d);

struct RankConfig {
  double timeout_seconds = 10.0;
  bool keep_results = false;  ///< retain each CompiledResult
};

/// Scores for a list of options, with ranks 1..N. Ties go to the option
/// listed first.
struct OptionRanking {
  std::vector<CompilationOption> options;
  std::vector<EvalScore> scores;          ///< aligned with options
  std::vector<std::size_t> order;         ///< option indices, best first
  std::vector<int> rank_of;               ///< aligned with options
  std::vector<bool> timed_out;            ///< aligned with options
  std::vector<std::optional<CompiledResult>> results;  ///< when kept

  std::size_t size() const { return options.size(); }
  const CompilationOption& best() const { return options.at(order.at(0)); }
  std::size_t best_index() const { return order.at(0); }
  bool any_feasible() const;
  std::size_t feasible_count() const;
  /// Index of `option_id`, or throws Error.
  std::size_t index_of(const std::string& option_id) const;
  int rank(const std::string& option_id) const { return rank_of[index_of(option_id)]; }
};

/// Builds order and ranks from per-option scores.
OptionRanking ranking_from_scores(std::vector<CompilationOption> options,
                                  std::vector<EvalScore> scores);

/// Compiles every option that fits and scores it. Options that are too
/// narrow, or whose compilation takes at least the timeout, score 0.
OptionRanking rank_options(const Circuit& c, std::span<const CompilationOption> options,
                           std::span<const DeviceModel> devices,
                           const RankConfig& config = {});

/// Scores divided by the best score; all zeros when nothing is feasible.
std::vector<double> normalize_scores(const OptionRanking& ranking);

/// `option_id,score,rank,feasible`, one row per option in option order.
void write_ranking_csv(const OptionRanking& ranking, const std::filesystem::path& path);

}  // namespace qpredict
