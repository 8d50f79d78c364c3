// SPDX-License-Identifier: MIT

#include "qpredict/scoring.hpp"

#include "qpredict/csv.hpp"
#include "qpredict/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace qpredict {

double log_fidelity(const Circuit& c, const DeviceModel& d) {
  double sum = 0.0;
  for (const auto& op : c.ops()) {
    if (op.kind == GateKind::Barrier) continue;
    if (op.kind == GateKind::Measure) {
      const auto f = d.calibration.readout(op.qubits[0]);
      if (!f) {
        throw DeviceError(d.id + ": no readout fidelity for qubit " +
                          std::to_string(op.qubits[0]));
      }
      sum += std::log(*f);
      continue;
    }
    const auto f = d.calibration.gate(op.kind, op.qubits);
    if (!f) {
      std::string where;
      for (Qubit q : op.qubits) {
        where += (where.empty() ? "" : ",") + std::to_string(q);
      }
      throw DeviceError(d.id + ": no fidelity for " + std::string(gate_name(op.kind)) +
                        " on (" + where + ")");
    }
    sum += std::log(*f);
  }
  return sum;
}

EvalScore evaluate_score(const Circuit& compiled, const DeviceModel& d) {
  if (compiled.num_qubits() > d.num_qubits) {
    return infeasible_score();
  }
  return {std::exp(log_fidelity(compiled, d)), true};
}

EvalScore evaluate_score(const CompiledResult& r, const DeviceModel& d) {
  return evaluate_score(r.circuit, d);
}

bool OptionRanking::any_feasible() const {
  return std::any_of(scores.begin(), scores.end(), [](const EvalScore& s) { return s.feasible; });
}

std::size_t OptionRanking::feasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(scores.begin(), scores.end(), [](const EvalScore& s) { return s.feasible; }));
}

std::size_t OptionRanking::index_of(const std::string& option_id) const {
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].id() == option_id) return i;
  }
  throw Error("option '" + option_id + "' is not part of the ranking");
}

OptionRanking ranking_from_scores(std::vector<CompilationOption> options,
                                  std::vector<EvalScore> scores) {
  if (options.size() != scores.size()) {
    throw Error("ranking needs one score per option");
  }
  OptionRanking r;
  r.options = std::move(options);
  r.scores = std::move(scores);
  r.order.resize(r.options.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
    return r.scores[a].value > r.scores[b].value;
  });
  r.rank_of.assign(r.options.size(), 0);
  for (std::size_t pos = 0; pos < r.order.size(); ++pos) {
    r.rank_of[r.order[pos]] = static_cast<int>(pos) + 1;
  }
  r.timed_out.assign(r.options.size(), false);
  r.results.resize(r.options.size());
  return r;
}

OptionRanking rank_options(const Circuit& c, std::span<const CompilationOption> options,
                           std::span<const DeviceModel> devices, const RankConfig& config) {
  if (options.empty()) {
    throw Error("no compilation options to rank");
  }
  std::vector<EvalScore> scores(options.size(), infeasible_score());
  std::vector<bool> timed_out(options.size(), false);
  std::vector<std::optional<CompiledResult>> kept(options.size());
  for (std::size_t i = 0; i < options.size(); ++i) {
    const DeviceModel& d = find_device(devices, options[i].device_id);
    if (c.num_qubits() > d.num_qubits) continue;
    const auto start = std::chrono::steady_clock::now();
    CompiledResult r = compile(c, options[i], devices);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= config.timeout_seconds) {
      timed_out[i] = true;
      continue;
    }
    scores[i] = evaluate_score(r, d);
    if (config.keep_results) kept[i] = std::move(r);
  }
  OptionRanking ranking = ranking_from_scores({options.begin(), options.end()}, std::move(scores));
  ranking.timed_out = std::move(timed_out);
  ranking.results = std::move(kept);
  return ranking;
}

std::vector<double> normalize_scores(const OptionRanking& ranking) {
  std::vector<double> out(ranking.size(), 0.0);
  if (!ranking.any_feasible()) return out;
  const double best = ranking.scores[ranking.best_index()].value;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ranking.scores[i].value / best;
  }
  return out;
}

void write_ranking_csv(const OptionRanking& ranking, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows{{"option_id", "score", "rank", "feasible"}};
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    rows.push_back({ranking.options[i].id(), csv::format_real(ranking.scores[i].value),
                    std::to_string(ranking.rank_of[i]),
                    ranking.scores[i].feasible ? "1" : "0"});
  }
  csv::write_file(path.string(), rows);
}

}  // namespace qpredict
