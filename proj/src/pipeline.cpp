// SPDX-License-Identifier: MIT

#include "qpredict/pipeline.hpp"

#include "qpredict/csv.hpp"
#include "qpredict/errors.hpp"
#include "qpredict/qasm.hpp"

#include "json.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#ifdef QPREDICT_HAVE_OPENMP
#include <omp.h>
#endif

namespace qpredict {

namespace fs = std::filesystem;

namespace {

std::optional<LabeledSample> label_one(const Circuit& c,
                                       std::span<const CompilationOption> options,
                                       std::span<const DeviceModel> devices,
                                       const LabelConfig& config) {
  RankConfig rc;
  rc.timeout_seconds = config.timeout_seconds;
  OptionRanking ranking = rank_options(c, options, devices, rc);
  if (!ranking.any_feasible()) {
    return std::nullopt;
  }
  LabeledSample s;
  s.name = c.name();
  s.num_qubits = c.num_qubits();
  s.features = extract_features(c).values;
  s.ranking = std::move(ranking);
  return s;
}

std::vector<LabeledSample> collect(const std::vector<Circuit>& circuits,
                                   std::vector<std::optional<LabeledSample>>& slots,
                                   std::vector<std::string>* excluded) {
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
      continue;
    }
    spdlog::info("excluding {}: no option is feasible within the timeout", circuits[i].name());
    if (excluded) excluded->push_back(circuits[i].name());
  }
  return out;
}

}  // namespace

std::vector<LabeledSample> label_dataset_ref(const std::vector<Circuit>& circuits,
                                             std::span<const CompilationOption> options,
                                             std::span<const DeviceModel> devices,
                                             const LabelConfig& config,
                                             std::vector<std::string>* excluded) {
  if (circuits.empty() || options.empty()) {
    throw Error("labeling needs at least one circuit and one option");
  }
  std::vector<std::optional<LabeledSample>> slots(circuits.size());
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    slots[i] = label_one(circuits[i], options, devices, config);
  }
  return collect(circuits, slots, excluded);
}

std::vector<LabeledSample> label_dataset(const std::vector<Circuit>& circuits,
                                         std::span<const CompilationOption> options,
                                         std::span<const DeviceModel> devices,
                                         const LabelConfig& config,
                                         std::vector<std::string>* excluded) {
#ifdef QPREDICT_HAVE_OPENMP
  if (circuits.empty() || options.empty()) {
    throw Error("labeling needs at least one circuit and one option");
  }
  std::vector<std::optional<LabeledSample>> slots(circuits.size());
  const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
  const long n = static_cast<long>(circuits.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      slots[i] = label_one(circuits[i], options, devices, config);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return collect(circuits, slots, excluded);
#else
  return label_dataset_ref(circuits, options, devices, config, excluded);
#endif
}

Split split_dataset(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("test fraction must lie strictly between 0 and 1");
  }
  if (n < 2) {
    throw Error("need at least 2 samples to split");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CounterRng rng(seed);
  rng.shuffle(idx);
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - test_fraction)));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<long>(n_train));
  s.test.assign(idx.begin() + static_cast<long>(n_train), idx.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

EvalReport report_from_ranks(std::vector<int> ranks, int num_options) {
  EvalReport r;
  r.num_options = num_options;
  r.rank_frequency.assign(static_cast<std::size_t>(num_options), 0.0);
  if (ranks.empty()) {
    throw Error("cannot evaluate on an empty test set");
  }
  std::size_t first = 0;
  std::size_t top3 = 0;
  for (int rank : ranks) {
    if (rank < 1 || rank > num_options) throw Error("rank out of range");
    if (rank == 1) ++first;
    if (rank <= 3) ++top3;
    r.worst_rank = std::max(r.worst_rank, rank);
    r.rank_frequency[rank - 1] += 1.0;
  }
  const double n = static_cast<double>(ranks.size());
  r.accuracy = static_cast<double>(first) / n;
  r.top3 = static_cast<double>(top3) / n;
  for (double& f : r.rank_frequency) f /= n;
  r.ranks = std::move(ranks);
  return r;
}

EvalReport evaluate(const ml::Predictor& predictor, std::span<const LabeledSample> test) {
  std::vector<int> ranks;
  int num_options = 0;
  for (const auto& s : test) {
    const auto x = project(s.features, full_feature_schema(), predictor.schema);
    const std::string& predicted = predictor.predict(x);
    ranks.push_back(s.ranking.rank(predicted));
    num_options = static_cast<int>(s.ranking.size());
  }
  return report_from_ranks(std::move(ranks), num_options);
}

TrainOutcome train_and_evaluate(const std::vector<LabeledSample>& samples,
                                const std::vector<std::string>& option_ids,
                                const TrainConfig& config) {
  TrainOutcome out;
  out.split = split_dataset(samples.size(), config.test_fraction, config.seed);
  std::map<std::string, int> class_of;
  for (std::size_t i = 0; i < option_ids.size(); ++i) {
    class_of[option_ids[i]] = static_cast<int>(i);
  }
  auto label_index = [&](const LabeledSample& s) {
    const auto it = class_of.find(s.label());
    if (it == class_of.end()) throw Error("label " + s.label() + " is not a known option");
    return it->second;
  };

  std::vector<std::vector<double>> full_train;
  for (std::size_t i : out.split.train) full_train.push_back(samples[i].features);
  const FeatureSchema schema = prune_constant_features(full_feature_schema(), full_train);

  ml::Matrix X;
  std::vector<int> y;
  for (std::size_t i : out.split.train) {
    X.push_back(project(samples[i].features, full_feature_schema(), schema));
    y.push_back(label_index(samples[i]));
  }
  const int k = static_cast<int>(option_ids.size());
  std::vector<std::size_t> counts(option_ids.size(), 0);
  for (int c : y) ++counts[c];
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    spdlog::warn("training labels contain a single class");
  }

  if (config.grid == "none") {
    out.chosen.name = config.classifier;
    out.chosen.forest = config.classifier == "dt"
                            ? ml::DecisionTreeClassifier::tree_params(config.forest.max_depth,
                                                                      config.forest.min_samples_leaf)
                            : config.forest;
    out.chosen.k = config.k;
  } else if (config.grid == "full" || config.grid == "small") {
    auto grid = ml::default_grid(config.classifier, config.grid == "small");
    for (auto& g : grid) {
      g.seed = config.seed;
      g.jobs = config.jobs;
    }
    out.cv = ml::grid_search_cv(X, y, k, grid, config.folds, config.seed);
    out.chosen = out.cv.grid[out.cv.best];
  } else {
    throw Error("unknown grid '" + config.grid + "' (expected full, small or none)");
  }
  out.chosen.seed = config.seed;
  out.chosen.jobs = config.jobs;

  auto clf = ml::make_classifier(out.chosen);
  clf->fit(X, y, k);
  if (auto* rf = dynamic_cast<ml::RandomForestClassifier*>(clf.get())) {
    rf->model().schema = schema;
    rf->model().label_space = option_ids;
  }
  out.predictor.schema = schema;
  out.predictor.label_space = option_ids;
  out.predictor.seed = config.seed;
  out.predictor.classifier = std::move(clf);

  std::vector<LabeledSample> test;
  for (std::size_t i : out.split.test) test.push_back(samples[i]);
  out.report = evaluate(out.predictor, test);

  const int majority = ml::argmax(std::vector<double>(counts.begin(), counts.end()));
  std::size_t hits = 0;
  for (const auto& s : test) {
    if (s.label() == option_ids[majority]) ++hits;
  }
  out.majority_accuracy = static_cast<double>(hits) / static_cast<double>(test.size());
  return out;
}

RuntimeComparison runtime_compare(const Circuit& c, const ml::Predictor& predictor,
                                  std::span<const CompilationOption> options,
                                  std::span<const DeviceModel> devices) {
  using clock = std::chrono::steady_clock;
  RuntimeComparison r;
  RankConfig rc;
  rc.keep_results = true;
  rc.timeout_seconds = 1e300;
  const auto t0 = clock::now();
  const OptionRanking sweep = rank_options(c, options, devices, rc);
  const auto t1 = clock::now();
  const auto x = predictor.features_of(c);
  r.predicted = predictor.predict(x);
  const auto option = CompilationOption::parse(r.predicted);
  CompiledResult fast = compile(c, option, devices);
  const auto t2 = clock::now();
  r.brute_force_seconds = std::chrono::duration<double>(t1 - t0).count();
  r.predict_and_compile_seconds = std::chrono::duration<double>(t2 - t1).count();
  r.reduction = 1.0 - r.predict_and_compile_seconds / r.brute_force_seconds;
  const auto& kept = sweep.results[sweep.index_of(r.predicted)];
  r.identical_output = kept.has_value() && kept->same_output(fast);
  return r;
}

std::string content_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h = (h ^ ch) * 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

void write_corpus(const fs::path& dir, const std::vector<Circuit>& circuits) {
  fs::create_directories(dir / "circuits");
  std::vector<std::vector<std::string>> rows{{"file", "name", "num_qubits", "fnv1a64"}};
  for (const auto& c : circuits) {
    const std::string text = to_qasm(c);
    const std::string file = "circuits/" + c.name() + ".qasm";
    std::ofstream out(dir / file, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + (dir / file).string());
    rows.push_back({file, c.name(), std::to_string(c.num_qubits()), content_hash(text)});
  }
  csv::write_file((dir / "manifest.csv").string(), rows);
}

std::vector<Circuit> read_corpus(const fs::path& dir) {
  const auto rows = csv::read_file((dir / "manifest.csv").string());
  if (rows.empty() || rows.front().size() < 2 || rows.front()[0] != "file") {
    throw Error((dir / "manifest.csv").string() + " is not a corpus manifest");
  }
  std::vector<Circuit> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    Circuit c = load_qasm(dir / rows[i][0]);
    c.set_name(rows[i][1]);
    out.push_back(std::move(c));
  }
  return out;
}

void write_labels(const fs::path& dir, const std::vector<LabeledSample>& samples) {
  if (samples.empty()) {
    throw Error("no labeled samples to write");
  }
  fs::create_directories(dir);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"sample", "num_qubits", "label"};
  for (const auto& o : samples.front().ranking.options) header.push_back(o.id());
  rows.push_back(header);
  std::vector<std::vector<double>> feature_rows;
  std::vector<std::string> labels;
  for (const auto& s : samples) {
    std::vector<std::string> row{s.name, std::to_string(s.num_qubits), s.label()};
    for (const auto& sc : s.ranking.scores) row.push_back(csv::format_real(sc.value));
    rows.push_back(std::move(row));
    feature_rows.push_back(s.features);
    labels.push_back(s.label());
  }
  csv::write_file((dir / "labels.csv").string(), rows);
  write_feature_csv((dir / "features.csv").string(), full_feature_schema(), feature_rows, labels);
}

std::vector<LabeledSample> read_labels(const fs::path& dir) {
  const auto rows = csv::read_file((dir / "labels.csv").string());
  if (rows.size() < 2 || rows.front().size() < 4 || rows.front()[0] != "sample") {
    throw Error((dir / "labels.csv").string() + " has no labeled samples");
  }
  std::vector<CompilationOption> options;
  for (std::size_t j = 3; j < rows.front().size(); ++j) {
    options.push_back(CompilationOption::parse(rows.front()[j]));
  }
  const FeatureTable table = read_feature_csv((dir / "features.csv").string());
  if (table.rows.size() != rows.size() - 1) {
    throw Error("features.csv and labels.csv have different row counts");
  }
  if (!(table.schema == full_feature_schema())) {
    throw Error("features.csv does not use the full feature schema");
  }
  std::vector<LabeledSample> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != rows.front().size()) {
      throw Error("labels.csv row " + std::to_string(i + 1) + " has the wrong width");
    }
    std::vector<EvalScore> scores;
    for (std::size_t j = 3; j < row.size(); ++j) {
      const double v = csv::parse_real(row[j]);
      scores.push_back({v, v > 0.0});
    }
    LabeledSample s;
    s.name = row[0];
    s.num_qubits = std::stoi(row[1]);
    s.features = table.rows[i - 1];
    s.ranking = ranking_from_scores(options, std::move(scores));
    if (s.label() != row[2]) {
      throw Error("labels.csv row " + std::to_string(i + 1) +
                  ": label does not match the best score");
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_split(const fs::path& dir, const std::vector<LabeledSample>& samples,
                 const Split& split) {
  std::vector<std::string> part(samples.size());
  for (std::size_t i : split.train) part[i] = "train";
  for (std::size_t i : split.test) part[i] = "test";
  std::vector<std::vector<std::string>> rows{{"sample", "partition"}};
  for (std::size_t i = 0; i < samples.size(); ++i) rows.push_back({samples[i].name, part[i]});
  csv::write_file((dir / "split.csv").string(), rows);
}

Split read_split(const fs::path& dir, const std::vector<LabeledSample>& samples) {
  const auto rows = csv::read_file((dir / "split.csv").string());
  if (rows.size() != samples.size() + 1) {
    throw Error("split.csv does not match labels.csv");
  }
  Split s;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2 || rows[i][0] != samples[i - 1].name) {
      throw Error("split.csv row " + std::to_string(i + 1) + " does not match labels.csv");
    }
    (rows[i][1] == "test" ? s.test : s.train).push_back(i - 1);
  }
  return s;
}

void write_rank_histogram(const fs::path& path, const EvalReport& report) {
  std::vector<std::vector<std::string>> rows{{"rank", "count", "frequency"}};
  for (std::size_t r = 0; r < report.rank_frequency.size(); ++r) {
    const auto count = std::count(report.ranks.begin(), report.ranks.end(), static_cast<int>(r + 1));
    rows.push_back({std::to_string(r + 1), std::to_string(count),
                    csv::format_real(report.rank_frequency[r])});
  }
  csv::write_file(path.string(), rows);
}

void write_dot_graph(const fs::path& path, std::span<const LabeledSample> test,
                     const ml::Predictor& predictor) {
  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return test[a].num_qubits < test[b].num_qubits;
  });
  std::vector<std::vector<std::string>> rows{
      {"circuit", "num_qubits", "option_id", "normalized_score", "predicted_flag"}};
  for (std::size_t i : order) {
    const auto& s = test[i];
    const auto x = project(s.features, full_feature_schema(), predictor.schema);
    const std::string predicted = predictor.predict(x);
    const auto norm = normalize_scores(s.ranking);
    for (std::size_t j : s.ranking.order) {
      const std::string id = s.ranking.options[j].id();
      rows.push_back({s.name, std::to_string(s.num_qubits), id, csv::format_real(norm[j]),
                      id == predicted ? "1" : "0"});
    }
  }
  csv::write_file(path.string(), rows);
}

void write_importance(const fs::path& path, const ml::Predictor& predictor) {
  std::vector<std::vector<std::string>> rows{{"feature", "importance", "std"}};
  if (const ml::ForestModel* f = predictor.forest()) {
    const auto rep = ml::feature_importance(*f);
    for (std::size_t j = 0; j < rep.features.size(); ++j) {
      rows.push_back({rep.features[j], csv::format_real(rep.importance[j]),
                      csv::format_real(rep.stddev[j])});
    }
  }
  csv::write_file(path.string(), rows);
}

void write_report(const fs::path& path, const TrainOutcome& o, std::size_t num_samples) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["classifier"] = o.predictor.classifier ? o.predictor.classifier->name() : "";
  j["params"] = o.chosen.describe();
  j["seed"] = o.predictor.seed;
  j["num_samples"] = num_samples;
  j["num_train"] = o.split.train.size();
  j["num_test"] = o.split.test.size();
  j["num_options"] = o.report.num_options;
  j["retained_features"] = o.predictor.schema.names;
  j["pruned_features"] = o.predictor.schema.pruned;
  j["accuracy"] = o.report.accuracy;
  j["top3"] = o.report.top3;
  j["worst_rank"] = o.report.worst_rank;
  j["majority_baseline_accuracy"] = o.majority_accuracy;
  if (!o.cv.grid.empty()) {
    ordered_json cv;
    cv["stratified"] = o.cv.stratified;
    cv["best"] = o.cv.grid[o.cv.best].describe();
    ordered_json points = ordered_json::array();
    for (std::size_t i = 0; i < o.cv.grid.size(); ++i) {
      points.push_back({{"params", o.cv.grid[i].describe()},
                        {"mean_accuracy", o.cv.mean_accuracy[i]}});
    }
    cv["grid"] = std::move(points);
    j["cross_validation"] = std::move(cv);
  }
  j["reference"] = {{"note", "published random-forest results on a different corpus; not asserted"},
                    {"accuracy_above", 0.75},
                    {"top3_above", 0.90},
                    {"worst_rank", 12},
                    {"worst_rank_of", 30}};
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace qpredict
