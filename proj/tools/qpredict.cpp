// SPDX-License-Identifier: MIT
//
// qpredict: predict, compile and evaluate compilation options for quantum
// circuits, and rebuild the training data behind the predictor.

#include "qpredict/compiler.hpp"
#include "qpredict/corpus.hpp"
#include "qpredict/csv.hpp"
#include "qpredict/errors.hpp"
#include "qpredict/ml/classifier.hpp"
#include "qpredict/pipeline.hpp"
#include "qpredict/qasm.hpp"
#include "qpredict/scoring.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qpredict;

namespace {

/// Reads JSON config files: top-level keys are global options, nested
/// objects hold the options of the subcommand with that name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    throw CLI::ConversionError("writing config files is not supported");
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const nlohmann::json& j, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        collect(value, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Globals {
  int jobs = 0;
  std::string devices_dir;
  std::vector<std::string> device_ids;
  double timeout = 10.0;
  bool verbose = false;
  bool quiet = false;
};

std::vector<DeviceModel> load_fleet(const Globals& g) {
  std::vector<DeviceModel> fleet =
      g.devices_dir.empty() ? builtin_devices() : load_device_dir(g.devices_dir);
  if (fleet.empty()) {
    throw Error("no devices found in " + g.devices_dir);
  }
  if (g.device_ids.empty()) return fleet;
  std::vector<DeviceModel> kept;
  for (const auto& id : g.device_ids) kept.push_back(find_device(fleet, id));
  std::stable_sort(kept.begin(), kept.end(), [](const DeviceModel& a, const DeviceModel& b) {
    return a.num_qubits < b.num_qubits;
  });
  return kept;
}

std::vector<std::string> option_ids(const std::vector<CompilationOption>& options) {
  std::vector<std::string> ids;
  for (const auto& o : options) ids.push_back(o.id());
  return ids;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(text);
      return {n, n};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error("qubit range '" + text + "' is not of the form A..B");
  }
}

// generate ------------------------------------------------------------------

struct GenerateArgs {
  std::string out;
  std::vector<std::string> families;
  std::string qubits = "2..130";
  std::uint64_t seed = 0;
  int random_variants = 10;
  int qaoa_variants = 3;
};

int cmd_generate(const GenerateArgs& a) {
  CorpusSpec spec;
  if (!a.families.empty()) spec.families = a.families;
  for (const auto& f : spec.families) family_supports(f, 2);
  std::tie(spec.min_qubits, spec.max_qubits) = parse_range(a.qubits);
  spec.seed = a.seed;
  spec.random_variants = a.random_variants;
  spec.qaoa_variants = a.qaoa_variants;
  const auto circuits = generate_corpus(spec);
  write_corpus(a.out, circuits);
  std::ifstream in(fs::path(a.out) / "manifest.csv", std::ios::binary);
  std::stringstream manifest;
  manifest << in.rdbuf();
  std::cout << "generated " << circuits.size() << " circuits in " << a.out << "\n"
            << "manifest hash " << content_hash(manifest.str()) << "\n";
  return 0;
}

// label ---------------------------------------------------------------------

struct DataArgs {
  std::string data;
};

std::vector<LabeledSample> run_labeling(const Globals& g, const std::string& dir) {
  const auto fleet = load_fleet(g);
  const auto options = enumerate_options(fleet);
  const auto circuits = read_corpus(dir);
  std::vector<std::string> excluded;
  LabelConfig lc;
  lc.timeout_seconds = g.timeout;
  lc.jobs = g.jobs;
  spdlog::info("labeling {} circuits over {} options", circuits.size(), options.size());
  auto samples = label_dataset(circuits, options, fleet, lc, &excluded);
  if (samples.empty()) {
    throw Error("every circuit was excluded; nothing to label");
  }
  write_labels(dir, samples);
  std::cout << "labeled " << samples.size() << " circuits (" << excluded.size()
            << " excluded) in " << dir << "\n";
  return samples;
}

int cmd_label(const Globals& g, const DataArgs& a) {
  run_labeling(g, a.data);
  return 0;
}

// train / evaluate ----------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string model;
  bool label = false;
  std::string classifier = "rf";
  std::string grid = "full";
  int folds = 5;
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  int n_trees = 500;
  int max_depth = 20;
  int min_leaf = 2;
  int k = 1;
};

void write_evaluation(const fs::path& dir, const TrainOutcome& o,
                      const std::vector<LabeledSample>& samples) {
  std::vector<LabeledSample> test;
  for (std::size_t i : o.split.test) test.push_back(samples[i]);
  write_report(dir / "report.json", o, samples.size());
  write_rank_histogram(dir / "fig4_histogram.csv", o.report);
  write_dot_graph(dir / "fig5_dots.csv", test, o.predictor);
  write_importance(dir / "fig6_importance.csv", o.predictor);
}

void print_report(const TrainOutcome& o) {
  std::printf("classifier %s (%s)\n", o.predictor.classifier->name().c_str(),
              o.chosen.describe().c_str());
  std::printf("train %zu / test %zu, %zu features retained\n", o.split.train.size(),
              o.split.test.size(), o.predictor.schema.size());
  std::printf("accuracy   %.4f\n", o.report.accuracy);
  std::printf("top3       %.4f\n", o.report.top3);
  std::printf("worst rank %d of %d\n", o.report.worst_rank, o.report.num_options);
  std::printf("majority-class accuracy %.4f\n", o.majority_accuracy);
}

int cmd_train(const Globals& g, const TrainArgs& a) {
  const fs::path dir = a.data;
  std::vector<LabeledSample> samples;
  if (a.label) {
    samples = run_labeling(g, a.data);
  } else if (!fs::exists(dir / "labels.csv")) {
    throw Error("no labels.csv in " + a.data + "; run `qpredict label` or pass --label");
  } else {
    samples = read_labels(dir);
  }
  const auto options = samples.front().ranking.options;
  TrainConfig tc;
  tc.classifier = a.classifier;
  tc.grid = a.grid;
  tc.folds = a.folds;
  tc.seed = a.seed;
  tc.test_fraction = a.test_fraction;
  tc.forest.n_trees = a.n_trees;
  tc.forest.max_depth = a.max_depth;
  tc.forest.min_samples_leaf = a.min_leaf;
  tc.k = a.k;
  tc.jobs = g.jobs;
  const TrainOutcome o = train_and_evaluate(samples, option_ids(options), tc);
  const fs::path model = a.model.empty() ? dir / "model.bin" : fs::path(a.model);
  ml::save_predictor(o.predictor, model);
  write_split(dir, samples, o.split);
  write_evaluation(dir, o, samples);
  print_report(o);
  std::cout << "model written to " << model.string() << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string data;
  std::string model;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const fs::path dir = a.data;
  const auto samples = read_labels(dir);
  TrainOutcome o;
  o.predictor = ml::load_predictor(a.model.empty() ? dir / "model.bin" : fs::path(a.model));
  o.split = read_split(dir, samples);
  o.chosen.name = o.predictor.classifier->name();
  if (const auto* f = o.predictor.forest()) o.chosen.forest = f->params;
  if (const auto* knn = dynamic_cast<const ml::KnnClassifier*>(o.predictor.classifier.get())) {
    o.chosen.k = knn->k();
  }
  std::vector<LabeledSample> test;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i : o.split.test) test.push_back(samples[i]);
  for (std::size_t i : o.split.train) ++counts[samples[i].label()];
  if (test.empty()) throw Error("split.csv has no test samples");
  o.report = evaluate(o.predictor, test);
  std::string majority;
  std::size_t best = 0;
  for (const auto& id : o.predictor.label_space) {
    if (counts[id] > best) {
      best = counts[id];
      majority = id;
    }
  }
  std::size_t hits = 0;
  for (const auto& s : test) hits += s.label() == majority ? 1 : 0;
  o.majority_accuracy = static_cast<double>(hits) / static_cast<double>(test.size());
  write_evaluation(dir, o, samples);
  print_report(o);
  return 0;
}

// predict / compile -----------------------------------------------------------

struct PredictArgs {
  std::string qasm;
  std::string model;
  std::size_t top_k = 3;
  bool features = false;
  bool explain = false;
};

int cmd_predict(const PredictArgs& a) {
  const Circuit c = load_qasm(a.qasm);
  const auto p = ml::load_predictor(a.model);
  const auto x = p.features_of(c);
  const auto scores = p.scores(x);
  std::printf("predicted %s\n", p.predict(x).c_str());
  const auto top = p.classifier->predict_top_k(x, a.top_k);
  std::printf("top-%zu\n", a.top_k);
  for (std::size_t i = 0; i < top.size(); ++i) {
    std::printf("  %zu. %-16s %.4f\n", i + 1, p.label_space[top[i]].c_str(), scores[top[i]]);
  }
  if (a.features) {
    std::printf("features\n");
    for (std::size_t j = 0; j < x.size(); ++j) {
      std::printf("  %-28s %s\n", p.schema.names[j].c_str(), csv::format_real(x[j]).c_str());
    }
  }
  if (a.explain) {
    const ml::ForestModel* f = p.forest();
    if (!f) throw Error("--explain needs a forest or tree model");
    const auto rep = ml::feature_importance(*f);
    std::printf("feature importance\n");
    for (int j : ml::rank_descending(rep.importance)) {
      std::printf("  %-28s %.4f +- %.4f\n", rep.features[j].c_str(), rep.importance[j],
                  rep.stddev[j]);
    }
  }
  return 0;
}

struct CompileArgs {
  std::string qasm;
  std::string model;
  std::string option;
  std::string out;
  std::string stats;
  bool all = false;
  std::string ranking;
};

nlohmann::ordered_json stats_json(const CompiledResult& r, const EvalScore& s) {
  nlohmann::ordered_json j;
  j["option"] = r.option.id();
  j["swaps"] = r.stats.swaps;
  j["native_gate_count"] = r.stats.native_gate_count;
  j["placement_fallback"] = r.stats.placement_fallback;
  j["compile_seconds"] = r.stats.compile_seconds;
  j["expected_fidelity"] = s.value;
  j["initial_layout"] = r.initial_layout;
  j["final_layout"] = r.final_layout;
  return j;
}

int cmd_compile(const Globals& g, const CompileArgs& a) {
  const Circuit c = load_qasm(a.qasm);
  const auto fleet = load_fleet(g);
  if (a.all) {
    const auto options = enumerate_options(fleet);
    RankConfig rc;
    rc.timeout_seconds = g.timeout;
    const auto ranking = rank_options(c, options, fleet, rc);
    if (a.ranking.empty()) {
      std::printf("option_id,score,rank,feasible\n");
      for (std::size_t i = 0; i < ranking.size(); ++i) {
        std::printf("%s,%s,%d,%d\n", ranking.options[i].id().c_str(),
                    csv::format_real(ranking.scores[i].value).c_str(), ranking.rank_of[i],
                    ranking.scores[i].feasible ? 1 : 0);
      }
    } else {
      write_ranking_csv(ranking, a.ranking);
      std::cout << "best " << ranking.best().id() << "; ranking written to " << a.ranking
                << "\n";
    }
    return 0;
  }
  std::string chosen = a.option;
  if (chosen.empty()) {
    const auto p = ml::load_predictor(a.model);
    chosen = p.predict(p.features_of(c));
  }
  const auto option = CompilationOption::parse(chosen);
  const DeviceModel& d = find_device(fleet, option.device_id);
  const CompiledResult r = compile(c, option, fleet);
  const EvalScore s = evaluate_score(r, d);
  write_text(a.out, to_qasm(r.circuit));
  if (!a.stats.empty()) write_text(a.stats, stats_json(r, s).dump(2) + "\n");
  if (!a.out.empty() && a.out != "-") {
    std::cout << "compiled with " << option.id() << ": " << r.stats.native_gate_count
              << " gates, " << r.stats.swaps << " swaps, expected fidelity "
              << csv::format_real(s.value) << "\n";
  }
  return 0;
}

struct RuntimeArgs {
  std::string qasm;
  std::string model;
};

int cmd_runtime(const Globals& g, const RuntimeArgs& a) {
  const Circuit c = load_qasm(a.qasm);
  const auto fleet = load_fleet(g);
  const auto options = enumerate_options(fleet);
  const auto p = ml::load_predictor(a.model);
  const auto r = runtime_compare(c, p, options, fleet);
  std::printf("brute force over %zu options  %.6f s\n", options.size(), r.brute_force_seconds);
  std::printf("predict and compile (%s)  %.6f s\n", r.predicted.c_str(),
              r.predict_and_compile_seconds);
  std::printf("reduction %.1f%%, speedup %.1fx, same circuit as sweep: %s\n", 100.0 * r.reduction,
              r.brute_force_seconds / r.predict_and_compile_seconds,
              r.identical_output ? "yes" : "no");
  return 0;
}

// devices -------------------------------------------------------------------

struct DevicesArgs {
  std::string out;
};

int cmd_devices(const Globals& g, const DevicesArgs& a) {
  const auto fleet = load_fleet(g);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    for (const auto& d : fleet) write_device(d, fs::path(a.out) / (d.id + ".json"));
    std::cout << "wrote " << fleet.size() << " device files to " << a.out << "\n";
    return 0;
  }
  for (const auto& d : fleet) {
    std::printf("%-8s %-16s %4d qubits  %4zu directed couplings  max degree %d\n", d.id.c_str(),
                std::string(technology_name(d.technology)).c_str(), d.num_qubits,
                d.coupling.size(), max_degree(d));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict good compilation options for quantum circuits"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with default option values")
      ->envname("QPREDICT_CONFIG");

  Globals g;
  app.add_option("-j,--jobs", g.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--devices", g.devices_dir, "Directory of device files (default: built-in fleet)")
      ->check(CLI::ExistingDirectory);
  app.add_option("--device-ids", g.device_ids, "Restrict the fleet to these device ids")
      ->delimiter(',');
  app.add_option("--timeout", g.timeout, "Per-option compile timeout in seconds")
      ->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "Log progress");
  app.add_flag("-q,--quiet", g.quiet, "Only log errors");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a generated circuit corpus");
  generate->add_option("-o,--out", gen.out, "Output directory")->required();
  generate->add_option("--families", gen.families, "Comma-separated families")->delimiter(',');
  generate->add_option("--qubits", gen.qubits, "Qubit range A..B")->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--random-variants", gen.random_variants)->capture_default_str();
  generate->add_option("--qaoa-variants", gen.qaoa_variants)->capture_default_str();

  DataArgs lab;
  auto* label = app.add_subcommand("label", "Label a corpus by compiling every option");
  label->add_option("-d,--data", lab.data, "Dataset directory")->required()
      ->check(CLI::ExistingDirectory);

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train and evaluate a classifier");
  train->add_option("-d,--data", tr.data, "Dataset directory")->required()
      ->check(CLI::ExistingDirectory);
  train->add_option("-m,--model", tr.model, "Model output (default: <data>/model.bin)");
  train->add_flag("--label", tr.label, "Label the corpus first");
  train->add_option("--classifier", tr.classifier)
      ->check(CLI::IsMember({"rf", "dt", "knn", "nb"}))->capture_default_str();
  train->add_option("--grid", tr.grid, "full, small or none")
      ->check(CLI::IsMember({"full", "small", "none"}))->capture_default_str();
  train->add_option("--folds", tr.folds)->check(CLI::Range(2, 100))->capture_default_str();
  train->add_option("--seed", tr.seed)->capture_default_str();
  train->add_option("--test-fraction", tr.test_fraction)
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  train->add_option("--n-trees", tr.n_trees, "Used with --grid none")->capture_default_str();
  train->add_option("--max-depth", tr.max_depth, "-1 for no limit; used with --grid none")
      ->capture_default_str();
  train->add_option("--min-leaf", tr.min_leaf, "Used with --grid none")->capture_default_str();
  train->add_option("--k", tr.k, "Neighbours for knn; used with --grid none")
      ->capture_default_str();

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Re-evaluate a model on the test split");
  evaluate_cmd->add_option("-d,--data", ev.data, "Dataset directory")->required()
      ->check(CLI::ExistingDirectory);
  evaluate_cmd->add_option("-m,--model", ev.model, "Model file (default: <data>/model.bin)");

  PredictArgs pr;
  auto* predict = app.add_subcommand("predict", "Predict the best option for a circuit");
  predict->add_option("qasm", pr.qasm, "OpenQASM 2.0 file")->required()
      ->check(CLI::ExistingFile);
  predict->add_option("-m,--model", pr.model, "Model file")->required()->check(CLI::ExistingFile);
  predict->add_option("-k,--top-k", pr.top_k)->capture_default_str();
  predict->add_flag("--features", pr.features, "Print the feature vector");
  predict->add_flag("--explain", pr.explain, "Print the model's feature importances");

  CompileArgs co;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a circuit");
  compile_cmd->add_option("qasm", co.qasm, "OpenQASM 2.0 file")->required()
      ->check(CLI::ExistingFile);
  auto* model_opt = compile_cmd->add_option("-m,--model", co.model, "Use the predicted option")
                        ->check(CLI::ExistingFile);
  auto* option_opt = compile_cmd->add_option("--option", co.option, "Explicit option id");
  auto* all_opt = compile_cmd->add_flag("--all", co.all, "Rank every option");
  model_opt->excludes(option_opt);
  all_opt->excludes(model_opt)->excludes(option_opt);
  compile_cmd->add_option("-o,--out", co.out, "Compiled circuit (default: stdout)");
  compile_cmd->add_option("--stats", co.stats, "Stats JSON output");
  compile_cmd->add_option("--ranking", co.ranking, "Ranking CSV output for --all");

  RuntimeArgs rt;
  auto* runtime = app.add_subcommand("runtime", "Time predict-and-compile against the full sweep");
  runtime->add_option("qasm", rt.qasm, "OpenQASM 2.0 file")->required()->check(CLI::ExistingFile);
  runtime->add_option("-m,--model", rt.model, "Model file")->required()->check(CLI::ExistingFile);

  DevicesArgs dv;
  auto* devices = app.add_subcommand("devices", "List the fleet or write its device files");
  devices->add_option("-o,--out", dv.out, "Write one JSON file per device here");

  CLI11_PARSE(app, argc, argv);

  spdlog::set_default_logger(spdlog::stderr_color_st("qpredict"));
  spdlog::set_pattern("%l: %v");
  spdlog::set_level(g.quiet ? spdlog::level::err
                            : (g.verbose ? spdlog::level::info : spdlog::level::warn));

  try {
    if (*generate) return cmd_generate(gen);
    if (*label) return cmd_label(g, lab);
    if (*train) return cmd_train(g, tr);
    if (*evaluate_cmd) return cmd_evaluate(ev);
    if (*predict) return cmd_predict(pr);
    if (*compile_cmd) {
      if (co.model.empty() && co.option.empty() && !co.all) {
        throw Error("compile needs --model, --option or --all");
      }
      return cmd_compile(g, co);
    }
    if (*runtime) return cmd_runtime(g, rt);
    if (*devices) return cmd_devices(g, dv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
