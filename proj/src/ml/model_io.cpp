// SPDX-License-Identifier: MIT

#include "qpredict/errors.hpp"
#include "qpredict/ml/classifier.hpp"

#include "json.hpp"

#include <fstream>
#include <iterator>

namespace qpredict::ml {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "qpredict-model";
constexpr int kVersion = 1;

json forest_params_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", p.max_depth < 0 ? json(nullptr) : json(p.max_depth)},
          {"min_samples_leaf", p.min_samples_leaf},
          {"max_features", p.max_features},
          {"bootstrap", p.bootstrap}};
}

ForestParams forest_params_from(const json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<int>();
  p.max_depth = j.at("max_depth").is_null() ? kNoDepthLimit : j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  p.max_features = j.at("max_features").get<int>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  return p;
}

json tree_json(const Tree& t) {
  std::vector<double> values;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.is_leaf(i)) values.insert(values.end(), t.histogram[i].begin(), t.histogram[i].end());
  }
  return {{"feature", t.feature}, {"threshold", t.threshold}, {"left", t.left},
          {"right", t.right},     {"samples", t.samples},     {"impurity", t.impurity},
          {"values", values}};
}

Tree tree_from(const json& j, int num_features, int num_classes) {
  Tree t;
  t.num_features = num_features;
  t.num_classes = num_classes;
  t.feature = j.at("feature").get<std::vector<int>>();
  t.threshold = j.at("threshold").get<std::vector<double>>();
  t.left = j.at("left").get<std::vector<int>>();
  t.right = j.at("right").get<std::vector<int>>();
  t.samples = j.at("samples").get<std::vector<double>>();
  t.impurity = j.at("impurity").get<std::vector<double>>();
  const auto values = j.at("values").get<std::vector<double>>();
  const std::size_t n = t.feature.size();
  if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
      t.samples.size() != n || t.impurity.size() != n) {
    throw ModelError("tree arrays have inconsistent lengths");
  }
  t.histogram.resize(n);
  std::size_t pos = 0;
  const auto k = static_cast<std::size_t>(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.feature[i] < 0) {
      if (pos + k > values.size()) throw ModelError("leaf histograms are truncated");
      t.histogram[i].assign(values.begin() + static_cast<long>(pos),
                            values.begin() + static_cast<long>(pos + k));
      pos += k;
      continue;
    }
    const auto in_range = [&](int c) {
      return c > static_cast<int>(i) && c < static_cast<int>(n);
    };
    if (t.feature[i] >= num_features || !in_range(t.left[i]) || !in_range(t.right[i])) {
      throw ModelError("tree node " + std::to_string(i) + " is malformed");
    }
  }
  if (pos != values.size()) throw ModelError("leaf histograms have trailing values");
  return t;
}

json schema_json(const FeatureSchema& s) { return {{"names", s.names}, {"pruned", s.pruned}}; }

FeatureSchema schema_from(const json& j) {
  return {j.at("names").get<std::vector<std::string>>(),
          j.at("pruned").get<std::vector<std::string>>()};
}

json document(const std::string& classifier, const FeatureSchema& schema,
              const std::vector<std::string>& labels, std::uint64_t seed) {
  return {{"format", kFormat},          {"version", kVersion},
          {"classifier", classifier},   {"seed", seed},
          {"schema", schema_json(schema)}, {"label_space", labels}};
}

void add_forest(json& doc, const ForestModel& m) {
  doc["params"] = forest_params_json(m.params);
  doc["num_features"] = m.trees.empty() ? 0 : m.trees.front().num_features;
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(tree_json(t));
  doc["trees"] = std::move(trees);
}

ForestModel forest_from(const json& doc) {
  ForestModel m;
  m.params = forest_params_from(doc.at("params"));
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.schema = schema_from(doc.at("schema"));
  m.label_space = doc.at("label_space").get<std::vector<std::string>>();
  const int f = doc.at("num_features").get<int>();
  const int k = static_cast<int>(m.label_space.size());
  for (const auto& t : doc.at("trees")) m.trees.push_back(tree_from(t, f, k));
  if (m.trees.empty()) throw ModelError("model has no trees");
  if (m.schema.size() != static_cast<std::size_t>(f)) {
    throw ModelError("model schema does not match its trees");
  }
  return m;
}

void write_doc(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (path.extension() == ".json") {
    out << doc.dump() << '\n';
  } else {
    const auto bytes = json::to_cbor(doc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
  }
  if (!out) throw Error("cannot write " + path.string());
}

json read_doc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.empty()) throw ModelError("model file " + path.string() + " is empty");
  json doc;
  try {
    doc = bytes.front() == '{' ? json::parse(bytes.begin(), bytes.end()) : json::from_cbor(bytes);
  } catch (const json::exception& e) {
    throw ModelError("model file " + path.string() + " is corrupt: " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormat) {
    throw ModelError(path.string() + " is not a qpredict model file");
  }
  if (!doc.contains("version") || doc.at("version") != kVersion) {
    throw ModelError("unsupported model version in " + path.string() + " (expected " +
                     std::to_string(kVersion) + ")");
  }
  return doc;
}

template <class F>
auto guarded(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ModelError("model file " + path.string() + " is malformed: " + e.what());
  }
}

}  // namespace

void save_model(const ForestModel& model, const std::filesystem::path& path) {
  const bool single = model.params.n_trees == 1 && !model.params.bootstrap;
  json doc = document(single ? "dt" : "rf", model.schema, model.label_space, model.seed);
  add_forest(doc, model);
  write_doc(doc, path);
}

ForestModel load_model(const std::filesystem::path& path) {
  const json doc = read_doc(path);
  const auto kind = doc.value("classifier", "");
  if (kind != "rf" && kind != "dt") {
    throw ModelError(path.string() + " holds a '" + kind + "' model, not a forest");
  }
  return guarded(path, [&] { return forest_from(doc); });
}

void save_predictor(const Predictor& p, const std::filesystem::path& path) {
  if (!p.classifier) throw ModelError("predictor has no classifier");
  json doc = document(p.classifier->name(), p.schema, p.label_space, p.seed);
  if (const ForestModel* f = p.forest()) {
    add_forest(doc, *f);
  } else if (const auto* knn = dynamic_cast<const KnnClassifier*>(p.classifier.get())) {
    doc["k"] = knn->k();
    doc["mean"] = knn->scaler().mean();
    doc["stddev"] = knn->scaler().stddev();
    doc["x"] = knn->train_x();
    doc["y"] = knn->train_y();
  } else if (const auto* nb = dynamic_cast<const NaiveBayesClassifier*>(p.classifier.get())) {
    doc["class_count"] = nb->class_count();
    doc["mean"] = nb->mean();
    doc["var"] = nb->var();
  } else {
    throw ModelError("cannot serialize classifier '" + p.classifier->name() + "'");
  }
  write_doc(doc, path);
}

Predictor load_predictor(const std::filesystem::path& path) {
  const json doc = read_doc(path);
  return guarded(path, [&] {
    Predictor p;
    p.schema = schema_from(doc.at("schema"));
    p.label_space = doc.at("label_space").get<std::vector<std::string>>();
    p.seed = doc.at("seed").get<std::uint64_t>();
    const auto kind = doc.at("classifier").get<std::string>();
    const int k = static_cast<int>(p.label_space.size());
    if (kind == "rf" || kind == "dt") {
      p.classifier = std::make_shared<RandomForestClassifier>(forest_from(doc), kind);
    } else if (kind == "knn") {
      p.classifier = std::make_shared<KnnClassifier>(
          doc.at("k").get<int>(),
          Standardizer(doc.at("mean").get<std::vector<double>>(),
                       doc.at("stddev").get<std::vector<double>>()),
          doc.at("x").get<Matrix>(), doc.at("y").get<std::vector<int>>(), k);
    } else if (kind == "nb") {
      p.classifier = std::make_shared<NaiveBayesClassifier>(
          doc.at("class_count").get<std::vector<double>>(), doc.at("mean").get<Matrix>(),
          doc.at("var").get<Matrix>());
    } else {
      throw ModelError("unknown classifier '" + kind + "' in " + path.string());
    }
    if (p.classifier->num_classes() != k) {
      throw ModelError("model class count does not match its label space");
    }
    return p;
  });
}

}  // namespace qpredict::ml
