#include "devink/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "devink/error.hpp"

namespace devink {

using ordered_json = nlohmann::ordered_json;
using namespace classifiers;

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::gaussian: return "gaussian";
    case ClassifierKind::dtw: return "dtw";
    case ClassifierKind::svm: return "svm";
  }
  return "gaussian";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
  if (text == "gaussian") return ClassifierKind::gaussian;
  if (text == "dtw") return ClassifierKind::dtw;
  if (text == "svm") return ClassifierKind::svm;
  throw DataError("unknown classifier '" + std::string(text) +
                  "' (expected gaussian, dtw or svm)");
}

void PipelineConfig::validate() const {
  if (classifier == ClassifierKind::dtw && feature == features::FeatureKind::fdf) {
    throw DataError(
        "dtw cannot be paired with fdf: DTW aligns variable-length direction-code "
        "sequences (df, edf), while fdf is a fixed-length 8-vector");
  }
  if (dwt_levels < 1) throw DataError("dwt levels must be >= 1");
  if (svm.C <= 0 || svm.gamma <= 0) throw DataError("svm C and gamma must be positive");
  if (tau < 0) throw DataError("tau must be non-negative");
}

std::string PipelineConfig::label() const {
  return std::string(preprocess::to_string(preprocess)) + "/" +
         std::string(features::to_string(feature)) + "/" + std::string(to_string(classifier));
}

namespace {

ordered_json vec_json(const DirectionVector& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

DirectionVector vec_from(const ordered_json& a) {
  if (!a.is_array() || a.size() != features::kDirections) {
    throw DataError("model: expected an 8-element array");
  }
  DirectionVector v{};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.at(i).get<double>();
  return v;
}

PrimitiveId label_from(const ordered_json& j) { return PrimitiveId::from_name(j.get<std::string>()); }

ordered_json gaussian_json(const GaussianModel& g) {
  ordered_json classes = ordered_json::array();
  for (const auto& c : g.classes) {
    ordered_json cov = ordered_json::array();
    for (int r = 0; r < features::kDirections; ++r) {
      ordered_json row = ordered_json::array();
      for (int k = 0; k < features::kDirections; ++k) {
        row.push_back(c.covariance()[r * features::kDirections + k]);
      }
      cov.push_back(std::move(row));
    }
    classes.push_back({{"label", std::string(c.id().name())},
                       {"count", c.count()},
                       {"mean", vec_json(c.mean())},
                       {"covariance", std::move(cov)},
                       {"ridge", c.ridge()}});
  }
  return classes;
}

GaussianModel gaussian_from(const ordered_json& classes) {
  GaussianModel g;
  for (const auto& c : classes) {
    Matrix8 cov{};
    const auto& rows = c.at("covariance");
    if (!rows.is_array() || rows.size() != features::kDirections) {
      throw DataError("model: covariance must be 8x8");
    }
    for (int r = 0; r < features::kDirections; ++r) {
      const auto row = vec_from(rows.at(r));
      std::copy(row.begin(), row.end(), cov.begin() + r * features::kDirections);
    }
    g.classes.emplace_back(label_from(c.at("label")), c.at("count").get<int>(),
                           vec_from(c.at("mean")), cov, c.at("ridge").get<double>());
  }
  return g;
}

ordered_json dtw_json(const DtwTemplateSet& set) {
  ordered_json classes = ordered_json::array();
  for (const auto& c : set.classes) {
    ordered_json templates = ordered_json::array();
    for (const auto& t : c.templates) {
      templates.push_back({{"source", t.source_id}, {"codes", features::code_values(t.codes)}});
    }
    classes.push_back({{"label", std::string(c.id.name())}, {"templates", std::move(templates)}});
  }
  return classes;
}

DtwTemplateSet dtw_from(const ordered_json& classes) {
  DtwTemplateSet set;
  for (const auto& c : classes) {
    DtwClassTemplates entry{label_from(c.at("label")), {}};
    for (const auto& t : c.at("templates")) {
      const auto values = t.at("codes").get<std::vector<int>>();
      if (values.empty()) throw DataError("model: empty DTW template");
      entry.templates.push_back({features::codes_from_values(values), t.at("source").get<std::string>()});
    }
    if (entry.templates.empty()) throw DataError("model: class without DTW templates");
    set.classes.push_back(std::move(entry));
  }
  return set;
}

ordered_json svm_json(const SvmModel& m) {
  ordered_json classes = ordered_json::array();
  for (auto id : m.classes) classes.push_back(std::string(id.name()));
  ordered_json machines = ordered_json::array();
  for (const auto& bm : m.machines) {
    ordered_json svs = ordered_json::array();
    for (const auto& sv : bm.support_vectors) svs.push_back(vec_json(sv));
    machines.push_back({{"positive", std::string(bm.positive.name())},
                        {"negative", std::string(bm.negative.name())},
                        {"bias", bm.bias},
                        {"coefficients", bm.coefficients},
                        {"support_vectors", std::move(svs)}});
  }
  return {{"C", m.C}, {"gamma", m.gamma}, {"classes", std::move(classes)},
          {"machines", std::move(machines)}};
}

SvmModel svm_from(const ordered_json& j) {
  SvmModel m;
  m.C = j.at("C").get<double>();
  m.gamma = j.at("gamma").get<double>();
  for (const auto& c : j.at("classes")) m.classes.push_back(label_from(c));
  for (const auto& bm : j.at("machines")) {
    BinaryMachine machine{label_from(bm.at("positive")), label_from(bm.at("negative")), {}, {},
                          bm.at("bias").get<double>()};
    machine.coefficients = bm.at("coefficients").get<std::vector<double>>();
    for (const auto& sv : bm.at("support_vectors")) machine.support_vectors.push_back(vec_from(sv));
    if (machine.coefficients.size() != machine.support_vectors.size()) {
      throw DataError("model: coefficient / support vector count mismatch");
    }
    m.machines.push_back(std::move(machine));
  }
  return m;
}

}  // namespace

std::string model_to_json(const Model& model) {
  ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["registry"] = kRegistryVersion;
  j["kind"] = to_string(model.kind());
  j["feature"] = features::to_string(model.config.feature);
  j["preprocess"] = preprocess::to_string(model.config.preprocess);
  j["dwt_levels"] = model.config.dwt_levels;
  switch (model.kind()) {
    case ClassifierKind::gaussian:
      j["classes"] = gaussian_json(std::get<GaussianModel>(model.payload));
      break;
    case ClassifierKind::dtw:
      j["tau"] = model.config.tau;
      j["classes"] = dtw_json(std::get<DtwTemplateSet>(model.payload));
      break;
    case ClassifierKind::svm:
      j["svm"] = svm_json(std::get<SvmModel>(model.payload));
      break;
  }
  return j.dump(1) + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    const auto j = ordered_json::parse(text);
    if (j.at("format").get<std::string>() != kModelFormat) throw DataError("not a devink model file");
    if (j.at("version").get<int>() != kModelVersion) {
      throw DataError("unsupported model version " + j.at("version").dump());
    }
    if (j.at("registry").get<std::string>() != kRegistryVersion) {
      throw DataError("model was trained against registry " + j.at("registry").dump());
    }
    Model model;
    model.config.classifier = parse_classifier_kind(j.at("kind").get<std::string>());
    model.config.feature = features::parse_feature_kind(j.at("feature").get<std::string>());
    model.config.preprocess = preprocess::parse_method(j.at("preprocess").get<std::string>());
    model.config.dwt_levels = j.at("dwt_levels").get<int>();
    switch (model.config.classifier) {
      case ClassifierKind::gaussian:
        model.payload = gaussian_from(j.at("classes"));
        break;
      case ClassifierKind::dtw:
        model.config.tau = j.at("tau").get<double>();
        model.payload = dtw_from(j.at("classes"));
        break;
      case ClassifierKind::svm: {
        auto svm = svm_from(j.at("svm"));
        model.config.svm.C = svm.C;
        model.config.svm.gamma = svm.gamma;
        model.payload = std::move(svm);
        break;
      }
    }
    model.config.validate();
    return model;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << model_to_json(model);
  if (!out) throw IoError("I/O error writing " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace devink
