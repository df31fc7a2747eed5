#include <doctest.h>

#include "devink/error.hpp"
#include "devink/pipeline.hpp"
#include "devink/synth.hpp"
#include "support.hpp"

using namespace devink;

namespace {

const Dataset& corpus() {
  static const Dataset d = [] {
    synth::SynthConfig cfg;
    cfg.primitives = synth::default_primitives();
    cfg.writers = 3;
    cfg.samples_per_writer = 4;
    return synth::generate_synthetic(cfg);
  }();
  return d;
}

}  // namespace

TEST_CASE("every model kind survives save -> load -> save byte-identically") {
  const std::pair<ClassifierKind, features::FeatureKind> combos[] = {
      {ClassifierKind::gaussian, features::FeatureKind::fdf},
      {ClassifierKind::gaussian, features::FeatureKind::df},
      {ClassifierKind::dtw, features::FeatureKind::df},
      {ClassifierKind::svm, features::FeatureKind::fdf},
  };
  testing::TempDir dir;
  for (auto [cls, feat] : combos) {
    PipelineConfig cfg;
    cfg.classifier = cls;
    cfg.feature = feat;
    cfg.preprocess = preprocess::Method::dwt;
    cfg.tau = 2.0;
    const auto model = pipeline::train_model(corpus(), cfg);
    save_model(model, dir / "a.json");
    const auto loaded = load_model(dir / "a.json");
    save_model(loaded, dir / "b.json");
    CHECK(testing::slurp(dir / "a.json") == testing::slurp(dir / "b.json"));

    // The reloaded model ranks identically.
    const auto feats = pipeline::extract_all(corpus().strokes, cfg);
    CHECK(pipeline::rank_all(model, feats) == pipeline::rank_all(loaded, feats));
  }
}

TEST_CASE("model files are validated") {
  CHECK_THROWS_AS(model_from_json("{"), DataError);
  CHECK_THROWS_AS(model_from_json(R"({"format": "other"})"), DataError);
  CHECK_THROWS_AS(model_from_json(
                      R"({"format": "devink-model", "version": 99, "registry": "devanagari-69/v1"})"),
                  DataError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), IoError);
}

TEST_CASE("model header records its provenance") {
  PipelineConfig cfg;
  cfg.classifier = ClassifierKind::svm;
  const auto text = model_to_json(pipeline::train_model(corpus(), cfg));
  CHECK(text.find("\"format\": \"devink-model\"") != std::string::npos);
  CHECK(text.find("\"kind\": \"svm\"") != std::string::npos);
  CHECK(text.find("\"registry\": \"devanagari-69/v1\"") != std::string::npos);
}
