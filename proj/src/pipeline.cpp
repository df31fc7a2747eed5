#include "devink/pipeline.hpp"

#include <exception>

#include "devink/error.hpp"
#include "devink/preprocess.hpp"

namespace devink::pipeline {

using classifiers::RankedCandidates;
using features::FeatureKind;

StrokeFeatures extract(const Stroke& stroke, const PipelineConfig& config) {
  const Stroke smoothed = preprocess::apply(stroke, config.preprocess, config.dwt_levels);
  StrokeFeatures f;
  f.stroke_id = stroke.id();
  f.label = stroke.label();
  f.smoothed.reserve(smoothed.size());
  for (const auto& p : smoothed.points()) f.smoothed.push_back({p.x, p.y});
  f.critical = features::extract_critical_points(smoothed);
  f.df = features::compute_df(f.critical);
  f.edf = features::compute_edf(f.critical);
  f.fdf = features::compute_fdf(f.critical);
  return f;
}

features::DirectionVector fixed_vector(const StrokeFeatures& f, FeatureKind kind) {
  switch (kind) {
    case FeatureKind::df: return features::embed_histogram(f.df);
    case FeatureKind::edf: return features::embed_histogram(f.edf);
    case FeatureKind::fdf: return f.fdf;
  }
  return f.fdf;
}

const features::CodeSequence& code_sequence(const StrokeFeatures& f, FeatureKind kind) {
  if (kind == FeatureKind::fdf) {
    throw DataError("fdf is a fixed-length vector, not a code sequence");
  }
  return kind == FeatureKind::df ? f.df : f.edf;
}

Model train(std::span<const StrokeFeatures> training, const PipelineConfig& config) {
  config.validate();
  for (const auto& f : training) {
    if (!f.label) throw DataError("training stroke '" + f.stroke_id + "' has no label");
  }
  Model model{config, classifiers::GaussianModel{}};
  switch (config.classifier) {
    case ClassifierKind::gaussian:
    case ClassifierKind::svm: {
      std::vector<std::pair<features::DirectionVector, PrimitiveId>> samples;
      samples.reserve(training.size());
      for (const auto& f : training) samples.emplace_back(fixed_vector(f, config.feature), *f.label);
      if (config.classifier == ClassifierKind::gaussian) {
        model.payload = classifiers::train_gaussian(samples);
      } else {
        model.payload = classifiers::train_svm(samples, config.svm);
      }
      break;
    }
    case ClassifierKind::dtw: {
      std::vector<std::pair<classifiers::Template, PrimitiveId>> samples;
      samples.reserve(training.size());
      for (const auto& f : training) {
        samples.push_back({{code_sequence(f, config.feature), f.stroke_id}, *f.label});
      }
      model.payload = classifiers::build_template_set(samples, config.tau);
      break;
    }
  }
  return model;
}

RankedCandidates rank(const Model& model, const StrokeFeatures& f) {
  switch (model.kind()) {
    case ClassifierKind::gaussian:
      return classifiers::score_gaussian(std::get<classifiers::GaussianModel>(model.payload),
                                         fixed_vector(f, model.config.feature));
    case ClassifierKind::dtw:
      return classifiers::classify_dtw(std::get<classifiers::DtwTemplateSet>(model.payload),
                                       code_sequence(f, model.config.feature));
    case ClassifierKind::svm:
      return classifiers::predict_svm(std::get<classifiers::SvmModel>(model.payload),
                                      fixed_vector(f, model.config.feature));
  }
  return {};
}

namespace {

// Runs body(i) for every i, in parallel; rethrows the lowest-index failure.
template <typename Body>
void parallel_for(std::size_t n, Body body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<StrokeFeatures> extract_all(std::span<const Stroke> strokes,
                                        const PipelineConfig& config) {
  std::vector<StrokeFeatures> out(strokes.size());
  parallel_for(strokes.size(), [&](std::size_t i) { out[i] = extract(strokes[i], config); });
  return out;
}

std::vector<RankedCandidates> rank_all(const Model& model, std::span<const StrokeFeatures> batch) {
  std::vector<RankedCandidates> out(batch.size());
  parallel_for(batch.size(), [&](std::size_t i) { out[i] = rank(model, batch[i]); });
  return out;
}

namespace serial {

std::vector<StrokeFeatures> extract_all(std::span<const Stroke> strokes,
                                        const PipelineConfig& config) {
  std::vector<StrokeFeatures> out;
  out.reserve(strokes.size());
  for (const auto& s : strokes) out.push_back(extract(s, config));
  return out;
}

std::vector<RankedCandidates> rank_all(const Model& model, std::span<const StrokeFeatures> batch) {
  std::vector<RankedCandidates> out;
  out.reserve(batch.size());
  for (const auto& f : batch) out.push_back(rank(model, f));
  return out;
}

}  // namespace serial

Model train_model(const Dataset& dataset, const PipelineConfig& config) {
  config.validate();
  dataset.require_labels();
  const auto feats = extract_all(dataset.strokes, config);
  return train(feats, config);
}

}  // namespace devink::pipeline
