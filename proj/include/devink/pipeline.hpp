#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "devink/classifiers.hpp"
#include "devink/features.hpp"
#include "devink/ink.hpp"
#include "devink/model.hpp"

namespace devink::pipeline {

/// Everything the classifiers can consume for one stroke.
struct StrokeFeatures {
  std::string stroke_id;
  std::optional<PrimitiveId> label;
  std::vector<features::Coord> smoothed;
  features::CriticalPointSet critical;
  features::CodeSequence df;
  features::CodeSequence edf;
  features::DirectionVector fdf{};
};

/// Preprocess, locate critical points, and compute DF, EDF and FDF.
StrokeFeatures extract(const Stroke& stroke, const PipelineConfig& config);

/// The 8-vector a Gaussian or SVM model sees: FDF itself, or the code
/// histogram of DF / EDF.
features::DirectionVector fixed_vector(const StrokeFeatures& f, features::FeatureKind kind);

/// The code sequence DTW sees (DF or EDF).
const features::CodeSequence& code_sequence(const StrokeFeatures& f, features::FeatureKind kind);

/// Trains the configured classifier. Every input must carry a label.
Model train(std::span<const StrokeFeatures> training, const PipelineConfig& config);

classifiers::RankedCandidates rank(const Model& model, const StrokeFeatures& f);

// Batch kernels. Output order always matches input order; results are
// identical to the serial reference versions below.
std::vector<StrokeFeatures> extract_all(std::span<const Stroke> strokes,
                                        const PipelineConfig& config);
std::vector<classifiers::RankedCandidates> rank_all(const Model& model,
                                                    std::span<const StrokeFeatures> batch);

namespace serial {
std::vector<StrokeFeatures> extract_all(std::span<const Stroke> strokes,
                                        const PipelineConfig& config);
std::vector<classifiers::RankedCandidates> rank_all(const Model& model,
                                                    std::span<const StrokeFeatures> batch);
}  // namespace serial

/// Convenience: extract_all + train over a labelled dataset.
Model train_model(const Dataset& dataset, const PipelineConfig& config);

}  // namespace devink::pipeline
