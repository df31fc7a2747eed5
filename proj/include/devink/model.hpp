#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "devink/classifiers.hpp"
#include "devink/features.hpp"
#include "devink/preprocess.hpp"

namespace devink {

enum class ClassifierKind { gaussian, dtw, svm };

std::string_view to_string(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier_kind(std::string_view text);

/// Preprocess -> feature -> classifier choice plus classifier knobs.
struct PipelineConfig {
  preprocess::Method preprocess = preprocess::Method::spline;
  features::FeatureKind feature = features::FeatureKind::fdf;
  ClassifierKind classifier = ClassifierKind::gaussian;
  int dwt_levels = 1;
  classifiers::SvmParams svm{};
  double tau = 0.0;  // DTW template clustering radius

  /// Rejects DTW over FDF: DTW aligns variable-length code sequences while
  /// FDF is a fixed-length real vector.
  void validate() const;

  /// "spline/fdf/svm"
  std::string label() const;
};

/// A trained classifier together with the preprocessing and feature choice
/// it was trained under. Immutable once built.
struct Model {
  PipelineConfig config;
  std::variant<classifiers::GaussianModel, classifiers::DtwTemplateSet, classifiers::SvmModel>
      payload;

  ClassifierKind kind() const noexcept { return config.classifier; }
};

inline constexpr std::string_view kModelFormat = "devink-model";
inline constexpr int kModelVersion = 1;

std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace devink
