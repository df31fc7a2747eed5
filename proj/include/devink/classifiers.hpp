#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "devink/features.hpp"
#include "devink/ink.hpp"

namespace devink::classifiers {

using features::CodeSequence;
using features::DirectionCode;
using features::DirectionVector;

struct Candidate {
  PrimitiveId id;
  double score = 0.0;
  double margin = 0.0;  // SVM tie-break only

  bool operator==(const Candidate&) const = default;
};

/// Best first. Every ranking carries all 69 primitives; classes
/// absent from the training data trail with a score of -infinity.
using RankedCandidates = std::vector<Candidate>;

/// 1-based position of `id` in the ranking, or 0 when absent.
std::size_t rank_of(const RankedCandidates& ranking, PrimitiveId id) noexcept;

// ---------------------------------------------------------------------------
// Gaussian second-order statistics

using Matrix8 = std::array<double, features::kDirections * features::kDirections>;

/// Per-class mean and unbiased covariance. `ridge` is the total multiple of
/// the identity added so that covariance + ridge*I is positive definite.
class GaussianClassModel {
 public:
  GaussianClassModel(PrimitiveId id, int count, const DirectionVector& mean,
                     const Matrix8& covariance, double ridge);

  PrimitiveId id() const noexcept { return id_; }
  int count() const noexcept { return count_; }
  const DirectionVector& mean() const noexcept { return mean_; }
  const Matrix8& covariance() const noexcept { return covariance_; }
  double ridge() const noexcept { return ridge_; }

  /// log N(t; mean, covariance + ridge*I).
  double log_likelihood(const DirectionVector& t) const;

 private:
  PrimitiveId id_;
  int count_;
  DirectionVector mean_;
  Matrix8 covariance_;
  double ridge_;
  // Derived on construction: lower Cholesky factor and log-determinant.
  Matrix8 chol_{};
  double log_det_ = 0.0;
};

struct GaussianModel {
  std::vector<GaussianClassModel> classes;
};

/// Sample mean, unbiased covariance (zero when beta == 1), and a ridge of
/// 1e-6 * trace/8 (1e-6 for a zero trace) added until positive definite.
/// If `required` is non-empty every listed class must have samples.
GaussianModel train_gaussian(std::span<const std::pair<DirectionVector, PrimitiveId>> samples,
                             std::span<const PrimitiveId> required = {});

RankedCandidates score_gaussian(const GaussianModel& model, const DirectionVector& t);

// ---------------------------------------------------------------------------
// DTW template matching

/// min(|p - q|, 8 - |p - q|).
double circular_code_distance(DirectionCode p, DirectionCode q) noexcept;

/// Unconstrained DTW with steps (i-1,j), (i,j-1), (i-1,j-1).
double dtw_distance(std::span<const DirectionCode> a, std::span<const DirectionCode> b);

struct Template {
  CodeSequence codes;
  std::string source_id;

  bool operator==(const Template&) const = default;
};

struct DtwClassTemplates {
  PrimitiveId id;
  std::vector<Template> templates;
};

struct DtwTemplateSet {
  std::vector<DtwClassTemplates> classes;
};

/// Leader clustering in input order; a sequence joins the first cluster whose
/// founder lies within `tau`, otherwise it founds a new one. Returns founders.
std::vector<Template> cluster_templates(std::span<const Template> sequences, double tau);

/// Groups labelled sequences by class (in order of class index) and clusters each.
DtwTemplateSet build_template_set(std::span<const std::pair<Template, PrimitiveId>> samples,
                                  double tau);

/// Ascending mean DTW distance per class, reported as the negated mean.
RankedCandidates classify_dtw(const DtwTemplateSet& templates, std::span<const DirectionCode> t);

// ---------------------------------------------------------------------------
// RBF SVM

struct SvmParams {
  double C = 10.0;
  double gamma = 1.0;
  double tolerance = 1e-3;
  std::int64_t max_iterations = 10'000'000;
};

double rbf_kernel(const DirectionVector& u, const DirectionVector& v, double gamma) noexcept;

/// Dual solution of one binary problem (labels +1/-1).
struct BinarySolution {
  std::vector<double> alpha;
  double rho = 0.0;  // decision(x) = sum alpha_i y_i K(x_i, x) - rho
  double objective = 0.0;  // dual objective sum(alpha) - 1/2 alpha' Q alpha
  std::int64_t iterations = 0;
};

/// Sequential minimal optimization with second-order working-set selection.
/// Throws ConvergenceError (carrying the worst KKT violation) at the cap.
BinarySolution solve_smo(std::span<const DirectionVector> x, std::span<const int> y,
                         const SvmParams& params);

struct BinaryMachine {
  PrimitiveId positive;
  PrimitiveId negative;
  std::vector<DirectionVector> support_vectors;
  std::vector<double> coefficients;  // alpha_i * y_i
  double bias = 0.0;                 // decision = sum coef K + bias

  double decision(const DirectionVector& t, double gamma) const noexcept;
};

struct SvmModel {
  double C = 10.0;
  double gamma = 1.0;
  std::vector<PrimitiveId> classes;
  std::vector<BinaryMachine> machines;  // one per unordered class pair
};

/// One-vs-one training over every class present in `samples`.
SvmModel train_svm(std::span<const std::pair<DirectionVector, PrimitiveId>> samples,
                   const SvmParams& params = {});

/// Vote counts; ties broken by summed signed decision values, then index.
RankedCandidates predict_svm(const SvmModel& model, const DirectionVector& t);

}  // namespace devink::classifiers
