#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devink/classifiers.hpp"
#include "devink/ink.hpp"
#include "devink/model.hpp"

namespace devink::harness {

/// Indices into Dataset::strokes.
struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified k-fold split: within each class the samples are shuffled with
/// `seed` and dealt round-robin into the folds. Fold i's test part is the
/// i-th share; its train part is everything else. Throws DataError naming a
/// class with fewer than `folds` samples.
std::vector<Fold> split_folds(const Dataset& dataset, int folds, std::uint64_t seed);

struct EvalOptions {
  int folds = 5;
  std::uint64_t seed = 42;
  std::vector<int> alphas{1, 2, 5};

  void validate() const;
};

inline constexpr std::string_view kReportSchema = "devink-eval-report/v1";
inline constexpr std::string_view kReportListSchema = "devink-eval-reports/v1";

struct EvalReport {
  PipelineConfig config;
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<int> alphas;
  std::vector<double> accuracy;               // per alpha, in [0, 1]
  std::vector<std::vector<double>> per_fold;  // [fold][alpha]
  std::size_t tested = 0;
  /// Row = true class, column = rank-1 prediction; 69x69, row-major.
  std::vector<std::int64_t> confusion =
      std::vector<std::int64_t>(kPrimitiveCount * kPrimitiveCount, 0);

  std::int64_t confusion_at(PrimitiveId truth, PrimitiveId predicted) const {
    return confusion[static_cast<std::size_t>((truth.index() - 1) * kPrimitiveCount +
                                              predicted.index() - 1)];
  }

  bool operator==(const EvalReport& other) const;
};

/// Accumulates ranked predictions into a report. Exposed separately from
/// evaluate() so any ranking source can be scored.
class ReportBuilder {
 public:
  ReportBuilder(PipelineConfig config, EvalOptions options);

  /// Records one test stroke of fold `fold` (0-based).
  void add(int fold, PrimitiveId truth, const classifiers::RankedCandidates& ranking);

  EvalReport finish() const;

 private:
  EvalReport report_;
  std::vector<std::vector<std::int64_t>> hits_;  // [fold][alpha]
  std::vector<std::int64_t> fold_totals_;
};

/// Five-fold (by default) cross-validated N-best evaluation of one pipeline.
EvalReport evaluate(const Dataset& dataset, const PipelineConfig& config,
                    const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);

/// Several reports in one JSON document.
std::string reports_to_json(std::span<const EvalReport> reports);

/// Accuracy table: one row per report, columns preprocess, feature,
/// classifier, then one `alpha=N` column per alpha holding the accuracy in
/// percent with two decimals. All reports must share the same alphas.
std::string reports_to_csv(std::span<const EvalReport> reports);

enum class ReportFormat { json, csv };

void emit_report(const EvalReport& report, const std::filesystem::path& path,
                 ReportFormat format);
void emit_reports(std::span<const EvalReport> reports, const std::filesystem::path& path,
                  ReportFormat format);

}  // namespace devink::harness
