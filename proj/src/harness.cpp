#include "devink/harness.hpp"

#include <map>
#include <random>

#include "devink/error.hpp"
#include "devink/pipeline.hpp"

namespace devink::harness {

std::vector<Fold> split_folds(const Dataset& dataset, int folds, std::uint64_t seed) {
  if (folds < 2) throw DataError("need at least 2 folds, got " + std::to_string(folds));
  dataset.require_labels();

  std::map<PrimitiveId, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < dataset.strokes.size(); ++i) {
    by_class[*dataset.strokes[i].label()].push_back(i);
  }
  for (const auto& [id, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(folds)) {
      throw DataError("class '" + std::string(id.name()) + "' has " +
                      std::to_string(members.size()) + " samples, fewer than " +
                      std::to_string(folds) + " folds");
    }
  }

  // Plain Fisher-Yates with modulo draws so the split does not depend on the
  // standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(dataset.strokes.size(), 0);
  for (auto& [id, members] : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng() % i]);
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
      fold_of[members[j]] = static_cast<int>(j % static_cast<std::size_t>(folds));
    }
  }

  std::vector<Fold> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < dataset.strokes.size(); ++i) {
    for (int f = 0; f < folds; ++f) {
      auto& fold = out[static_cast<std::size_t>(f)];
      (fold_of[i] == f ? fold.test : fold.train).push_back(i);
    }
  }
  return out;
}

void EvalOptions::validate() const {
  if (folds < 2) throw DataError("need at least 2 folds");
  if (alphas.empty()) throw DataError("need at least one alpha");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 1) throw DataError("alpha must be >= 1");
    if (i > 0 && alphas[i] <= alphas[i - 1]) {
      throw DataError("alphas must be strictly increasing");
    }
  }
}

bool EvalReport::operator==(const EvalReport& other) const {
  return config.label() == other.config.label() && config.dwt_levels == other.config.dwt_levels &&
         config.svm.C == other.config.svm.C && config.svm.gamma == other.config.svm.gamma &&
         config.tau == other.config.tau && folds == other.folds && seed == other.seed &&
         alphas == other.alphas && accuracy == other.accuracy && per_fold == other.per_fold &&
         tested == other.tested && confusion == other.confusion;
}

ReportBuilder::ReportBuilder(PipelineConfig config, EvalOptions options) {
  options.validate();
  report_.config = config;
  report_.folds = options.folds;
  report_.seed = options.seed;
  report_.alphas = options.alphas;
  hits_.assign(static_cast<std::size_t>(options.folds),
               std::vector<std::int64_t>(options.alphas.size(), 0));
  fold_totals_.assign(static_cast<std::size_t>(options.folds), 0);
}

void ReportBuilder::add(int fold, PrimitiveId truth, const classifiers::RankedCandidates& ranking) {
  if (fold < 0 || fold >= report_.folds) throw DataError("fold index out of range");
  const auto f = static_cast<std::size_t>(fold);
  const auto rank = classifiers::rank_of(ranking, truth);
  for (std::size_t a = 0; a < report_.alphas.size(); ++a) {
    if (rank != 0 && rank <= static_cast<std::size_t>(report_.alphas[a])) ++hits_[f][a];
  }
  ++fold_totals_[f];
  ++report_.tested;
  if (!ranking.empty()) {
    const auto row = static_cast<std::size_t>(truth.index() - 1);
    const auto col = static_cast<std::size_t>(ranking.front().id.index() - 1);
    ++report_.confusion[row * kPrimitiveCount + col];
  }
}

EvalReport ReportBuilder::finish() const {
  EvalReport out = report_;
  const std::size_t na = out.alphas.size();
  std::vector<std::int64_t> pooled(na, 0);
  out.per_fold.assign(hits_.size(), std::vector<double>(na, 0.0));
  for (std::size_t f = 0; f < hits_.size(); ++f) {
    for (std::size_t a = 0; a < na; ++a) {
      pooled[a] += hits_[f][a];
      if (fold_totals_[f] > 0) {
        out.per_fold[f][a] =
            static_cast<double>(hits_[f][a]) / static_cast<double>(fold_totals_[f]);
      }
    }
  }
  out.accuracy.assign(na, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    if (out.tested > 0) {
      out.accuracy[a] = static_cast<double>(pooled[a]) / static_cast<double>(out.tested);
    }
  }
  return out;
}

EvalReport evaluate(const Dataset& dataset, const PipelineConfig& config,
                    const EvalOptions& options) {
  config.validate();
  options.validate();
  const auto folds = split_folds(dataset, options.folds, options.seed);

  // Preprocessing and features are per-stroke, so one extraction pass serves
  // every fold.
  const auto features = pipeline::extract_all(dataset.strokes, config);

  ReportBuilder builder(config, options);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<pipeline::StrokeFeatures> train, test;
    train.reserve(folds[f].train.size());
    test.reserve(folds[f].test.size());
    for (auto i : folds[f].train) train.push_back(features[i]);
    for (auto i : folds[f].test) test.push_back(features[i]);
    const auto model = pipeline::train(train, config);
    const auto rankings = pipeline::rank_all(model, test);
    for (std::size_t k = 0; k < test.size(); ++k) {
      builder.add(static_cast<int>(f), *test[k].label, rankings[k]);
    }
  }
  return builder.finish();
}

}  // namespace devink::harness
