#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>

#include "devink/classifiers.hpp"
#include "devink/error.hpp"

namespace devink::classifiers {

double circular_code_distance(DirectionCode p, DirectionCode q) noexcept {
  const int d = std::abs(p.value() - q.value());
  return static_cast<double>(std::min(d, features::kDirections - d));
}

double dtw_distance(std::span<const DirectionCode> a, std::span<const DirectionCode> b) {
  if (a.empty() || b.empty()) throw DataError("dtw_distance: empty sequence");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Two rolling rows of the (|a|+1) x (|b|+1) cumulative-cost table.
  std::vector<double> prev(b.size() + 1, kInf);
  std::vector<double> cur(b.size() + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = circular_code_distance(a[i - 1], b[j - 1]) + best;
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<Template> cluster_templates(std::span<const Template> sequences, double tau) {
  std::vector<Template> leaders;
  for (const auto& s : sequences) {
    const bool joined = std::any_of(leaders.begin(), leaders.end(), [&](const Template& l) {
      return dtw_distance(l.codes, s.codes) <= tau;
    });
    if (!joined) leaders.push_back(s);
  }
  return leaders;
}

DtwTemplateSet build_template_set(std::span<const std::pair<Template, PrimitiveId>> samples,
                                  double tau) {
  std::map<PrimitiveId, std::vector<Template>> by_class;
  for (const auto& [t, id] : samples) {
    if (t.codes.empty()) throw DataError("template '" + t.source_id + "' is empty");
    by_class[id].push_back(t);
  }
  DtwTemplateSet set;
  for (auto& [id, seqs] : by_class) {
    set.classes.push_back({id, cluster_templates(seqs, tau)});
  }
  return set;
}

RankedCandidates classify_dtw(const DtwTemplateSet& templates, std::span<const DirectionCode> t) {
  if (templates.classes.empty()) throw DataError("classify_dtw: empty template set");
  std::array<bool, kPrimitiveCount + 1> present{};
  RankedCandidates out;
  out.reserve(kPrimitiveCount);
  for (const auto& c : templates.classes) {
    double total = 0.0;
    for (const auto& tpl : c.templates) total += dtw_distance(t, tpl.codes);
    out.push_back({c.id, -total / static_cast<double>(c.templates.size()), 0.0});
    present[c.id.index()] = true;
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  for (int i = 1; i <= kPrimitiveCount; ++i) {
    if (!present[i]) out.push_back({PrimitiveId(i), -std::numeric_limits<double>::infinity(), 0.0});
  }
  return out;
}

}  // namespace devink::classifiers
