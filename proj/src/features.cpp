#include "devink/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "devink/error.hpp"

namespace devink::features {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSector = kPi / 4.0;
}  // namespace

std::string_view to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::df: return "df";
    case FeatureKind::edf: return "edf";
    case FeatureKind::fdf: return "fdf";
  }
  return "fdf";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "df") return FeatureKind::df;
  if (text == "edf") return FeatureKind::edf;
  if (text == "fdf") return FeatureKind::fdf;
  throw DataError("unknown feature kind '" + std::string(text) +
                  "' (expected df, edf or fdf)");
}

DirectionCode::DirectionCode(int value) : value_(value) {
  if (value < 1 || value > kDirections) {
    throw DataError("direction code " + std::to_string(value) + " outside 1..8");
  }
}

double DirectionCode::center() const noexcept {
  return wrap_angle(static_cast<double>(value_ - 1) * kSector);
}

DirectionCode DirectionCode::counter_clockwise() const noexcept {
  return DirectionCode(value_ % kDirections + 1);
}

DirectionCode DirectionCode::clockwise() const noexcept {
  return DirectionCode((value_ + kDirections - 2) % kDirections + 1);
}

std::vector<std::size_t> sign_change_marks(std::span<const double> seq) {
  std::vector<std::size_t> marks;
  if (seq.size() < 3) return marks;
  auto sgn = [&](std::size_t i) {
    const double d = seq[i] - seq[i + 1];
    return (d > 0) - (d < 0);
  };
  int prev = sgn(0);
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    const int cur = sgn(i);
    if (cur != prev) marks.push_back(i);
    prev = cur;
  }
  return marks;
}

CriticalPointSet extract_critical_points(const Stroke& stroke) {
  const auto xs = stroke.xs();
  const auto ys = stroke.ys();
  std::vector<std::size_t> idx = sign_change_marks(xs);
  const auto ymarks = sign_change_marks(ys);
  idx.insert(idx.end(), ymarks.begin(), ymarks.end());
  idx.push_back(0);
  idx.push_back(stroke.size() - 1);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  CriticalPointSet cps;
  cps.stroke_id = stroke.id();
  cps.indices = std::move(idx);
  cps.coords.reserve(cps.indices.size());
  for (std::size_t i : cps.indices) cps.coords.push_back({xs[i], ys[i]});
  return cps;
}

double wrap_angle(double theta) noexcept {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double angle_between(Coord a, Coord b) {
  if (a == b) throw DataError("coincident critical points");
  return wrap_angle(std::atan2(b.y - a.y, b.x - a.x));
}

DirectionCode deg2dir(double theta) noexcept {
  const double t = wrap_angle(theta);
  if (t >= -kPi / 8 && t < kPi / 8) return DirectionCode(1);
  if (t >= kPi / 8 && t < 3 * kPi / 8) return DirectionCode(2);
  if (t >= 3 * kPi / 8 && t < 5 * kPi / 8) return DirectionCode(3);
  if (t >= 5 * kPi / 8 && t < 7 * kPi / 8) return DirectionCode(4);
  if (t >= -7 * kPi / 8 && t < -5 * kPi / 8) return DirectionCode(6);
  if (t >= -5 * kPi / 8 && t < -3 * kPi / 8) return DirectionCode(7);
  if (t >= -3 * kPi / 8 && t < -kPi / 8) return DirectionCode(8);
  return DirectionCode(5);
}

double fuzzy_membership(double theta_c, double theta) noexcept {
  const double m = 1.0 - std::abs(wrap_angle(theta_c - theta)) / kSector;
  return std::max(m, 0.0);
}

FuzzyDirection fuzzify(double theta) noexcept {
  const double t = wrap_angle(theta);
  const DirectionCode d1 = deg2dir(t);
  const DirectionCode d2 =
      wrap_angle(t - d1.center()) >= 0 ? d1.counter_clockwise() : d1.clockwise();
  return {d1, fuzzy_membership(d1.center(), t), d2, fuzzy_membership(d2.center(), t)};
}

CodeSequence compute_df(const CriticalPointSet& cps) {
  CodeSequence out;
  for (std::size_t l = 0; l + 1 < cps.coords.size(); ++l) {
    if (cps.coords[l] == cps.coords[l + 1]) continue;
    out.push_back(deg2dir(angle_between(cps.coords[l], cps.coords[l + 1])));
  }
  if (out.empty()) throw DataError("degenerate stroke '" + cps.stroke_id + "'");
  return out;
}

CodeSequence compute_edf(const CriticalPointSet& cps) {
  const std::size_t k = cps.coords.size();
  std::vector<std::optional<DirectionCode>> raw;
  raw.reserve(k * (k - 1) / 2);
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t m = l + 1; m < k; ++m) {
      if (cps.coords[l] == cps.coords[m]) {
        raw.emplace_back(std::nullopt);
      } else {
        raw.emplace_back(deg2dir(angle_between(cps.coords[l], cps.coords[m])));
      }
    }
  }
  auto first = std::find_if(raw.begin(), raw.end(), [](const auto& c) { return c.has_value(); });
  if (first == raw.end()) throw DataError("degenerate stroke '" + cps.stroke_id + "'");

  CodeSequence out;
  out.reserve(raw.size());
  DirectionCode last = **first;
  for (const auto& c : raw) {
    if (c) last = *c;
    out.push_back(last);
  }
  return out;
}

DirectionVector compute_fdf(const CriticalPointSet& cps) {
  DirectionVector sum{};
  std::array<int, kDirections> count{};
  bool any = false;
  for (std::size_t l = 0; l + 1 < cps.coords.size(); ++l) {
    if (cps.coords[l] == cps.coords[l + 1]) continue;
    any = true;
    const FuzzyDirection f = fuzzify(angle_between(cps.coords[l], cps.coords[l + 1]));
    if (f.m1 > 0) {
      sum[f.d1.value() - 1] += f.m1;
      ++count[f.d1.value() - 1];
    }
    if (f.m2 > 0) {
      sum[f.d2.value() - 1] += f.m2;
      ++count[f.d2.value() - 1];
    }
  }
  if (!any) throw DataError("degenerate stroke '" + cps.stroke_id + "'");
  DirectionVector out{};
  for (int d = 0; d < kDirections; ++d) {
    if (count[d] > 0) out[d] = sum[d] / count[d];
  }
  return out;
}

DirectionVector embed_histogram(std::span<const DirectionCode> codes) {
  if (codes.empty()) throw DataError("embed_histogram: empty code list");
  DirectionVector h{};
  for (auto c : codes) h[c.value() - 1] += 1.0;
  for (auto& v : h) v /= static_cast<double>(codes.size());
  return h;
}

std::vector<int> code_values(std::span<const DirectionCode> codes) {
  std::vector<int> out;
  out.reserve(codes.size());
  for (auto c : codes) out.push_back(c.value());
  return out;
}

CodeSequence codes_from_values(std::span<const int> values) {
  CodeSequence out;
  out.reserve(values.size());
  for (int v : values) out.emplace_back(v);
  return out;
}

}  // namespace devink::features
