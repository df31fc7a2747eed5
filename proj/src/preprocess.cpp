#include "devink/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "devink/error.hpp"

namespace devink::preprocess {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::raw: return "raw";
    case Method::dwt: return "dwt";
    case Method::spline: return "spline";
  }
  return "raw";
}

Method parse_method(std::string_view text) {
  if (text == "raw") return Method::raw;
  if (text == "dwt") return Method::dwt;
  if (text == "spline") return Method::spline;
  throw DataError("unknown preprocessing method '" + std::string(text) +
                  "' (expected raw, dwt or spline)");
}

// ---------------------------------------------------------------------------
// DWT

const std::array<double, 8> kDb4ReconstructionLowPass = {
    0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
    -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
    0.032883011666885199735, -0.010597401785069032105,
};

namespace {

constexpr std::size_t kFilterLength = kDb4ReconstructionLowPass.size();

std::array<double, kFilterLength> analysis_low_pass() {
  std::array<double, kFilterLength> h{};
  std::reverse_copy(kDb4ReconstructionLowPass.begin(), kDb4ReconstructionLowPass.end(),
                    h.begin());
  return h;
}

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x(n-1) | x(n-1) x(n-2) ...
double extended(std::span<const double> x, std::ptrdiff_t k) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  while (k < 0 || k >= n) {
    if (k < 0) k = -k - 1;
    if (k >= n) k = 2 * n - 1 - k;
  }
  return x[static_cast<std::size_t>(k)];
}

}  // namespace

int dwt_max_levels(std::size_t length) noexcept {
  int levels = 0;
  double nominal = static_cast<double>(length);
  while (nominal >= static_cast<double>(kFilterLength - 1)) {
    ++levels;
    nominal /= 2.0;
  }
  return levels;
}

std::vector<double> dwt_analysis(std::span<const double> seq,
                                 std::span<const double> filter) {
  const auto n = static_cast<std::ptrdiff_t>(seq.size());
  const auto f = static_cast<std::ptrdiff_t>(filter.size());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>((n + f - 1) / 2));
  for (std::ptrdiff_t i = 1; i < n + f - 1; i += 2) {
    double acc = 0.0;
    for (std::ptrdiff_t j = 0; j < f; ++j) acc += filter[j] * extended(seq, i - j);
    out.push_back(acc);
  }
  return out;
}

std::vector<double> dwt_synthesis(std::span<const double> coeffs,
                                  std::span<const double> filter,
                                  std::size_t length) {
  // Full convolution of the upsampled coefficients (c[k] at even slots),
  // read from offset F-2.
  const auto f = static_cast<std::ptrdiff_t>(filter.size());
  const auto m = static_cast<std::ptrdiff_t>(coeffs.size());
  std::vector<double> out(length, 0.0);
  for (std::size_t p = 0; p < length; ++p) {
    const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(p) + f - 2;
    double acc = 0.0;
    for (std::ptrdiff_t j = pos % 2; j < f; j += 2) {
      const std::ptrdiff_t k = (pos - j) / 2;
      if (k >= 0 && k < m) acc += filter[j] * coeffs[k];
    }
    out[p] = acc;
  }
  return out;
}

std::vector<double> dwt_denoise(std::span<const double> seq, int levels) {
  if (levels < 1) throw DataError("dwt_denoise: levels must be >= 1");
  const int max_levels = dwt_max_levels(seq.size());
  if (levels > max_levels) {
    throw DataError("dwt_denoise: a sequence of length " + std::to_string(seq.size()) +
                    " supports at most " + std::to_string(max_levels) +
                    " decomposition level(s); use fewer levels");
  }
  const auto dec = analysis_low_pass();
  std::vector<std::size_t> lengths;
  std::vector<double> approx(seq.begin(), seq.end());
  for (int l = 0; l < levels; ++l) {
    lengths.push_back(approx.size());
    approx = dwt_analysis(approx, dec);
  }
  for (int l = levels - 1; l >= 0; --l) {
    approx = dwt_synthesis(approx, kDb4ReconstructionLowPass, lengths[l]);
  }
  return approx;
}

Stroke dwt_denoise(const Stroke& stroke, int levels) {
  if (dwt_max_levels(stroke.size()) < levels) return stroke;
  const auto xs = dwt_denoise(stroke.xs(), levels);
  const auto ys = dwt_denoise(stroke.ys(), levels);
  return stroke.with_coordinates(xs, ys);
}

// ---------------------------------------------------------------------------
// Knotless spline

namespace {
constexpr std::size_t kMinSpan = 4;
}

SpanSchedule SpanSchedule::for_length(std::size_t n) {
  SpanSchedule s;
  s.initial = static_cast<int>(n / 2);
  s.step = static_cast<int>(n / 8);
  s.floor_span = static_cast<int>(std::ceil(0.2 * s.initial));
  s.candidates.push_back(s.initial);
  if (s.step > 0) {
    for (int span = s.initial - s.step; span > s.floor_span; span -= s.step) {
      s.candidates.push_back(span);
    }
  }
  return s;
}

double SplineFit::value_at(std::size_t index) const noexcept {
  const double width = static_cast<double>(span_end - span_start);
  const double u = width > 0 ? static_cast<double>(index - span_start) / width : 0.0;
  const auto& a = coefficients;
  return a[0] + u * (a[1] + u * (a[2] + u * a[3]));
}

SplineFit fit_cubic(std::span<const double> seq, std::size_t start, std::size_t end) {
  if (end >= seq.size() || end < start || end - start + 1 < kMinSpan) {
    throw DataError("fit_cubic: span needs at least 4 points inside the sequence");
  }
  const double width = static_cast<double>(end - start);
  Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();
  Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
  for (std::size_t i = start; i <= end; ++i) {
    const double u = static_cast<double>(i - start) / width;
    const Eigen::Vector4d basis(1.0, u, u * u, u * u * u);
    gram.noalias() += basis * basis.transpose();
    rhs.noalias() += basis * seq[i];
  }
  const Eigen::Vector4d a = gram.ldlt().solve(rhs);

  SplineFit fit;
  fit.coefficients = {a[0], a[1], a[2], a[3]};
  fit.span_start = start;
  fit.span_end = end;
  double sse = 0.0;
  for (std::size_t i = start; i <= end; ++i) {
    const double r = fit.value_at(i) - seq[i];
    sse += r * r;
  }
  fit.mse = sse / static_cast<double>(end - start + 1);
  return fit;
}

SplineFit spline_span_search(std::span<const double> seq, std::size_t window_start) {
  const std::size_t n = seq.size();
  const std::size_t remaining = window_start < n ? n - window_start : 0;
  if (remaining < kMinSpan) {
    SplineFit degenerate;
    degenerate.span_start = window_start;
    degenerate.span_end = n == 0 ? 0 : n - 1;
    return degenerate;
  }

  std::vector<std::size_t> spans;
  for (int c : SpanSchedule::for_length(n).candidates) {
    spans.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(std::max(c, 0)),
                                            kMinSpan, remaining));
  }
  std::sort(spans.begin(), spans.end(), std::greater<>());
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());

  SplineFit best;
  bool have_best = false;
  for (std::size_t span : spans) {
    SplineFit fit = fit_cubic(seq, window_start, window_start + span - 1);
    // Descending order, so keeping strict improvements breaks ties toward larger spans.
    if (!have_best || fit.mse < best.mse) {
      best = fit;
      have_best = true;
    }
  }
  return best;
}

SmoothedSequence knotless_spline_smooth(std::span<const double> seq) {
  SmoothedSequence out{std::vector<double>(seq.begin(), seq.end()), {}};
  const std::size_t n = seq.size();
  if (n < kMinSpan) return out;

  out.knots.push_back(0);
  std::size_t start = 0;
  while (n - start >= kMinSpan) {
    const SplineFit fit = spline_span_search(seq, start);
    // The boundary shared with the previous span keeps the earlier value.
    for (std::size_t i = (start == 0 ? 0 : start + 1); i <= fit.span_end; ++i) {
      out.values[i] = fit.value_at(i);
    }
    out.knots.push_back(fit.span_end);
    if (fit.span_end == n - 1) break;
    start = fit.span_end;
  }
  return out;
}

Stroke knotless_spline_smooth(const Stroke& stroke) {
  if (stroke.size() < kMinSpan) return stroke;
  const auto xs = knotless_spline_smooth(stroke.xs());
  const auto ys = knotless_spline_smooth(stroke.ys());
  return stroke.with_coordinates(xs.values, ys.values);
}

Stroke apply(const Stroke& stroke, Method method, int dwt_levels) {
  switch (method) {
    case Method::raw: return stroke;
    case Method::dwt: return dwt_denoise(stroke, dwt_levels);
    case Method::spline: return knotless_spline_smooth(stroke);
  }
  return stroke;
}

}  // namespace devink::preprocess
