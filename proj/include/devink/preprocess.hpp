#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "devink/ink.hpp"

namespace devink::preprocess {

enum class Method { raw, dwt, spline };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

// ---------------------------------------------------------------------------
// Wavelet denoising

/// db4 synthesis low-pass filter (8 taps, 4 vanishing moments).
/// Analysis filters are derived from it by reversal and alternation.
extern const std::array<double, 8> kDb4ReconstructionLowPass;

/// Deepest decomposition the sequence length supports: each level's input
/// must hold at least filter-length-minus-one samples.
int dwt_max_levels(std::size_t length) noexcept;

/// Single-level analysis with half-sample symmetric extension.
/// Output length is floor((n + 7) / 2).
std::vector<double> dwt_analysis(std::span<const double> seq,
                                 std::span<const double> filter);

/// Upsample-and-filter synthesis, truncated to `length` samples.
std::vector<double> dwt_synthesis(std::span<const double> coeffs,
                                  std::span<const double> filter,
                                  std::size_t length);

/// Low-pass reconstruction: decompose `levels` times with db4, zero every
/// detail band, reconstruct. Length is preserved. Throws DataError when the
/// sequence is too short for the requested depth.
std::vector<double> dwt_denoise(std::span<const double> seq, int levels = 1);

/// Applies dwt_denoise to x and y independently. Strokes too short for a
/// single level are returned unchanged.
Stroke dwt_denoise(const Stroke& stroke, int levels = 1);

// ---------------------------------------------------------------------------
// Knotless spline smoothing

struct SpanSchedule {
  int initial = 0;     // floor(n / 2)
  int step = 0;        // floor(n / 8)
  int floor_span = 0;  // ceil(0.2 * initial)
  std::vector<int> candidates;

  static SpanSchedule for_length(std::size_t n);
};

/// Cubic in the normalized index u = (i - span_start) / (span_end - span_start).
struct SplineFit {
  std::array<double, 4> coefficients{};  // a0 + a1 u + a2 u^2 + a3 u^3
  std::size_t span_start = 0;
  std::size_t span_end = 0;              // inclusive
  double mse = 0.0;

  std::size_t span_points() const noexcept { return span_end - span_start + 1; }
  double value_at(std::size_t index) const noexcept;
};

/// Least-squares cubic over seq[start..end] (inclusive). Needs >= 4 points.
SplineFit fit_cubic(std::span<const double> seq, std::size_t start, std::size_t end);

/// Tries every schedule candidate anchored at `window_start`, clamped to the
/// points that remain, and keeps the fit with the smallest MSE (ties go to
/// the larger span). With fewer than 4 points left the fit is degenerate:
/// it covers the remainder with zero coefficients and zero MSE, and callers
/// keep those samples as they are.
SplineFit spline_span_search(std::span<const double> seq, std::size_t window_start);

/// Smoothed sequence plus the knot indices chosen along the way.
struct SmoothedSequence {
  std::vector<double> values;
  std::vector<std::size_t> knots;
};

SmoothedSequence knotless_spline_smooth(std::span<const double> seq);

/// Smooths x and y independently; strokes with n < 4 come back unchanged.
Stroke knotless_spline_smooth(const Stroke& stroke);

/// Dispatches on `method`. `dwt_levels` only affects Method::dwt.
Stroke apply(const Stroke& stroke, Method method, int dwt_levels = 1);

}  // namespace devink::preprocess
