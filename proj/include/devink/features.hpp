#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devink/ink.hpp"

namespace devink::features {

inline constexpr int kDirections = 8;

/// Fixed-length 8-bin direction vector (FDF or a code histogram).
using DirectionVector = std::array<double, kDirections>;

enum class FeatureKind { df, edf, fdf };

std::string_view to_string(FeatureKind kind) noexcept;
FeatureKind parse_feature_kind(std::string_view text);

/// One of the eight crisp directions. Direction d is centred on
/// (d - 1) * pi / 4, wrapped into (-pi, pi].
class DirectionCode {
 public:
  /// Throws DataError unless 1 <= value <= 8.
  explicit DirectionCode(int value);

  int value() const noexcept { return value_; }
  double center() const noexcept;

  /// Neighbours on the 8-cycle (1 <-> 8 wraps).
  DirectionCode counter_clockwise() const noexcept;
  DirectionCode clockwise() const noexcept;

  auto operator<=>(const DirectionCode&) const = default;

 private:
  int value_;
};

using CodeSequence = std::vector<DirectionCode>;

struct Coord {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Coord&) const = default;
};

struct CriticalPointSet {
  std::string stroke_id;
  std::vector<std::size_t> indices;  // strictly increasing, 0-based
  std::vector<Coord> coords;

  std::size_t size() const noexcept { return indices.size(); }
};

/// Two adjacent directions sharing one angle; m1 + m2 = 1, m1 >= m2.
struct FuzzyDirection {
  DirectionCode d1{1};
  double m1 = 1.0;
  DirectionCode d2{2};
  double m2 = 0.0;
};

/// Marks i+1 whenever sgn(v_i - v_{i+1}) changes between consecutive steps,
/// on x and on y separately; returns the union plus both endpoints.
CriticalPointSet extract_critical_points(const Stroke& stroke);

/// Sign-change marks for a single coordinate sequence (interior indices only).
std::vector<std::size_t> sign_change_marks(std::span<const double> seq);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta) noexcept;

/// Direction of travel from `a` to `b`, in (-pi, pi].
/// Throws DataError("coincident critical points") when a == b.
double angle_between(Coord a, Coord b);

/// Crisp sector lookup. Sectors are half-open on their clockwise edge:
/// [-pi/8, pi/8) -> 1, [pi/8, 3pi/8) -> 2, ..., [-3pi/8, -pi/8) -> 8,
/// and dir 5 owns [7pi/8, pi] together with [-pi, -7pi/8).
DirectionCode deg2dir(double theta) noexcept;

/// Triangular membership 1 - |wrap(center - theta)| / (pi/4), clamped at 0.
double fuzzy_membership(double theta_c, double theta) noexcept;

FuzzyDirection fuzzify(double theta) noexcept;

/// Adjacent-pair direction codes; coincident consecutive points are skipped.
/// Throws DataError("degenerate stroke") if no pair survives.
CodeSequence compute_df(const CriticalPointSet& cps);

/// All pairs l < m in row-major order, length k(k-1)/2. A coincident pair
/// repeats the previous entry (or the next valid one, at the very start).
CodeSequence compute_edf(const CriticalPointSet& cps);

/// Mean fuzzy membership per direction over adjacent pairs; directions that
/// received no non-zero membership stay 0.
DirectionVector compute_fdf(const CriticalPointSet& cps);

/// Normalized occurrence histogram of a code list. Throws on empty input.
DirectionVector embed_histogram(std::span<const DirectionCode> codes);

std::vector<int> code_values(std::span<const DirectionCode> codes);
CodeSequence codes_from_values(std::span<const int> values);

}  // namespace devink::features
