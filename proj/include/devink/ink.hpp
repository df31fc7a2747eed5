#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace devink {

/// Number of primitive strokes in the closed registry.
inline constexpr int kPrimitiveCount = 69;

/// Version tag of the primitive registry; stored in model files.
inline constexpr std::string_view kRegistryVersion = "devanagari-69/v1";

/// One of the 69 primitive stroke classes. Always holds a valid index.
class PrimitiveId {
 public:
  /// Throws DataError unless 1 <= index <= 69.
  explicit PrimitiveId(int index);

  /// Throws DataError listing every valid name if `name` is not registered.
  static PrimitiveId from_name(std::string_view name);

  int index() const noexcept { return index_; }
  std::string_view name() const noexcept;

  auto operator<=>(const PrimitiveId&) const = default;

 private:
  int index_;
};

/// All registered names, in index order (entry i has index i+1).
std::span<const std::string_view> primitive_names() noexcept;

/// A pen sample in the canonical y-up frame; t is milliseconds since pen-down.
struct Point {
  double x = 0.0;
  double y = 0.0;
  std::int64_t t = 0;

  bool operator==(const Point&) const = default;
};

/// Time-ordered pen trace between one pen-down and the next pen-up.
///
/// Construction validates n >= 2, finite coordinates and strictly increasing
/// timestamps; a Stroke that exists is always well formed.
class Stroke {
 public:
  Stroke(std::string id, std::vector<Point> points,
         std::optional<PrimitiveId> label = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::optional<PrimitiveId>& label() const noexcept { return label_; }

  std::vector<double> xs() const;
  std::vector<double> ys() const;

  /// Same id, label and timestamps with new coordinates.
  Stroke with_coordinates(std::span<const double> xs,
                          std::span<const double> ys) const;
  Stroke with_label(std::optional<PrimitiveId> label) const;

  bool operator==(const Stroke&) const = default;

 private:
  std::string id_;
  std::vector<Point> points_;
  std::optional<PrimitiveId> label_;
};

enum class DatasetSource { isolated, paragraph_extracted, synthetic };

std::string_view to_string(DatasetSource source) noexcept;
DatasetSource parse_dataset_source(std::string_view text);

struct Dataset {
  std::vector<Stroke> strokes;
  DatasetSource source = DatasetSource::isolated;

  bool operator==(const Dataset&) const = default;

  /// Throws DataError naming the first stroke that carries no label.
  void require_labels() const;
};

/// Records that parsed but were rejected (non-monotone time, n < 2).
struct LoadDiagnostic {
  std::size_t line;
  std::string message;
};

/// Parses one JSONL record. Throws ParseError for malformed input or an
/// unknown label; returns nullopt and fills `rejection` for a record whose
/// points violate stroke invariants.
std::optional<Stroke> parse_stroke_record(std::string_view text,
                                          std::size_t line,
                                          DatasetSource* source,
                                          std::string* rejection);

/// Serializes one stroke in canonical form (y-up, `y_down: false`).
std::string format_stroke_record(const Stroke& stroke,
                                 DatasetSource source = DatasetSource::isolated);

Dataset load_strokes(const std::filesystem::path& path,
                     std::vector<LoadDiagnostic>* diagnostics = nullptr);
Dataset read_strokes(std::istream& in,
                     std::vector<LoadDiagnostic>* diagnostics = nullptr);

void save_strokes(const Dataset& dataset, const std::filesystem::path& path);
void write_strokes(const Dataset& dataset, std::ostream& out);

}  // namespace devink
