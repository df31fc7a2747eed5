#include "devink/ink.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "devink/error.hpp"

namespace devink {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string check_points(std::span<const Point> points) {
  if (points.size() < 2) {
    return "stroke has " + std::to_string(points.size()) +
           " point(s); at least 2 are required";
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      return "non-finite coordinate at point " + std::to_string(i);
    }
    if (points[i].t < 0) {
      return "negative timestamp at point " + std::to_string(i);
    }
    if (i > 0 && points[i].t <= points[i - 1].t) {
      return "timestamps not strictly increasing at point " + std::to_string(i) +
             " (t=" + std::to_string(points[i].t) + " after " +
             std::to_string(points[i - 1].t) + ")";
    }
  }
  return {};
}

}  // namespace

Stroke::Stroke(std::string id, std::vector<Point> points,
               std::optional<PrimitiveId> label)
    : id_(std::move(id)), points_(std::move(points)), label_(label) {
  if (auto problem = check_points(points_); !problem.empty()) {
    throw DataError("stroke '" + id_ + "': " + problem);
  }
}

std::vector<double> Stroke::xs() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.x);
  return out;
}

std::vector<double> Stroke::ys() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.y);
  return out;
}

Stroke Stroke::with_coordinates(std::span<const double> xs,
                                std::span<const double> ys) const {
  if (xs.size() != points_.size() || ys.size() != points_.size()) {
    throw DataError("stroke '" + id_ + "': coordinate count mismatch");
  }
  std::vector<Point> pts(points_);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i].x = xs[i];
    pts[i].y = ys[i];
  }
  return Stroke(id_, std::move(pts), label_);
}

Stroke Stroke::with_label(std::optional<PrimitiveId> label) const {
  Stroke copy = *this;
  copy.label_ = label;
  return copy;
}

std::string_view to_string(DatasetSource source) noexcept {
  switch (source) {
    case DatasetSource::isolated: return "isolated";
    case DatasetSource::paragraph_extracted: return "paragraph-extracted";
    case DatasetSource::synthetic: return "synthetic";
  }
  return "isolated";
}

DatasetSource parse_dataset_source(std::string_view text) {
  if (text == "isolated") return DatasetSource::isolated;
  if (text == "paragraph-extracted") return DatasetSource::paragraph_extracted;
  if (text == "synthetic") return DatasetSource::synthetic;
  throw DataError("unknown dataset source '" + std::string(text) + "'");
}

void Dataset::require_labels() const {
  for (const auto& s : strokes) {
    if (!s.label()) throw DataError("stroke '" + s.id() + "' has no label");
  }
}

std::optional<Stroke> parse_stroke_record(std::string_view text, std::size_t line,
                                          DatasetSource* source,
                                          std::string* rejection) {
  ordered_json record;
  try {
    record = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line, "record is not a JSON object");

  auto id_it = record.find("id");
  if (id_it == record.end() || !id_it->is_string()) {
    throw ParseError(line, "missing string field 'id'");
  }

  std::optional<PrimitiveId> label;
  if (auto it = record.find("label"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line, "'label' must be a string or null");
    try {
      label = PrimitiveId::from_name(it->get<std::string>());
    } catch (const DataError& e) {
      throw ParseError(line, e.what());
    }
  }

  bool y_down = false;
  if (auto it = record.find("y_down"); it != record.end()) {
    if (!it->is_boolean()) throw ParseError(line, "'y_down' must be true or false");
    y_down = it->get<bool>();
  }

  if (auto it = record.find("source"); it != record.end() && source != nullptr) {
    if (!it->is_string()) throw ParseError(line, "'source' must be a string");
    try {
      *source = parse_dataset_source(it->get<std::string>());
    } catch (const DataError& e) {
      throw ParseError(line, e.what());
    }
  }

  auto pts_it = record.find("points");
  if (pts_it == record.end() || !pts_it->is_array()) {
    throw ParseError(line, "missing array field 'points'");
  }
  std::vector<Point> points;
  points.reserve(pts_it->size());
  for (std::size_t i = 0; i < pts_it->size(); ++i) {
    const auto& p = (*pts_it)[i];
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError(line, "point " + std::to_string(i) + " is not [x, y, t]");
    }
    if (!p[2].is_number_integer() || p[2].get<std::int64_t>() < 0) {
      throw ParseError(line, "point " + std::to_string(i) +
                                 ": t must be a non-negative integer");
    }
    Point pt{p[0].get<double>(), p[1].get<double>(), p[2].get<std::int64_t>()};
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
      throw ParseError(line, "point " + std::to_string(i) + " has a non-finite coordinate");
    }
    if (y_down) pt.y = -pt.y;
    points.push_back(pt);
  }

  std::string id = id_it->get<std::string>();
  if (auto problem = check_points(points); !problem.empty()) {
    if (rejection != nullptr) *rejection = "stroke '" + id + "' rejected: " + problem;
    return std::nullopt;
  }
  return Stroke(std::move(id), std::move(points), label);
}

std::string format_stroke_record(const Stroke& stroke, DatasetSource source) {
  ordered_json record;
  record["id"] = stroke.id();
  if (stroke.label()) {
    record["label"] = std::string(stroke.label()->name());
  } else {
    record["label"] = nullptr;
  }
  record["y_down"] = false;
  if (source != DatasetSource::isolated) record["source"] = std::string(to_string(source));
  ordered_json pts = ordered_json::array();
  for (const auto& p : stroke.points()) {
    pts.push_back(ordered_json::array({p.x, p.y, p.t}));
  }
  record["points"] = std::move(pts);
  return record.dump();
}

Dataset read_strokes(std::istream& in, std::vector<LoadDiagnostic>* diagnostics) {
  Dataset dataset;
  bool source_seen = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    DatasetSource source = DatasetSource::isolated;
    std::string rejection;
    auto stroke = parse_stroke_record(text, line, &source, &rejection);
    if (!stroke) {
      if (diagnostics != nullptr) diagnostics->push_back({line, rejection});
      continue;
    }
    if (!source_seen) {
      dataset.source = source;
      source_seen = true;
    } else if (source != dataset.source) {
      throw ParseError(line, "record source '" + std::string(to_string(source)) +
                                 "' differs from earlier records");
    }
    dataset.strokes.push_back(std::move(*stroke));
  }
  return dataset;
}

Dataset load_strokes(const std::filesystem::path& path,
                     std::vector<LoadDiagnostic>* diagnostics) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stroke file " + path.string());
  return read_strokes(in, diagnostics);
}

void write_strokes(const Dataset& dataset, std::ostream& out) {
  for (const auto& s : dataset.strokes) {
    out << format_stroke_record(s, dataset.source) << '\n';
  }
}

void save_strokes(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write stroke file " + path.string());
  write_strokes(dataset, out);
  out.flush();
  if (!out) throw IoError("I/O error writing " + path.string());
}

}  // namespace devink
