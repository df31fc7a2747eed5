#include "devink/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "devink/error.hpp"

namespace devink::synth {

namespace {

struct Vec2 {
  double x;
  double y;
};

// Waypoints on a 100x100 canvas (y up); a Catmull-Rom curve passes through
// each of them in order.
const std::map<std::string_view, std::vector<Vec2>>& skeletons() {
  static const std::map<std::string_view, std::vector<Vec2>> table = {
      {"u", {{15, 80}, {45, 88}, {62, 75}, {50, 58}, {30, 55}, {50, 52}, {72, 40}, {68, 15},
             {40, 8}, {20, 20}}},
      {"i", {{25, 70}, {40, 85}, {58, 78}, {52, 62}, {35, 58}, {60, 52}, {75, 35}, {62, 12},
             {38, 10}, {30, 25}, {45, 32}}},
      {"e", {{70, 85}, {45, 65}, {25, 50}, {50, 42}, {70, 28}, {62, 8}}},
      {"k", {{50, 85}, {50, 50}, {30, 62}, {12, 48}, {30, 35}, {50, 50}, {72, 62}, {88, 48},
             {70, 35}, {50, 48}, {48, 10}}},
      {"R", {{25, 75}, {55, 85}, {70, 65}, {50, 50}, {60, 30}}},
      {"v", {{55, 70}, {30, 78}, {15, 55}, {30, 32}, {55, 38}, {65, 55}, {50, 65}, {50, 10}}},
      {"g", {{20, 85}, {20, 30}, {30, 12}, {50, 15}, {62, 40}, {62, 85}}},
      {"gh", {{15, 80}, {18, 40}, {35, 25}, {55, 35}, {50, 55}, {35, 45}, {60, 25}, {80, 30},
              {80, 85}}},
      {"D", {{15, 80}, {55, 80}, {70, 65}, {45, 52}, {30, 40}, {50, 22}, {75, 18}}},
      {"c", {{75, 80}, {25, 80}, {15, 60}, {30, 45}, {55, 50}, {70, 40}, {65, 15}, {45, 10}}},
  };
  return table;
}

constexpr Vec2 kCanvasCenter{50.0, 50.0};
constexpr double kStepUnits = 2.0;        // nominal pen travel per 10 ms sample
constexpr double kCurvatureSlowdown = 8.0;
constexpr int kDensePerSegment = 200;
constexpr std::int64_t kSampleMs = 10;

Vec2 catmull_rom(const std::vector<Vec2>& w, double s) {
  const auto m = static_cast<int>(w.size()) - 1;
  const int seg = std::clamp(static_cast<int>(std::floor(s)), 0, m - 1);
  const double u = s - seg;
  auto at = [&](int i) { return w[static_cast<std::size_t>(std::clamp(i, 0, m))]; };
  const Vec2 p0 = at(seg - 1), p1 = at(seg), p2 = at(seg + 1), p3 = at(seg + 2);
  auto blend = [&](double a, double b, double c, double d) {
    return 0.5 * ((2 * b) + (-a + c) * u + (2 * a - 5 * b + 4 * c - d) * u * u +
                  (-a + 3 * b - 3 * c + d) * u * u * u);
  };
  return {blend(p0.x, p1.x, p2.x, p3.x), blend(p0.y, p1.y, p2.y, p3.y)};
}

// Dense polyline of the skeleton with cumulative "pen time": travel is
// slowed where the path turns.
struct DensePath {
  std::vector<Vec2> points;
  std::vector<double> time;  // cumulative, starts at 0
};

DensePath densify(const std::vector<Vec2>& waypoints) {
  DensePath path;
  const int segments = static_cast<int>(waypoints.size()) - 1;
  const int total = segments * kDensePerSegment;
  for (int k = 0; k <= total; ++k) {
    path.points.push_back(catmull_rom(waypoints, static_cast<double>(k) / kDensePerSegment));
  }
  path.time.assign(path.points.size(), 0.0);
  for (std::size_t k = 1; k < path.points.size(); ++k) {
    const double dx = path.points[k].x - path.points[k - 1].x;
    const double dy = path.points[k].y - path.points[k - 1].y;
    const double ds = std::hypot(dx, dy);
    double turn = 0.0;
    if (k >= 2) {
      const double a0 = std::atan2(path.points[k - 1].y - path.points[k - 2].y,
                                   path.points[k - 1].x - path.points[k - 2].x);
      turn = std::abs(std::remainder(std::atan2(dy, dx) - a0, 2 * M_PI));
    }
    // Curvature ~ turn / ds, so slowdown adds kCurvatureSlowdown * turn.
    path.time[k] = path.time[k - 1] + ds + kCurvatureSlowdown * turn;
  }
  return path;
}

Vec2 at_time(const DensePath& path, double tau) {
  auto it = std::lower_bound(path.time.begin(), path.time.end(), tau);
  if (it == path.time.begin()) return path.points.front();
  if (it == path.time.end()) return path.points.back();
  const auto k = static_cast<std::size_t>(it - path.time.begin());
  const double span = path.time[k] - path.time[k - 1];
  const double f = span > 0 ? (tau - path.time[k - 1]) / span : 0.0;
  return {path.points[k - 1].x + f * (path.points[k].x - path.points[k - 1].x),
          path.points[k - 1].y + f * (path.points[k].y - path.points[k - 1].y)};
}

struct Rendering {
  double rotation = 0.0;
  double scale = 1.0;
  double speed = 1.0;
  double warp = 0.0;  // amplitude of the sinusoidal time warp, |warp| < 1
};

std::vector<Vec2> render(const DensePath& path, const Rendering& r) {
  const double total = path.time.back();
  const auto n = static_cast<std::size_t>(
      std::max(8.0, std::round(total * r.scale / (kStepUnits * r.speed))));
  std::vector<Vec2> out;
  out.reserve(n);
  const double c = std::cos(r.rotation), s = std::sin(r.rotation);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    const double warped = u + r.warp * std::sin(2 * M_PI * u) / (2 * M_PI);
    const Vec2 p = at_time(path, warped * total);
    const double dx = (p.x - kCanvasCenter.x) * r.scale;
    const double dy = (p.y - kCanvasCenter.y) * r.scale;
    out.push_back({kCanvasCenter.x + c * dx - s * dy, kCanvasCenter.y + s * dx + c * dy});
  }
  return out;
}

std::string skeleton_list() {
  std::string out;
  for (auto id : available_skeletons()) {
    if (!out.empty()) out += ", ";
    out += id.name();
  }
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (writers < 1 || samples_per_writer < 1) {
    throw DataError("synth: writers and samples per writer must be >= 1");
  }
  if (jitter_sigma < 0 || rotation_range < 0 || speed_warp < 0) {
    throw DataError("synth: jitter, rotation range and speed warp must be non-negative");
  }
  if (scale_range.first <= 0 || scale_range.second < scale_range.first) {
    throw DataError("synth: scale range must satisfy 0 < lo <= hi");
  }
}

std::vector<PrimitiveId> available_skeletons() {
  std::vector<PrimitiveId> out;
  for (const auto& entry : skeletons()) out.push_back(PrimitiveId::from_name(entry.first));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrimitiveId> default_primitives() {
  std::vector<PrimitiveId> out;
  for (auto name : {"u", "i", "e", "k", "R", "v", "g", "gh", "D", "c"}) {
    out.push_back(PrimitiveId::from_name(name));
  }
  return out;
}

std::vector<Point> render_skeleton(PrimitiveId id) {
  auto it = skeletons().find(id.name());
  if (it == skeletons().end()) {
    throw DataError("no skeleton for primitive '" + std::string(id.name()) +
                    "'; available: " + skeleton_list());
  }
  const auto pts = render(densify(it->second), Rendering{});
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.push_back({pts[i].x, pts[i].y, static_cast<std::int64_t>(i) * kSampleMs});
  }
  return out;
}

Dataset generate_synthetic(const SynthConfig& config) {
  config.validate();
  const auto primitives = config.primitives.empty() ? available_skeletons() : config.primitives;
  std::vector<DensePath> paths;
  for (auto id : primitives) {
    auto it = skeletons().find(id.name());
    if (it == skeletons().end()) {
      throw DataError("no skeleton for primitive '" + std::string(id.name()) +
                      "'; available: " + skeleton_list());
    }
    paths.push_back(densify(it->second));
  }

  std::mt19937_64 rng(config.seed);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset out;
  out.source = DatasetSource::synthetic;
  for (std::size_t p = 0; p < primitives.size(); ++p) {
    for (int w = 0; w < config.writers; ++w) {
      Rendering writer;
      writer.rotation = uniform(-config.rotation_range, config.rotation_range);
      writer.scale = uniform(config.scale_range.first, config.scale_range.second);
      for (int s = 0; s < config.samples_per_writer; ++s) {
        Rendering r = writer;
        r.speed = std::exp(uniform(-config.speed_warp, config.speed_warp));
        r.warp = std::clamp(uniform(-config.speed_warp, config.speed_warp), -0.9, 0.9);
        const auto pts = render(paths[p], r);
        std::vector<Point> points;
        points.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const double jx = config.jitter_sigma > 0 ? config.jitter_sigma * gauss(rng) : 0.0;
          const double jy = config.jitter_sigma > 0 ? config.jitter_sigma * gauss(rng) : 0.0;
          points.push_back({pts[i].x + jx, pts[i].y + jy, static_cast<std::int64_t>(i) * kSampleMs});
        }
        char id[64];
        std::snprintf(id, sizeof id, "syn-%s-w%02d-s%02d",
                      std::string(primitives[p].name()).c_str(), w + 1, s + 1);
        out.strokes.emplace_back(id, std::move(points), primitives[p]);
      }
    }
  }
  return out;
}

}  // namespace devink::synth
