#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "devink/ink.hpp"

namespace devink::synth {

/// Stand-in for a recorded corpus: skeleton strokes rendered by simulated
/// writers. Identical config => byte-identical dataset.
struct SynthConfig {
  std::vector<PrimitiveId> primitives;  // empty => every primitive with a skeleton
  int writers = 20;
  int samples_per_writer = 10;
  double jitter_sigma = 0.5;            // device units, per coordinate per sample
  double rotation_range = 0.15;         // radians, per writer, uniform +/-
  std::pair<double, double> scale_range{0.85, 1.15};  // per writer, uniform
  double speed_warp = 0.3;              // >= 0; writing-speed variability
  std::uint64_t seed = 42;

  void validate() const;
};

/// Primitives that have a built-in skeleton, in registry order.
std::vector<PrimitiveId> available_skeletons();

/// The ten primitives with skeletons: u i e k R v g gh D c.
std::vector<PrimitiveId> default_primitives();

/// Noise-free rendering of a primitive's skeleton, one point per 10 ms.
std::vector<Point> render_skeleton(PrimitiveId id);

/// Throws DataError listing the available skeletons if a requested primitive
/// has none.
Dataset generate_synthetic(const SynthConfig& config);

}  // namespace devink::synth
