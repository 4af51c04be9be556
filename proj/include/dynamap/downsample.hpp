#pragma once

#include <vector>

#include "dynamap/point_types.hpp"

namespace dynamap {

/// Spatial voxel downsampling to uniform density: keeps at most one point per
/// cubic cell of side `cell` (keyed in the sensor frame), preferring the
/// point nearest the cell center. Output is sorted by cell key, so the result
/// is deterministic and independent of input order. Labels ride along.
std::vector<LabeledPoint> voxel_downsample(const std::vector<LabeledPoint> &points, double cell);

}  // namespace dynamap
