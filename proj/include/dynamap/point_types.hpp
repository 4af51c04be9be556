#pragma once

#include <cstdint>
#include <vector>

#include "dynamap/geometry.hpp"

namespace dynamap {

enum class GroundLabel : uint8_t { Ground, NonGround };

enum class PointClass : uint8_t { Static, Dynamic, Undetermined };

/// One LiDAR return with everything the detection pipeline attaches to it.
/// `ring` is -1 until a row index is known (assigned from the sensor ring
/// field or by vertical-angle quantization during range-image projection).
/// `source_index` is the point's position in the raw input scan so verdicts
/// can be joined back against per-point ground-truth labels.
struct LabeledPoint {
    Point3 position_sensor = Point3::Zero();
    Point3 position_world = Point3::Zero();
    GroundLabel ground_label = GroundLabel::NonGround;
    int ring = -1;
    double range = 0.0;
    int32_t source_index = -1;
    int8_t gt_dynamic = -1;  // ground truth when known: -1 unknown, 0 static, 1 dynamic
};

/// One LiDAR revolution with the pose that places its sensor frame in the world.
struct Sweep {
    int64_t index = 0;
    std::vector<LabeledPoint> points;
    Pose pose_world_lidar;
};

}  // namespace dynamap
