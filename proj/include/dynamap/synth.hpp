#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynamap/geometry.hpp"
#include "dynamap/point_types.hpp"

namespace dynamap {

struct Box {
    Point3 center = Point3::Zero();
    Point3 size = Point3::Ones();  // full extents along x, y, z

    Point3 min_corner() const { return center - 0.5 * size; }
    Point3 max_corner() const { return center + 0.5 * size; }
};

struct DynamicBox {
    Box box;                                   // pose at sweep 0
    Eigen::Vector3d velocity = {0.0, 0.0, 0.0};  // m/s, world frame

    Box at_time(double seconds) const {
        Box moved = box;
        moved.center += velocity * seconds;
        return moved;
    }
};

struct SensorSpec {
    int rings = 64;
    double vfov_min_deg = -25.0;
    double vfov_max_deg = 15.0;
    int azimuth_bins = 1000;
    double max_range = 80.0;
    double rate_hz = 10.0;
    double range_jitter_sigma = 0.0;
    uint64_t seed = 0;
};

/// A desk-scale driving scene: a ground plane, static boxes/walls, and
/// constant-velocity dynamic boxes resting on the ground (moving objects
/// touch the ground; that is the premise the detector exploits).
struct SceneSpec {
    double ground_height = 0.0;
    std::vector<Box> static_boxes;
    std::vector<DynamicBox> dynamic_boxes;
    SensorSpec sensor;

    // Either an explicit pose per sweep or a generated straight line.
    std::vector<Pose> trajectory_poses;
    std::optional<Point3> straight_start;
    Point3 straight_step_per_sweep = {1.0, 0.0, 0.0};

    Pose platform_pose(int64_t sweep_index) const;
};

void validate(const SceneSpec &spec);

SceneSpec parse_scene(const std::string &json_text);
SceneSpec load_scene(const std::string &path);

/// Closed-form ray intersections; `t` is the range along the unit direction.
std::optional<double> intersect_ray_plane(const Point3 &origin, const Point3 &dir, double plane_z);
std::optional<double> intersect_ray_box(const Point3 &origin, const Point3 &dir, const Box &box);

/// Casts one ray per (ring, azimuth bin) from the platform pose of
/// `sweep_index`; the nearest hit within max_range wins. Points come back in
/// the sensor frame with ring, range, ground-truth tag (gt_dynamic), and a
/// running source_index already filled in.
Sweep raycast_sweep(const SceneSpec &spec, int64_t sweep_index);

/// Writes `sweeps` raycast sweeps as a KITTI-layout dataset:
/// velodyne/NNNNNN.bin, labels/NNNNNN.label, poses.txt. Ground hits are
/// labeled road (40), static-box hits building (50), dynamic-box hits
/// moving-car (252).
void emit_dataset(const SceneSpec &spec, int64_t sweeps, const std::string &out_dir);

}  // namespace dynamap
