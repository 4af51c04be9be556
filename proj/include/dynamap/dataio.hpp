#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "dynamap/geometry.hpp"
#include "dynamap/point_types.hpp"
#include "dynamap/voxel_map.hpp"

namespace dynamap {

struct RawPoint {
    float x = 0.0f;
    float y = 0.0f;
    float z = 0.0f;
    float intensity = 0.0f;
};

/// KITTI .bin scan: 4 consecutive little-endian float32 per point
/// (x, y, z, intensity). Throws FormatError when the file length is not a
/// multiple of 16 bytes.
std::vector<RawPoint> read_kitti_bin(const std::string &path);

void write_kitti_bin(const std::string &path, const std::vector<RawPoint> &points);

/// Semantic-KITTI .label file: one little-endian uint32 per point; the lower
/// 16 bits carry the semantic class. Throws FormatError when
/// `expected_points` >= 0 and the count differs.
std::vector<uint32_t> read_semantic_labels(const std::string &path, int64_t expected_points = -1);

void write_semantic_labels(const std::string &path, const std::vector<uint32_t> &labels);

inline uint16_t semantic_class(uint32_t label) { return static_cast<uint16_t>(label & 0xFFFFu); }

/// Loads the semantic-class -> dynamic mapping data file: JSON with a
/// "dynamic_classes" array of class ids. Shipped under data/ and editable,
/// so "all movable" vs "actually moving" conventions stay a data decision.
std::unordered_set<uint16_t> load_dynamic_classes(const std::string &path);

enum class PoseFormat : uint8_t { KittiOdometry, Tum };

PoseFormat parse_pose_format(const std::string &name);

/// Indexed pose list. KITTI odometry: 12 floats per line, row-major 3x4.
/// TUM: timestamp tx ty tz qx qy qz qw. Rotations are re-orthonormalized.
/// `extrinsic` (LiDAR -> pose frame) is composed onto every pose; pass
/// identity when the file is already LiDAR-frame.
std::vector<Pose> read_poses(const std::string &path, PoseFormat format,
                             const Pose &extrinsic = Pose::identity());

void write_poses_kitti(const std::string &path, const std::vector<Pose> &poses);

enum class PlyColorMode : uint8_t {
    Label,  // ground orange, non-ground white
    Class,  // uniform gray: everything a map stores has already passed as static
};

/// Binary little-endian PLY (float32 x y z + uint8 r g b), points ordered by
/// voxel key then insertion order. Re-exporting the same map is byte-identical.
void write_ply(const VoxelMap &map, const std::string &path, PlyColorMode color_mode);

}  // namespace dynamap
