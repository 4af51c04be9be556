#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dynamap/geometry.hpp"
#include "dynamap/point_types.hpp"

namespace dynamap {

struct VoxelKey {
    int64_t ix = 0;
    int64_t iy = 0;
    int64_t iz = 0;

    bool operator==(const VoxelKey &other) const = default;
    bool operator<(const VoxelKey &other) const {
        if (ix != other.ix) return ix < other.ix;
        if (iy != other.iy) return iy < other.iy;
        return iz < other.iz;
    }
};

struct VoxelKeyHash {
    size_t operator()(const VoxelKey &k) const {
        return static_cast<size_t>(k.ix) * 73856093ULL ^
               static_cast<size_t>(k.iy) * 19349669ULL ^
               static_cast<size_t>(k.iz) * 83492791ULL;
    }
};

struct MapPoint {
    Point3 position = Point3::Zero();
    GroundLabel label = GroundLabel::NonGround;
};

struct VoxelMapConfig {
    double voxel_size = 1.0;
    int max_points_per_voxel = 20;
    double min_point_spacing = 0.1;
    // The containing voxel is the whole neighbor set. Searching the 26
    // adjacent voxels as well is kept only as an ablation switch.
    bool search_adjacent = false;
};

/// Hash-voxel global map. Voxels are bounded point lists; lookup of the
/// voxel containing a query point is O(1). Instantiated twice by the
/// pipeline: once as the tracking-map, once as the output-map.
class VoxelMap {
public:
    explicit VoxelMap(const VoxelMapConfig &config = {});

    static VoxelKey key_of(const Point3 &p, double voxel_size);

    /// Stores the point unless its cell is at capacity or an existing point
    /// of the cell lies within min_point_spacing. Returns whether stored.
    bool insert(const Point3 &p, GroundLabel label);

    /// All stored points of the voxel containing `p` (plus the 26 adjacent
    /// voxels when search_adjacent is set). Empty when the cell is absent.
    std::vector<MapPoint> neighbors_in_voxel(const Point3 &p) const;

    /// Removes one stored point with exactly these coordinates, erasing the
    /// cell if it empties. Returns whether a point was removed.
    bool remove_exact(const Point3 &p);

    /// Flat (point, label) list over all cells, sorted by voxel key and then
    /// insertion order within each cell. Deterministic for export.
    std::vector<MapPoint> export_points() const;

    size_t point_count() const { return point_count_; }
    size_t cell_count() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    void clear();

    const VoxelMapConfig &config() const { return config_; }

private:
    VoxelMapConfig config_;
    std::unordered_map<VoxelKey, std::vector<MapPoint>, VoxelKeyHash> cells_;
    size_t point_count_ = 0;
};

}  // namespace dynamap
