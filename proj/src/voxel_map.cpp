#include "dynamap/voxel_map.hpp"

#include <algorithm>
#include <cmath>

#include "dynamap/errors.hpp"

namespace dynamap {

VoxelMap::VoxelMap(const VoxelMapConfig &config) : config_(config) {
    if (config_.voxel_size <= 0.0) throw ConfigError("voxel_size must be > 0");
    if (config_.max_points_per_voxel < 1) throw ConfigError("max_points_per_voxel must be >= 1");
    if (config_.min_point_spacing < 0.0) throw ConfigError("min_point_spacing must be >= 0");
}

VoxelKey VoxelMap::key_of(const Point3 &p, double voxel_size) {
    return {static_cast<int64_t>(std::floor(p.x() / voxel_size)),
            static_cast<int64_t>(std::floor(p.y() / voxel_size)),
            static_cast<int64_t>(std::floor(p.z() / voxel_size))};
}

bool VoxelMap::insert(const Point3 &p, GroundLabel label) {
    const VoxelKey key = key_of(p, config_.voxel_size);
    const auto it = cells_.find(key);
    if (it != cells_.end()) {
        auto &cell = it->second;
        if (static_cast<int>(cell.size()) >= config_.max_points_per_voxel) return false;
        const double spacing_sq = config_.min_point_spacing * config_.min_point_spacing;
        for (const auto &stored : cell) {
            if ((stored.position - p).squaredNorm() < spacing_sq) return false;
        }
        cell.push_back({p, label});
    } else {
        cells_[key].push_back({p, label});
    }
    ++point_count_;
    return true;
}

std::vector<MapPoint> VoxelMap::neighbors_in_voxel(const Point3 &p) const {
    std::vector<MapPoint> out;
    const VoxelKey center = key_of(p, config_.voxel_size);
    if (!config_.search_adjacent) {
        const auto it = cells_.find(center);
        if (it != cells_.end()) out = it->second;
        return out;
    }
    for (int64_t dx = -1; dx <= 1; ++dx) {
        for (int64_t dy = -1; dy <= 1; ++dy) {
            for (int64_t dz = -1; dz <= 1; ++dz) {
                const auto it = cells_.find({center.ix + dx, center.iy + dy, center.iz + dz});
                if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
            }
        }
    }
    return out;
}

bool VoxelMap::remove_exact(const Point3 &p) {
    const VoxelKey key = key_of(p, config_.voxel_size);
    const auto it = cells_.find(key);
    if (it == cells_.end()) return false;
    auto &cell = it->second;
    const auto pos = std::find_if(cell.begin(), cell.end(),
                                  [&](const MapPoint &mp) { return mp.position == p; });
    if (pos == cell.end()) return false;
    cell.erase(pos);
    --point_count_;
    if (cell.empty()) cells_.erase(it);
    return true;
}

std::vector<MapPoint> VoxelMap::export_points() const {
    std::vector<const decltype(cells_)::value_type *> ordered;
    ordered.reserve(cells_.size());
    for (const auto &entry : cells_) ordered.push_back(&entry);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto *a, const auto *b) { return a->first < b->first; });

    std::vector<MapPoint> out;
    out.reserve(point_count_);
    for (const auto *entry : ordered) {
        out.insert(out.end(), entry->second.begin(), entry->second.end());
    }
    return out;
}

void VoxelMap::clear() {
    cells_.clear();
    point_count_ = 0;
}

}  // namespace dynamap
