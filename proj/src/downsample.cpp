#include "dynamap/downsample.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dynamap/errors.hpp"
#include "dynamap/voxel_map.hpp"

namespace dynamap {

std::vector<LabeledPoint> voxel_downsample(const std::vector<LabeledPoint> &points, double cell) {
    if (cell <= 0.0) throw ConfigError("downsample cell must be > 0");

    struct Survivor {
        size_t index;
        double dist_sq;
    };
    std::unordered_map<VoxelKey, Survivor, VoxelKeyHash> survivors;
    survivors.reserve(points.size());

    for (size_t i = 0; i < points.size(); ++i) {
        const auto &p = points[i].position_sensor;
        const VoxelKey key = VoxelMap::key_of(p, cell);
        const Point3 center{(key.ix + 0.5) * cell, (key.iy + 0.5) * cell, (key.iz + 0.5) * cell};
        const double dist_sq = (p - center).squaredNorm();

        const auto it = survivors.find(key);
        if (it == survivors.end() || dist_sq < it->second.dist_sq) {
            survivors[key] = {i, dist_sq};
        }
    }

    std::vector<std::pair<VoxelKey, size_t>> ordered;
    ordered.reserve(survivors.size());
    for (const auto &[key, survivor] : survivors) ordered.emplace_back(key, survivor.index);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    std::vector<LabeledPoint> out;
    out.reserve(ordered.size());
    for (const auto &[key, index] : ordered) out.push_back(points[index]);
    return out;
}

}  // namespace dynamap
