#include "dynamap/detector.hpp"

#include <algorithm>

#include "dynamap/errors.hpp"

namespace dynamap {

void validate(const DetectorConfig &config) {
    if (config.fore_back_threshold <= 0.0) throw ConfigError("fore_back_threshold must be > 0");
    if (config.min_neighbors < 1) throw ConfigError("min_neighbors must be >= 1");
    if (config.nonground_ratio_threshold <= 0.0 || config.nonground_ratio_threshold >= 1.0) {
        throw ConfigError("nonground_ratio_threshold must be in (0, 1)");
    }
    if (config.ground_ratio_cutoff < 0.0 || config.ground_ratio_cutoff > 1.0) {
        throw ConfigError("ground_ratio_cutoff must be in [0, 1]");
    }
    if (config.undetermined_max_far_sweeps < 1) {
        throw ConfigError("undetermined_max_far_sweeps must be >= 1");
    }
}

Region separate(const Point3 &p_world, const Point3 &platform_position, const DetectorConfig &config) {
    const double dist = (p_world - platform_position).norm();
    return dist <= config.fore_back_threshold ? Region::Fore : Region::Back;
}

namespace {

// Ratio rule shared by all three modes once the neighbor set is big enough.
Verdict ratio_verdict(const std::vector<MapPoint> &neighbors, const DetectorConfig &config) {
    const double n = static_cast<double>(neighbors.size());
    const auto ground_count = static_cast<double>(
        std::count_if(neighbors.begin(), neighbors.end(),
                      [](const MapPoint &mp) { return mp.label == GroundLabel::Ground; }));

    if (config.ratio_rule == RatioRule::Literal) {
        const double nonground_ratio = (n - ground_count) / n;
        if (nonground_ratio < config.nonground_ratio_threshold) {
            return {PointClass::Static, VerdictReason::RatioLow};
        }
        return {PointClass::Dynamic, VerdictReason::RatioHigh};
    }

    const double ground_ratio = ground_count / n;
    if (ground_ratio < config.nonground_ratio_threshold ||
        ground_ratio <= config.ground_ratio_cutoff) {
        return {PointClass::Static, VerdictReason::RatioLow};
    }
    return {PointClass::Dynamic, VerdictReason::RatioHigh};
}

}  // namespace

Verdict classify_fore(const std::vector<MapPoint> &neighbors, const DetectorConfig &config) {
    if (static_cast<int>(neighbors.size()) < config.min_neighbors) {
        return {PointClass::Dynamic, VerdictReason::NoNeighbors};
    }
    return ratio_verdict(neighbors, config);
}

Verdict classify_back(const std::vector<MapPoint> &neighbors, const DetectorConfig &config) {
    if (static_cast<int>(neighbors.size()) < config.min_neighbors) {
        return {PointClass::Undetermined, VerdictReason::BackNoNeighbors};
    }
    return ratio_verdict(neighbors, config);
}

std::vector<ResolvedEntry> resolve_undetermined(std::vector<UndeterminedEntry> &container,
                                                const Point3 &platform_position,
                                                const VoxelMap &tracking_map,
                                                const DetectorConfig &config) {
    std::vector<ResolvedEntry> resolved;
    std::vector<UndeterminedEntry> kept;
    kept.reserve(container.size());

    for (auto &entry : container) {
        const double dist = (entry.position_world - platform_position).norm();
        if (dist <= config.fore_back_threshold) {
            // The surroundings should be reconstructed by now; decide as a
            // fore-point against the tracking-map.
            const auto neighbors = tracking_map.neighbors_in_voxel(entry.position_world);
            resolved.push_back({entry, classify_fore(neighbors, config)});
            continue;
        }
        entry.far_sweep_count += 1;
        if (entry.far_sweep_count >= config.undetermined_max_far_sweeps) {
            resolved.push_back({entry, {PointClass::Static, VerdictReason::TimeoutStatic}});
            continue;
        }
        kept.push_back(entry);
    }

    container = std::move(kept);
    return resolved;
}

}  // namespace dynamap
