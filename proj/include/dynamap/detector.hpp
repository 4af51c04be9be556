#pragma once

#include <cstdint>
#include <vector>

#include "dynamap/point_types.hpp"
#include "dynamap/voxel_map.hpp"

namespace dynamap {

/// How the neighbor-label ratio is turned into a verdict once a point has
/// enough neighbors.
///
/// `Literal`: a point is static when the fraction of non-ground neighbors is
/// below the threshold, dynamic otherwise. Read strictly, this rejects a
/// re-observed static wall (all neighbors non-ground).
///
/// `Reconciled`: a non-ground point whose voxel is already dominated by
/// non-ground structure coincides with existing static geometry and is kept;
/// the dynamic verdict fires only when ground labels dominate the neighbor
/// set, i.e. the point hovers over reconstructed ground where no structure
/// has ever been.
enum class RatioRule : uint8_t { Literal, Reconciled };

struct DetectorConfig {
    double fore_back_threshold = 30.0;
    int min_neighbors = 5;
    double nonground_ratio_threshold = 0.30;
    double ground_ratio_cutoff = 0.70;
    int undetermined_max_far_sweeps = 10;
    RatioRule ratio_rule = RatioRule::Reconciled;
    // Remove a tracking-map point inserted at undetermined birth if the entry
    // later resolves dynamic. Off by default; the stale point is sparse
    // enough not to matter and this switch exists for the ablation.
    bool rollback_tracking = false;
};

void validate(const DetectorConfig &config);

enum class VerdictReason : uint8_t {
    NoNeighbors,
    RatioLow,
    RatioHigh,
    BackNoNeighbors,
    TimeoutStatic,
};

struct Verdict {
    PointClass verdict = PointClass::Static;
    VerdictReason reason = VerdictReason::RatioLow;

    bool operator==(const Verdict &other) const = default;
};

enum class Region : uint8_t { Fore, Back };

/// A deferred back-point: world position frozen at birth plus the count of
/// consecutive sweeps spent beyond the fore/back threshold.
struct UndeterminedEntry {
    Point3 position_world = Point3::Zero();
    int far_sweep_count = 0;
    int64_t birth_sweep = 0;
    // Whether the birth insertion into the tracking-map actually stored the
    // point (needed to roll it back correctly).
    bool stored_in_tracking = false;
    // Opaque handle the pipeline uses to finish the point's verdict record.
    int64_t record_id = -1;
};

/// Fore iff the point lies within the threshold distance of the platform
/// (boundary inclusive).
Region separate(const Point3 &p_world, const Point3 &platform_position, const DetectorConfig &config);

/// Mode for fore-points: too few neighbors means the location was never
/// occupied -> dynamic; otherwise the ratio rule decides.
Verdict classify_fore(const std::vector<MapPoint> &neighbors, const DetectorConfig &config);

/// Mode for back-points: too few neighbors is inconclusive (the area may
/// simply not be reconstructed yet) -> undetermined; otherwise as fore.
Verdict classify_back(const std::vector<MapPoint> &neighbors, const DetectorConfig &config);

struct ResolvedEntry {
    UndeterminedEntry entry;
    Verdict verdict;
};

/// Mode for undetermined-points, run once per sweep after the map update.
/// Entries now within the threshold are decided against the tracking-map and
/// removed; entries still far accumulate their counter and time out static
/// after undetermined_max_far_sweeps consecutive far sweeps. Unresolved
/// entries stay in the container with their order preserved.
std::vector<ResolvedEntry> resolve_undetermined(std::vector<UndeterminedEntry> &container,
                                                const Point3 &platform_position,
                                                const VoxelMap &tracking_map,
                                                const DetectorConfig &config);

}  // namespace dynamap
