#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "dynamap/detector.hpp"
#include "dynamap/downsample.hpp"
#include "dynamap/ground_segmentation.hpp"
#include "dynamap/point_types.hpp"
#include "dynamap/voxel_map.hpp"

namespace dynamap {

struct PipelineConfig {
    GroundSegConfig ground_seg;
    // Returns closer than this are dropped during input validation
    // (self-returns from the ego vehicle).
    double min_range = 0.5;
    double downsample_cell = 0.5;
    VoxelMapConfig tracking_map;
    VoxelMapConfig output_map;
    DetectorConfig detector;
    // While the tracking-map holds fewer points than this, the scene is not
    // reconstructed enough for label-consistency checks to mean anything and
    // every point is accepted as static.
    size_t bootstrap_min_map_points = 10000;
    // LiDAR -> body transform, composed into dataset poses that are given in
    // the body frame. Identity when poses are already LiDAR-frame.
    Pose extrinsic;
};

void validate(const PipelineConfig &config);

struct SweepCounts {
    int64_t processed = 0;
    int64_t ground = 0;
    int64_t static_points = 0;
    int64_t dynamic_points = 0;
    int64_t undetermined_born = 0;
    int64_t undetermined_resolved = 0;
};

struct SweepTimings {
    double cloud_processing_ms = 0.0;
    double ground_fitting_ms = 0.0;
    double detection_ms = 0.0;
    double map_update_ms = 0.0;
    double total_ms = 0.0;
};

struct SweepReport {
    int64_t sweep = 0;
    SweepCounts counts;
    SweepTimings timings;
};

/// Why a point ended up with its final class. Extends the detector's verdict
/// reasons with the pipeline-level paths that bypass classification.
enum class RecordReason : uint8_t {
    Ground,
    Bootstrap,
    NoNeighbors,
    RatioLow,
    RatioHigh,
    BackNoNeighbors,
    TimeoutStatic,
    EndOfSequence,
};

RecordReason to_record_reason(VerdictReason reason);
const char *to_string(RecordReason reason);
const char *to_string(PointClass c);

/// Final per-point outcome, one per processed point. Points deferred as
/// undetermined are emitted once resolved (or at finalize time); everything
/// else streams out during its own sweep.
struct PointRecord {
    int64_t sweep = 0;
    int32_t source_index = -1;
    bool ground = false;
    PointClass verdict = PointClass::Static;
    RecordReason reason = RecordReason::Ground;
    int8_t gt_dynamic = -1;  // -1 unknown, 0 static, 1 dynamic
};

using RecordSink = std::function<void(const PointRecord &)>;

/// Mutable cross-sweep state: both global maps, the undetermined container,
/// and the bookkeeping for deferred verdict records.
struct PipelineState {
    explicit PipelineState(const PipelineConfig &config);

    VoxelMap tracking_map;
    VoxelMap output_map;
    std::vector<UndeterminedEntry> container;
    int64_t last_index = -1;

    // Optional: receives every finished PointRecord. Leave empty to skip
    // record bookkeeping entirely.
    RecordSink record_sink;

    std::unordered_map<int64_t, PointRecord> pending_records;
    int64_t next_record_id = 0;
};

/// Runs one sweep through the full per-sweep sequence: ground labeling,
/// downsampling, world transform, fore/back separation, label-consistency
/// classification, map updates, and undetermined resolution.
SweepReport process_sweep(const Sweep &sweep, const PipelineConfig &config, PipelineState &state);

/// Emits records for entries still undetermined at end of sequence.
void finalize(PipelineState &state);

}  // namespace dynamap
