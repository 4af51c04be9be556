#include "dynamap/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "dynamap/errors.hpp"

namespace dynamap {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

void validate(const PipelineConfig &config) {
    if (config.min_range < 0.0) throw ConfigError("min_range must be >= 0");
    if (config.downsample_cell <= 0.0) throw ConfigError("downsample cell must be > 0");
    validate(config.detector);
    // VoxelMap constructor validates the per-map parameters.
    VoxelMap probe_tracking(config.tracking_map);
    VoxelMap probe_output(config.output_map);
    if (config.ground_seg.rows < 2 || config.ground_seg.cols < 8) {
        throw ConfigError("ground_seg needs rows >= 2 and cols >= 8");
    }
    if (config.ground_seg.angle_threshold_deg <= 0.0 || config.ground_seg.angle_threshold_deg >= 45.0) {
        throw ConfigError("ground_seg angle_threshold_deg must be in (0, 45)");
    }
    if (!is_valid_pose(config.extrinsic)) throw ConfigError("extrinsic pose is not a valid SE(3) transform");
}

RecordReason to_record_reason(VerdictReason reason) {
    switch (reason) {
        case VerdictReason::NoNeighbors: return RecordReason::NoNeighbors;
        case VerdictReason::RatioLow: return RecordReason::RatioLow;
        case VerdictReason::RatioHigh: return RecordReason::RatioHigh;
        case VerdictReason::BackNoNeighbors: return RecordReason::BackNoNeighbors;
        case VerdictReason::TimeoutStatic: return RecordReason::TimeoutStatic;
    }
    return RecordReason::RatioLow;
}

const char *to_string(RecordReason reason) {
    switch (reason) {
        case RecordReason::Ground: return "ground";
        case RecordReason::Bootstrap: return "bootstrap";
        case RecordReason::NoNeighbors: return "no_neighbors";
        case RecordReason::RatioLow: return "ratio_low";
        case RecordReason::RatioHigh: return "ratio_high";
        case RecordReason::BackNoNeighbors: return "back_no_neighbors";
        case RecordReason::TimeoutStatic: return "timeout_static";
        case RecordReason::EndOfSequence: return "end_of_sequence";
    }
    return "?";
}

const char *to_string(PointClass c) {
    switch (c) {
        case PointClass::Static: return "static";
        case PointClass::Dynamic: return "dynamic";
        case PointClass::Undetermined: return "undetermined";
    }
    return "?";
}

PipelineState::PipelineState(const PipelineConfig &config)
    : tracking_map(config.tracking_map), output_map(config.output_map) {}

SweepReport process_sweep(const Sweep &sweep, const PipelineConfig &config, PipelineState &state) {
    const auto sweep_start = Clock::now();

    if (sweep.index <= state.last_index) {
        throw OrderError("sweep " + std::to_string(sweep.index) +
                         " arrived after sweep " + std::to_string(state.last_index));
    }
    if (!is_valid_pose(sweep.pose_world_lidar)) {
        throw PoseError("sweep " + std::to_string(sweep.index) + " carries an invalid pose");
    }
    state.last_index = sweep.index;

    SweepReport report;
    report.sweep = sweep.index;

    // Input validation: drop non-finite returns and self-returns.
    auto t = Clock::now();
    Sweep working;
    working.index = sweep.index;
    working.pose_world_lidar = sweep.pose_world_lidar;
    working.points.reserve(sweep.points.size());
    for (const auto &point : sweep.points) {
        if (!point.position_sensor.allFinite()) continue;
        LabeledPoint p = point;
        p.range = p.position_sensor.norm();
        if (p.range < config.min_range) continue;
        working.points.push_back(p);
    }
    report.timings.cloud_processing_ms += elapsed_ms(t);

    t = Clock::now();
    segment_ground(working, config.ground_seg);
    report.timings.ground_fitting_ms = elapsed_ms(t);

    t = Clock::now();
    std::vector<LabeledPoint> points = voxel_downsample(working.points, config.downsample_cell);
    for (auto &point : points) {
        point.position_world = transform_point(point.position_sensor, sweep.pose_world_lidar);
    }
    report.timings.cloud_processing_ms += elapsed_ms(t);

    report.counts.processed = static_cast<int64_t>(points.size());
    const Point3 platform = sweep.pose_world_lidar.translation;
    const bool bootstrap = state.tracking_map.point_count() < config.bootstrap_min_map_points;

    const auto emit = [&](const LabeledPoint &point, PointClass verdict, RecordReason reason) {
        if (!state.record_sink) return;
        state.record_sink({sweep.index, point.source_index, point.ground_label == GroundLabel::Ground,
                           verdict, reason, point.gt_dynamic});
    };

    if (bootstrap) {
        // Nothing to check labels against yet; accept the whole sweep.
        t = Clock::now();
        for (const auto &point : points) {
            state.tracking_map.insert(point.position_world, point.ground_label);
            state.output_map.insert(point.position_world, point.ground_label);
            if (point.ground_label == GroundLabel::Ground) {
                ++report.counts.ground;
                emit(point, PointClass::Static, RecordReason::Ground);
            } else {
                ++report.counts.static_points;
                emit(point, PointClass::Static, RecordReason::Bootstrap);
            }
        }
        report.timings.map_update_ms = elapsed_ms(t);
    } else {
        // Ground points go straight into both maps.
        t = Clock::now();
        for (const auto &point : points) {
            if (point.ground_label != GroundLabel::Ground) continue;
            state.tracking_map.insert(point.position_world, GroundLabel::Ground);
            state.output_map.insert(point.position_world, GroundLabel::Ground);
            ++report.counts.ground;
            emit(point, PointClass::Static, RecordReason::Ground);
        }
        report.timings.map_update_ms += elapsed_ms(t);

        // Classification phase: tracking-map is read-only here.
        t = Clock::now();
        std::vector<Verdict> verdicts(points.size());
        for (size_t i = 0; i < points.size(); ++i) {
            const auto &point = points[i];
            if (point.ground_label == GroundLabel::Ground) continue;
            const auto neighbors = state.tracking_map.neighbors_in_voxel(point.position_world);
            verdicts[i] = separate(point.position_world, platform, config.detector) == Region::Fore
                              ? classify_fore(neighbors, config.detector)
                              : classify_back(neighbors, config.detector);
        }
        report.timings.detection_ms += elapsed_ms(t);

        // Apply verdicts.
        t = Clock::now();
        for (size_t i = 0; i < points.size(); ++i) {
            const auto &point = points[i];
            if (point.ground_label == GroundLabel::Ground) continue;
            switch (verdicts[i].verdict) {
                case PointClass::Static:
                    state.tracking_map.insert(point.position_world, GroundLabel::NonGround);
                    state.output_map.insert(point.position_world, GroundLabel::NonGround);
                    ++report.counts.static_points;
                    emit(point, PointClass::Static, to_record_reason(verdicts[i].reason));
                    break;
                case PointClass::Dynamic:
                    ++report.counts.dynamic_points;
                    emit(point, PointClass::Dynamic, to_record_reason(verdicts[i].reason));
                    break;
                case PointClass::Undetermined: {
                    UndeterminedEntry entry;
                    entry.position_world = point.position_world;
                    entry.birth_sweep = sweep.index;
                    // Undetermined points still feed registration, so they
                    // enter the tracking-map at birth.
                    entry.stored_in_tracking =
                        state.tracking_map.insert(point.position_world, GroundLabel::NonGround);
                    if (state.record_sink) {
                        entry.record_id = state.next_record_id++;
                        state.pending_records[entry.record_id] = {
                            sweep.index, point.source_index, false,
                            PointClass::Undetermined, RecordReason::BackNoNeighbors,
                            point.gt_dynamic};
                    }
                    state.container.push_back(entry);
                    ++report.counts.undetermined_born;
                    break;
                }
            }
        }
        report.timings.map_update_ms += elapsed_ms(t);
    }

    // Undetermined resolution runs after the sweep's map update.
    t = Clock::now();
    const auto resolved =
        resolve_undetermined(state.container, platform, state.tracking_map, config.detector);
    for (const auto &item : resolved) {
        ++report.counts.undetermined_resolved;
        if (item.verdict.verdict == PointClass::Static) {
            state.output_map.insert(item.entry.position_world, GroundLabel::NonGround);
        } else if (config.detector.rollback_tracking && item.entry.stored_in_tracking) {
            state.tracking_map.remove_exact(item.entry.position_world);
        }
        if (state.record_sink && item.entry.record_id >= 0) {
            auto pending = state.pending_records.find(item.entry.record_id);
            if (pending != state.pending_records.end()) {
                PointRecord record = pending->second;
                record.verdict = item.verdict.verdict;
                record.reason = to_record_reason(item.verdict.reason);
                state.record_sink(record);
                state.pending_records.erase(pending);
            }
        }
    }
    report.timings.detection_ms += elapsed_ms(t);

    report.timings.total_ms = elapsed_ms(sweep_start);
    return report;
}

void finalize(PipelineState &state) {
    if (!state.record_sink) {
        state.pending_records.clear();
        return;
    }
    // Deterministic emission order for whatever never resolved.
    for (const auto &entry : state.container) {
        const auto pending = state.pending_records.find(entry.record_id);
        if (pending == state.pending_records.end()) continue;
        PointRecord record = pending->second;
        record.verdict = PointClass::Undetermined;
        record.reason = RecordReason::EndOfSequence;
        state.record_sink(record);
        state.pending_records.erase(entry.record_id);
    }
    state.pending_records.clear();
}

}  // namespace dynamap
