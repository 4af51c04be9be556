#pragma once

#include <vector>

#include "dynamap/point_types.hpp"

namespace dynamap {

struct GroundSegConfig {
    int rows = 64;
    int cols = 1800;
    double vfov_min_deg = -24.9;
    double vfov_max_deg = 2.0;
    // Rows taking part in the inter-ring ground scan. 0 means auto:
    // min(rows / 2, number of rows whose center angle points below horizon).
    int ground_rows = 0;
    double angle_threshold_deg = 10.0;
};

int resolve_ground_rows(const GroundSegConfig &config);

/// Range image over (ring, azimuth bin). Each cell keeps at most one point
/// index; on collision the nearer point wins.
class RangeImage {
public:
    RangeImage(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool occupied(int row, int col) const { return index_at(row, col) >= 0; }
    int32_t index_at(int row, int col) const { return cells_[static_cast<size_t>(row) * cols_ + col]; }
    float range_at(int row, int col) const { return ranges_[static_cast<size_t>(row) * cols_ + col]; }

    /// Claims the cell for `point_index` unless a nearer point already holds it.
    void assign(int row, int col, int32_t point_index, float range);

private:
    int rows_;
    int cols_;
    std::vector<int32_t> cells_;
    std::vector<float> ranges_;
};

/// Bins every point of the sweep into a range image by (ring, azimuth).
/// Points without a ring index are assigned rows by vertical-angle
/// quantization over the configured FOV; out-of-band points are skipped.
/// Writes the assigned ring back into the sweep's points.
RangeImage project(Sweep &sweep, const GroundSegConfig &config);

/// LeGO-LOAM-style column scan: for each azimuth column, adjacent ring pairs
/// inside the ground band whose inter-point elevation angle stays within the
/// threshold have both points labeled Ground. Everything else is NonGround.
void fit_ground(Sweep &sweep, const RangeImage &image, const GroundSegConfig &config);

/// project + fit_ground in one step.
void segment_ground(Sweep &sweep, const GroundSegConfig &config);

}  // namespace dynamap
