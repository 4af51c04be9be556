#include "dynamap/ground_segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dynamap/errors.hpp"

namespace dynamap {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

int resolve_ground_rows(const GroundSegConfig &config) {
    if (config.ground_rows > 0) return std::min(config.ground_rows, config.rows);
    const double span = config.vfov_max_deg - config.vfov_min_deg;
    int below_horizon = 0;
    for (int r = 0; r < config.rows; ++r) {
        const double center = config.vfov_min_deg + (r + 0.5) * span / config.rows;
        if (center < 0.0) ++below_horizon;
    }
    return std::min(config.rows / 2, below_horizon);
}

RangeImage::RangeImage(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      cells_(static_cast<size_t>(rows) * cols, -1),
      ranges_(static_cast<size_t>(rows) * cols, std::numeric_limits<float>::max()) {}

void RangeImage::assign(int row, int col, int32_t point_index, float range) {
    const size_t i = static_cast<size_t>(row) * cols_ + col;
    if (range < ranges_[i]) {
        ranges_[i] = range;
        cells_[i] = point_index;
    }
}

RangeImage project(Sweep &sweep, const GroundSegConfig &config) {
    if (config.rows < 2 || config.cols < 8) {
        throw ConfigError("range image needs rows >= 2 and cols >= 8");
    }
    const bool have_rings = std::all_of(sweep.points.begin(), sweep.points.end(),
                                        [](const LabeledPoint &p) { return p.ring >= 0; });
    const double span = config.vfov_max_deg - config.vfov_min_deg;
    if (!have_rings && span <= 0.0) {
        throw ConfigError("degenerate vertical FOV and no ring field to fall back on");
    }

    RangeImage image(config.rows, config.cols);
    for (size_t i = 0; i < sweep.points.size(); ++i) {
        auto &point = sweep.points[i];
        const auto &p = point.position_sensor;

        int row = point.ring;
        if (row < 0) {
            const double vertical_deg = std::atan2(p.z(), std::hypot(p.x(), p.y())) * kRadToDeg;
            row = static_cast<int>(std::floor((vertical_deg - config.vfov_min_deg) / span * config.rows));
            if (row < 0 || row >= config.rows) continue;
            point.ring = row;
        }
        if (row >= config.rows) continue;

        const double azimuth = std::atan2(p.y(), p.x());
        int col = static_cast<int>(std::floor((azimuth + std::numbers::pi) /
                                              (2.0 * std::numbers::pi) * config.cols));
        col = std::clamp(col, 0, config.cols - 1);

        image.assign(row, col, static_cast<int32_t>(i), static_cast<float>(point.range));
    }
    return image;
}

void fit_ground(Sweep &sweep, const RangeImage &image, const GroundSegConfig &config) {
    for (auto &point : sweep.points) point.ground_label = GroundLabel::NonGround;

    const int ground_rows = resolve_ground_rows(config);
    const double threshold_deg = config.angle_threshold_deg;

    for (int col = 0; col < image.cols(); ++col) {
        for (int row = 0; row + 1 < image.rows() && row < ground_rows; ++row) {
            if (!image.occupied(row, col) || !image.occupied(row + 1, col)) continue;

            const auto &lower = sweep.points[image.index_at(row, col)].position_sensor;
            const auto &upper = sweep.points[image.index_at(row + 1, col)].position_sensor;
            const Eigen::Vector3d diff = upper - lower;
            const double angle_deg = std::atan2(diff.z(), std::hypot(diff.x(), diff.y())) * kRadToDeg;

            if (std::abs(angle_deg) <= threshold_deg) {
                sweep.points[image.index_at(row, col)].ground_label = GroundLabel::Ground;
                sweep.points[image.index_at(row + 1, col)].ground_label = GroundLabel::Ground;
            }
        }
    }
}

void segment_ground(Sweep &sweep, const GroundSegConfig &config) {
    const RangeImage image = project(sweep, config);
    fit_ground(sweep, image, config);
}

}  // namespace dynamap
