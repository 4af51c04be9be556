#include "dynamap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "dynamap/dataio.hpp"
#include "dynamap/errors.hpp"
#include "json_util.hpp"

namespace dynamap {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

Pose SceneSpec::platform_pose(int64_t sweep_index) const {
    if (!trajectory_poses.empty()) {
        if (sweep_index < 0 || sweep_index >= static_cast<int64_t>(trajectory_poses.size())) {
            throw ConfigError("trajectory has no pose for sweep " + std::to_string(sweep_index));
        }
        return trajectory_poses[static_cast<size_t>(sweep_index)];
    }
    Pose pose;
    pose.translation = *straight_start + static_cast<double>(sweep_index) * straight_step_per_sweep;
    return pose;
}

void validate(const SceneSpec &spec) {
    const auto &s = spec.sensor;
    if (s.rings < 2 || s.azimuth_bins < 8) throw ConfigError("sensor needs rings >= 2 and azimuth_bins >= 8");
    if (s.vfov_min_deg >= s.vfov_max_deg) throw ConfigError("sensor vertical FOV is degenerate");
    if (s.max_range <= 0.0) throw ConfigError("sensor max_range must be > 0");
    if (s.rate_hz <= 0.0) throw ConfigError("sensor rate_hz must be > 0");
    if (s.range_jitter_sigma < 0.0) throw ConfigError("range_jitter_sigma must be >= 0");
    if (spec.trajectory_poses.empty() && !spec.straight_start) {
        throw ConfigError("scene needs a trajectory (explicit poses or a straight line)");
    }
    for (const auto &box : spec.static_boxes) {
        if ((box.size.array() <= 0.0).any()) throw ConfigError("static box with non-positive size");
    }
    for (const auto &dyn : spec.dynamic_boxes) {
        if ((dyn.box.size.array() <= 0.0).any()) throw ConfigError("dynamic box with non-positive size");
        const double bottom = dyn.box.center.z() - 0.5 * dyn.box.size.z();
        if (std::abs(bottom - spec.ground_height) > 1e-6) {
            throw ConfigError("dynamic box must rest on the ground plane (bottom at z = ground_height)");
        }
        if (std::abs(dyn.velocity.z()) > 1e-12) {
            throw ConfigError("dynamic box velocity must stay parallel to the ground");
        }
    }
}

namespace {

using detail::get_or;
using detail::json;
using detail::require_keys;

Point3 parse_vec3(const json &node, const std::string &path) {
    if (!node.is_array() || node.size() != 3) throw ConfigError(path + " must be a 3-element array");
    return {node[0].get<double>(), node[1].get<double>(), node[2].get<double>()};
}

Box parse_box(const json &node, const std::string &path) {
    require_keys(node, path, {"center", "size"});
    Box box;
    if (!node.contains("center") || !node.contains("size")) {
        throw ConfigError(path + " needs 'center' and 'size'");
    }
    box.center = parse_vec3(node.at("center"), path + ".center");
    box.size = parse_vec3(node.at("size"), path + ".size");
    return box;
}

}  // namespace

SceneSpec parse_scene(const std::string &json_text) {
    const json root = detail::parse_text(json_text, "scene");
    require_keys(root, "scene",
                 {"ground_height", "static_boxes", "dynamic_boxes", "sensor", "trajectory"});

    SceneSpec spec;
    spec.ground_height = get_or(root, "ground_height", "scene", spec.ground_height);

    if (root.contains("static_boxes")) {
        int i = 0;
        for (const auto &node : root.at("static_boxes")) {
            spec.static_boxes.push_back(parse_box(node, "static_boxes[" + std::to_string(i++) + "]"));
        }
    }
    if (root.contains("dynamic_boxes")) {
        int i = 0;
        for (const auto &node : root.at("dynamic_boxes")) {
            const std::string path = "dynamic_boxes[" + std::to_string(i++) + "]";
            require_keys(node, path, {"center", "size", "velocity"});
            DynamicBox dyn;
            dyn.box = parse_box(json{{"center", node.at("center")}, {"size", node.at("size")}}, path);
            if (node.contains("velocity")) dyn.velocity = parse_vec3(node.at("velocity"), path + ".velocity");
            spec.dynamic_boxes.push_back(dyn);
        }
    }

    if (root.contains("sensor")) {
        const auto &node = root.at("sensor");
        require_keys(node, "sensor",
                     {"rings", "vfov_min_deg", "vfov_max_deg", "azimuth_bins", "max_range", "rate_hz",
                      "range_jitter_sigma", "seed"});
        auto &s = spec.sensor;
        s.rings = get_or(node, "rings", "sensor", s.rings);
        s.vfov_min_deg = get_or(node, "vfov_min_deg", "sensor", s.vfov_min_deg);
        s.vfov_max_deg = get_or(node, "vfov_max_deg", "sensor", s.vfov_max_deg);
        s.azimuth_bins = get_or(node, "azimuth_bins", "sensor", s.azimuth_bins);
        s.max_range = get_or(node, "max_range", "sensor", s.max_range);
        s.rate_hz = get_or(node, "rate_hz", "sensor", s.rate_hz);
        s.range_jitter_sigma = get_or(node, "range_jitter_sigma", "sensor", s.range_jitter_sigma);
        s.seed = get_or(node, "seed", "sensor", s.seed);
    }

    if (root.contains("trajectory")) {
        const auto &node = root.at("trajectory");
        require_keys(node, "trajectory", {"type", "start", "step_per_sweep", "poses"});
        const auto type = get_or<std::string>(node, "type", "trajectory", "straight");
        if (type == "straight") {
            if (!node.contains("start")) throw ConfigError("trajectory.start is required");
            spec.straight_start = parse_vec3(node.at("start"), "trajectory.start");
            if (node.contains("step_per_sweep")) {
                spec.straight_step_per_sweep =
                    parse_vec3(node.at("step_per_sweep"), "trajectory.step_per_sweep");
            }
        } else if (type == "poses") {
            if (!node.contains("poses")) throw ConfigError("trajectory.poses is required");
            int i = 0;
            for (const auto &pose_node : node.at("poses")) {
                const std::string path = "trajectory.poses[" + std::to_string(i++) + "]";
                require_keys(pose_node, path, {"rotation", "translation"});
                Pose pose;
                if (pose_node.contains("rotation")) {
                    const auto values = pose_node.at("rotation").get<std::vector<double>>();
                    if (values.size() != 9) throw ConfigError(path + ".rotation must hold 9 values");
                    for (int r = 0; r < 3; ++r)
                        for (int c = 0; c < 3; ++c) pose.rotation(r, c) = values[r * 3 + c];
                    pose.rotation = orthonormalized(pose.rotation);
                }
                if (pose_node.contains("translation")) {
                    pose.translation = parse_vec3(pose_node.at("translation"), path + ".translation");
                }
                spec.trajectory_poses.push_back(pose);
            }
        } else {
            throw ConfigError("trajectory.type must be 'straight' or 'poses'");
        }
    }

    validate(spec);
    return spec;
}

SceneSpec load_scene(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scene(buffer.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::optional<double> intersect_ray_plane(const Point3 &origin, const Point3 &dir, double plane_z) {
    if (std::abs(dir.z()) < 1e-12) return std::nullopt;
    const double t = (plane_z - origin.z()) / dir.z();
    if (t <= 1e-9) return std::nullopt;
    return t;
}

std::optional<double> intersect_ray_box(const Point3 &origin, const Point3 &dir, const Box &box) {
    const Point3 lo = box.min_corner();
    const Point3 hi = box.max_corner();
    double t_enter = -std::numeric_limits<double>::infinity();
    double t_exit = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
        if (std::abs(dir(axis)) < 1e-12) {
            if (origin(axis) < lo(axis) || origin(axis) > hi(axis)) return std::nullopt;
            continue;
        }
        double t0 = (lo(axis) - origin(axis)) / dir(axis);
        double t1 = (hi(axis) - origin(axis)) / dir(axis);
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit) return std::nullopt;
    }
    // Origin inside the box hits the exit face; from outside, the entry face.
    const double t = t_enter > 1e-9 ? t_enter : t_exit;
    if (t <= 1e-9) return std::nullopt;
    return t;
}

Sweep raycast_sweep(const SceneSpec &spec, int64_t sweep_index) {
    validate(spec);
    const auto &sensor = spec.sensor;
    const Pose pose = spec.platform_pose(sweep_index);
    const double time_s = static_cast<double>(sweep_index) / sensor.rate_hz;

    std::vector<Box> moved_boxes;
    moved_boxes.reserve(spec.dynamic_boxes.size());
    std::vector<bool> box_moving;
    for (const auto &dyn : spec.dynamic_boxes) {
        moved_boxes.push_back(dyn.at_time(time_s));
        box_moving.push_back(dyn.velocity.norm() > 0.0);
    }

    std::mt19937_64 rng(sensor.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(sweep_index + 1)));
    std::normal_distribution<double> jitter(0.0, sensor.range_jitter_sigma);

    Sweep sweep;
    sweep.index = sweep_index;
    sweep.pose_world_lidar = pose;
    sweep.points.reserve(static_cast<size_t>(sensor.rings) * sensor.azimuth_bins);

    const double vfov_span = sensor.vfov_max_deg - sensor.vfov_min_deg;
    for (int ring = 0; ring < sensor.rings; ++ring) {
        const double vertical = (sensor.vfov_min_deg + (ring + 0.5) * vfov_span / sensor.rings) * kDegToRad;
        const double cos_v = std::cos(vertical);
        const double sin_v = std::sin(vertical);
        for (int bin = 0; bin < sensor.azimuth_bins; ++bin) {
            const double azimuth =
                -std::numbers::pi + (bin + 0.5) * 2.0 * std::numbers::pi / sensor.azimuth_bins;
            const Point3 dir_sensor{cos_v * std::cos(azimuth), cos_v * std::sin(azimuth), sin_v};
            const Point3 dir_world = pose.rotation * dir_sensor;

            double best_t = std::numeric_limits<double>::infinity();
            int8_t gt = 0;
            if (const auto t = intersect_ray_plane(pose.translation, dir_world, spec.ground_height)) {
                best_t = *t;
            }
            for (const auto &box : spec.static_boxes) {
                if (const auto t = intersect_ray_box(pose.translation, dir_world, box); t && *t < best_t) {
                    best_t = *t;
                    gt = 0;
                }
            }
            for (size_t b = 0; b < moved_boxes.size(); ++b) {
                if (const auto t = intersect_ray_box(pose.translation, dir_world, moved_boxes[b]);
                    t && *t < best_t) {
                    best_t = *t;
                    gt = box_moving[b] ? 1 : 0;
                }
            }

            if (!std::isfinite(best_t)) continue;
            double range = best_t;
            if (sensor.range_jitter_sigma > 0.0) range = std::max(0.05, range + jitter(rng));
            if (range > sensor.max_range) continue;

            LabeledPoint point;
            point.position_sensor = dir_sensor * range;
            point.ring = ring;
            point.range = range;
            point.gt_dynamic = gt;
            point.source_index = static_cast<int32_t>(sweep.points.size());
            sweep.points.push_back(point);
        }
    }
    return sweep;
}

void emit_dataset(const SceneSpec &spec, int64_t sweeps, const std::string &out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "velodyne", ec);
    fs::create_directories(fs::path(out_dir) / "labels", ec);
    if (ec) throw IoError("cannot create dataset directories under " + out_dir);

    std::vector<Pose> poses;
    poses.reserve(static_cast<size_t>(sweeps));
    for (int64_t i = 0; i < sweeps; ++i) {
        const Sweep sweep = raycast_sweep(spec, i);
        poses.push_back(sweep.pose_world_lidar);

        std::vector<RawPoint> raw;
        std::vector<uint32_t> labels;
        raw.reserve(sweep.points.size());
        labels.reserve(sweep.points.size());
        for (const auto &point : sweep.points) {
            raw.push_back({static_cast<float>(point.position_sensor.x()),
                           static_cast<float>(point.position_sensor.y()),
                           static_cast<float>(point.position_sensor.z()), 0.0f});
            uint32_t label = 50;  // building
            if (point.gt_dynamic == 1) {
                label = 252;  // moving-car
            } else if (std::abs(transform_point(point.position_sensor, sweep.pose_world_lidar).z() -
                                spec.ground_height) < 1e-6) {
                label = 40;  // road
            }
            labels.push_back(label);
        }

        char name[16];
        std::snprintf(name, sizeof(name), "%06lld", static_cast<long long>(i));
        write_kitti_bin((fs::path(out_dir) / "velodyne" / (std::string(name) + ".bin")).string(), raw);
        write_semantic_labels((fs::path(out_dir) / "labels" / (std::string(name) + ".label")).string(),
                              labels);
    }
    write_poses_kitti((fs::path(out_dir) / "poses.txt").string(), poses);
}

}  // namespace dynamap
