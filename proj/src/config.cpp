#include "dynamap/config.hpp"

#include <fstream>
#include <sstream>

#include "dynamap/errors.hpp"
#include "json_util.hpp"

namespace dynamap {

using detail::get_or;
using detail::json;
using detail::require_keys;

RatioRule parse_ratio_rule(const std::string &name) {
    if (name == "literal") return RatioRule::Literal;
    if (name == "reconciled") return RatioRule::Reconciled;
    throw ConfigError("ratio_rule must be 'literal' or 'reconciled', got '" + name + "'");
}

const char *to_string(RatioRule rule) {
    return rule == RatioRule::Literal ? "literal" : "reconciled";
}

namespace {

GroundSegConfig parse_ground_seg(const json &node, const std::string &path) {
    require_keys(node, path,
                 {"rows", "cols", "vfov_min_deg", "vfov_max_deg", "ground_rows", "angle_threshold_deg"});
    GroundSegConfig cfg;
    cfg.rows = get_or(node, "rows", path, cfg.rows);
    cfg.cols = get_or(node, "cols", path, cfg.cols);
    cfg.vfov_min_deg = get_or(node, "vfov_min_deg", path, cfg.vfov_min_deg);
    cfg.vfov_max_deg = get_or(node, "vfov_max_deg", path, cfg.vfov_max_deg);
    cfg.ground_rows = get_or(node, "ground_rows", path, cfg.ground_rows);
    cfg.angle_threshold_deg = get_or(node, "angle_threshold_deg", path, cfg.angle_threshold_deg);
    return cfg;
}

VoxelMapConfig parse_voxel_map(const json &node, const std::string &path) {
    require_keys(node, path, {"voxel_size", "max_points_per_voxel", "min_point_spacing", "search_adjacent"});
    VoxelMapConfig cfg;
    cfg.voxel_size = get_or(node, "voxel_size", path, cfg.voxel_size);
    cfg.max_points_per_voxel = get_or(node, "max_points_per_voxel", path, cfg.max_points_per_voxel);
    cfg.min_point_spacing = get_or(node, "min_point_spacing", path, cfg.min_point_spacing);
    cfg.search_adjacent = get_or(node, "search_adjacent", path, cfg.search_adjacent);
    return cfg;
}

DetectorConfig parse_detector(const json &node, const std::string &path) {
    require_keys(node, path,
                 {"fore_back_threshold", "min_neighbors", "nonground_ratio_threshold",
                  "ground_ratio_cutoff", "undetermined_max_far_sweeps", "ratio_rule",
                  "rollback_tracking"});
    DetectorConfig cfg;
    cfg.fore_back_threshold = get_or(node, "fore_back_threshold", path, cfg.fore_back_threshold);
    cfg.min_neighbors = get_or(node, "min_neighbors", path, cfg.min_neighbors);
    cfg.nonground_ratio_threshold =
        get_or(node, "nonground_ratio_threshold", path, cfg.nonground_ratio_threshold);
    cfg.ground_ratio_cutoff = get_or(node, "ground_ratio_cutoff", path, cfg.ground_ratio_cutoff);
    cfg.undetermined_max_far_sweeps =
        get_or(node, "undetermined_max_far_sweeps", path, cfg.undetermined_max_far_sweeps);
    cfg.ratio_rule = parse_ratio_rule(get_or<std::string>(node, "ratio_rule", path, to_string(cfg.ratio_rule)));
    cfg.rollback_tracking = get_or(node, "rollback_tracking", path, cfg.rollback_tracking);
    return cfg;
}

Pose parse_extrinsic(const json &node, const std::string &path) {
    require_keys(node, path, {"rotation", "translation"});
    Pose pose;
    if (node.contains("rotation")) {
        const auto values = node.at("rotation").get<std::vector<double>>();
        if (values.size() != 9) throw ConfigError(path + ".rotation must hold 9 row-major values");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) pose.rotation(r, c) = values[r * 3 + c];
        if (!is_valid_rotation(pose.rotation, 1e-3)) {
            throw ConfigError(path + ".rotation is not orthonormal with det +1");
        }
        pose.rotation = orthonormalized(pose.rotation);
    }
    if (node.contains("translation")) {
        const auto values = node.at("translation").get<std::vector<double>>();
        if (values.size() != 3) throw ConfigError(path + ".translation must hold 3 values");
        pose.translation = Point3(values[0], values[1], values[2]);
    }
    return pose;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string &json_text) {
    const json root = detail::parse_text(json_text, "config");
    require_keys(root, "config",
                 {"ground_seg", "min_range", "downsample", "tracking_map", "output_map", "detector",
                  "bootstrap_min_map_points", "extrinsic"});

    PipelineConfig cfg;
    if (root.contains("ground_seg")) cfg.ground_seg = parse_ground_seg(root.at("ground_seg"), "ground_seg");
    cfg.min_range = get_or(root, "min_range", "config", cfg.min_range);
    if (root.contains("downsample")) {
        require_keys(root.at("downsample"), "downsample", {"cell"});
        cfg.downsample_cell = get_or(root.at("downsample"), "cell", "downsample", cfg.downsample_cell);
    }
    if (root.contains("tracking_map")) cfg.tracking_map = parse_voxel_map(root.at("tracking_map"), "tracking_map");
    if (root.contains("output_map")) cfg.output_map = parse_voxel_map(root.at("output_map"), "output_map");
    if (root.contains("detector")) cfg.detector = parse_detector(root.at("detector"), "detector");
    cfg.bootstrap_min_map_points =
        get_or(root, "bootstrap_min_map_points", "config", cfg.bootstrap_min_map_points);
    if (root.contains("extrinsic")) cfg.extrinsic = parse_extrinsic(root.at("extrinsic"), "extrinsic");

    validate(cfg);
    return cfg;
}

PipelineConfig load_pipeline_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_pipeline_config(buffer.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string dump_pipeline_config(const PipelineConfig &config) {
    json root;
    root["ground_seg"] = {{"rows", config.ground_seg.rows},
                          {"cols", config.ground_seg.cols},
                          {"vfov_min_deg", config.ground_seg.vfov_min_deg},
                          {"vfov_max_deg", config.ground_seg.vfov_max_deg},
                          {"ground_rows", config.ground_seg.ground_rows},
                          {"angle_threshold_deg", config.ground_seg.angle_threshold_deg}};
    root["min_range"] = config.min_range;
    root["downsample"] = {{"cell", config.downsample_cell}};
    const auto map_json = [](const VoxelMapConfig &m) {
        return json{{"voxel_size", m.voxel_size},
                    {"max_points_per_voxel", m.max_points_per_voxel},
                    {"min_point_spacing", m.min_point_spacing},
                    {"search_adjacent", m.search_adjacent}};
    };
    root["tracking_map"] = map_json(config.tracking_map);
    root["output_map"] = map_json(config.output_map);
    root["detector"] = {{"fore_back_threshold", config.detector.fore_back_threshold},
                        {"min_neighbors", config.detector.min_neighbors},
                        {"nonground_ratio_threshold", config.detector.nonground_ratio_threshold},
                        {"ground_ratio_cutoff", config.detector.ground_ratio_cutoff},
                        {"undetermined_max_far_sweeps", config.detector.undetermined_max_far_sweeps},
                        {"ratio_rule", to_string(config.detector.ratio_rule)},
                        {"rollback_tracking", config.detector.rollback_tracking}};
    root["bootstrap_min_map_points"] = config.bootstrap_min_map_points;
    std::vector<double> rotation(9);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rotation[r * 3 + c] = config.extrinsic.rotation(r, c);
    root["extrinsic"] = {{"rotation", rotation},
                         {"translation", {config.extrinsic.translation.x(),
                                          config.extrinsic.translation.y(),
                                          config.extrinsic.translation.z()}}};
    return root.dump(2) + "\n";
}

}  // namespace dynamap
