#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dynamap/config.hpp"
#include "dynamap/dataio.hpp"
#include "dynamap/errors.hpp"
#include "dynamap/eval.hpp"
#include "dynamap/pipeline.hpp"
#include "dynamap/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dynamap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitConfig = 4;

std::vector<fs::path> sorted_scans(const std::string &dir) {
    if (!fs::is_directory(dir)) throw IoError("scan directory not found: " + dir);
    std::vector<fs::path> scans;
    for (const auto &entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".bin") {
            scans.push_back(entry.path());
        }
    }
    std::sort(scans.begin(), scans.end());
    if (scans.empty()) throw IoError("no .bin scans under " + dir);
    return scans;
}

json record_to_json(const PointRecord &record) {
    json j{{"sweep", record.sweep},
           {"idx", record.source_index},
           {"ground", record.ground},
           {"verdict", to_string(record.verdict)},
           {"reason", to_string(record.reason)}};
    if (record.gt_dynamic >= 0) j["gt"] = record.gt_dynamic == 1 ? "dynamic" : "static";
    return j;
}

json report_to_json(const SweepReport &report) {
    return json{{"sweep", report.sweep},
                {"counts",
                 {{"processed", report.counts.processed},
                  {"ground", report.counts.ground},
                  {"static", report.counts.static_points},
                  {"dynamic", report.counts.dynamic_points},
                  {"undetermined_born", report.counts.undetermined_born},
                  {"undetermined_resolved", report.counts.undetermined_resolved}}},
                {"timings_ms",
                 {{"cloud_processing", report.timings.cloud_processing_ms},
                  {"ground_fitting", report.timings.ground_fitting_ms},
                  {"detection", report.timings.detection_ms},
                  {"map_update", report.timings.map_update_ms},
                  {"total", report.timings.total_ms}}}};
}

PointClass verdict_from_string(const std::string &name) {
    if (name == "static") return PointClass::Static;
    if (name == "dynamic") return PointClass::Dynamic;
    if (name == "undetermined") return PointClass::Undetermined;
    throw FormatError("unknown verdict '" + name + "'");
}

struct RunOptions {
    std::string scans;
    std::string poses;
    std::string pose_format = "kitti";
    std::string config_path;
    std::string out_map;
    std::string out_tracking;
    std::string report_path;
    std::string verdicts_path;
    std::string labels_dir;
    std::string dynamic_classes_path = "data/semantic_kitti_dynamic_classes.json";
};

// Threshold flags shadow config-file values: flag > file > default. Flag
// values land in a scratch config during parsing; only options the user
// actually passed are copied onto the effective config afterwards.
struct ConfigOverrides {
    PipelineConfig scratch;
    std::string ratio_rule;
    double voxel_size = 0.0;
    CLI::App *cmd = nullptr;

    void attach(CLI::App *command) {
        cmd = command;
        cmd->add_option("--downsample-cell", scratch.downsample_cell, "Sweep downsampling cell (m)");
        cmd->add_option("--min-range", scratch.min_range, "Minimum return range (m)");
        cmd->add_option("--rows", scratch.ground_seg.rows, "Range image rows (rings)");
        cmd->add_option("--cols", scratch.ground_seg.cols, "Range image azimuth bins");
        cmd->add_option("--vfov-min", scratch.ground_seg.vfov_min_deg, "Vertical FOV lower bound (deg)");
        cmd->add_option("--vfov-max", scratch.ground_seg.vfov_max_deg, "Vertical FOV upper bound (deg)");
        cmd->add_option("--ground-rows", scratch.ground_seg.ground_rows, "Ground band rows (0 = auto)");
        cmd->add_option("--angle-threshold", scratch.ground_seg.angle_threshold_deg,
                        "Inter-ring ground angle threshold (deg)");
        cmd->add_option("--fore-back-threshold", scratch.detector.fore_back_threshold,
                        "Fore/back split distance (m)");
        cmd->add_option("--min-neighbors", scratch.detector.min_neighbors, "Neighbor count threshold");
        cmd->add_option("--nonground-ratio-threshold", scratch.detector.nonground_ratio_threshold,
                        "Non-ground neighbor ratio threshold");
        cmd->add_option("--ground-ratio-cutoff", scratch.detector.ground_ratio_cutoff,
                        "Ground-domination cutoff of the reconciled rule");
        cmd->add_option("--undetermined-max-far-sweeps", scratch.detector.undetermined_max_far_sweeps,
                        "Consecutive far sweeps before an undetermined point times out static");
        cmd->add_option("--bootstrap-min-map-points", scratch.bootstrap_min_map_points,
                        "Tracking-map size below which whole sweeps are accepted");
        cmd->add_flag("--rollback-tracking", scratch.detector.rollback_tracking,
                      "Remove dynamic-resolved undetermined points from the tracking-map");
        cmd->add_option("--ratio-rule", ratio_rule, "Ratio rule: literal | reconciled");
        cmd->add_option("--voxel-size", voxel_size, "Voxel size of both global maps (m)");
    }

    void apply(PipelineConfig &cfg) const {
        if (cmd->count("--downsample-cell")) cfg.downsample_cell = scratch.downsample_cell;
        if (cmd->count("--min-range")) cfg.min_range = scratch.min_range;
        if (cmd->count("--rows")) cfg.ground_seg.rows = scratch.ground_seg.rows;
        if (cmd->count("--cols")) cfg.ground_seg.cols = scratch.ground_seg.cols;
        if (cmd->count("--vfov-min")) cfg.ground_seg.vfov_min_deg = scratch.ground_seg.vfov_min_deg;
        if (cmd->count("--vfov-max")) cfg.ground_seg.vfov_max_deg = scratch.ground_seg.vfov_max_deg;
        if (cmd->count("--ground-rows")) cfg.ground_seg.ground_rows = scratch.ground_seg.ground_rows;
        if (cmd->count("--angle-threshold")) {
            cfg.ground_seg.angle_threshold_deg = scratch.ground_seg.angle_threshold_deg;
        }
        if (cmd->count("--fore-back-threshold")) {
            cfg.detector.fore_back_threshold = scratch.detector.fore_back_threshold;
        }
        if (cmd->count("--min-neighbors")) cfg.detector.min_neighbors = scratch.detector.min_neighbors;
        if (cmd->count("--nonground-ratio-threshold")) {
            cfg.detector.nonground_ratio_threshold = scratch.detector.nonground_ratio_threshold;
        }
        if (cmd->count("--ground-ratio-cutoff")) {
            cfg.detector.ground_ratio_cutoff = scratch.detector.ground_ratio_cutoff;
        }
        if (cmd->count("--undetermined-max-far-sweeps")) {
            cfg.detector.undetermined_max_far_sweeps = scratch.detector.undetermined_max_far_sweeps;
        }
        if (cmd->count("--bootstrap-min-map-points")) {
            cfg.bootstrap_min_map_points = scratch.bootstrap_min_map_points;
        }
        if (cmd->count("--rollback-tracking")) {
            cfg.detector.rollback_tracking = scratch.detector.rollback_tracking;
        }
        if (cmd->count("--ratio-rule")) cfg.detector.ratio_rule = parse_ratio_rule(ratio_rule);
        if (cmd->count("--voxel-size")) {
            cfg.tracking_map.voxel_size = voxel_size;
            cfg.output_map.voxel_size = voxel_size;
        }
    }
};

int cmd_run(const RunOptions &opt, const PipelineConfig &cfg) {
    validate(cfg);

    const auto scans = sorted_scans(opt.scans);
    const auto poses = read_poses(opt.poses, parse_pose_format(opt.pose_format), cfg.extrinsic);
    if (poses.size() < scans.size()) {
        throw FormatError(opt.poses + ": " + std::to_string(poses.size()) + " poses for " +
                          std::to_string(scans.size()) + " scans");
    }

    std::unordered_set<uint16_t> dynamic_classes;
    const bool with_labels = !opt.labels_dir.empty();
    if (with_labels) dynamic_classes = load_dynamic_classes(opt.dynamic_classes_path);

    std::ofstream report_out;
    if (!opt.report_path.empty()) {
        report_out.open(opt.report_path);
        if (!report_out) throw IoError("cannot write report file: " + opt.report_path);
    }
    std::ofstream verdicts_out;
    if (!opt.verdicts_path.empty()) {
        verdicts_out.open(opt.verdicts_path);
        if (!verdicts_out) throw IoError("cannot write verdicts file: " + opt.verdicts_path);
    }

    PipelineState state(cfg);
    std::vector<PointRecord> records;
    const bool keep_records = with_labels;
    if (!opt.verdicts_path.empty() || keep_records) {
        state.record_sink = [&](const PointRecord &record) {
            if (verdicts_out.is_open()) verdicts_out << record_to_json(record).dump() << '\n';
            if (keep_records) records.push_back(record);
        };
    }

    std::vector<SweepReport> reports;
    reports.reserve(scans.size());
    for (size_t i = 0; i < scans.size(); ++i) {
        const auto raw = read_kitti_bin(scans[i].string());
        if (raw.empty()) {
            std::cerr << "warning: empty scan " << scans[i] << "\n";
        }

        std::vector<uint32_t> labels;
        if (with_labels) {
            const auto label_path =
                fs::path(opt.labels_dir) / (scans[i].stem().string() + ".label");
            labels = read_semantic_labels(label_path.string(), static_cast<int64_t>(raw.size()));
        }

        Sweep sweep;
        sweep.index = static_cast<int64_t>(i);
        sweep.pose_world_lidar = poses[i];
        sweep.points.reserve(raw.size());
        for (size_t p = 0; p < raw.size(); ++p) {
            LabeledPoint point;
            point.position_sensor = {raw[p].x, raw[p].y, raw[p].z};
            point.source_index = static_cast<int32_t>(p);
            if (with_labels) {
                point.gt_dynamic = dynamic_classes.count(semantic_class(labels[p])) ? 1 : 0;
            }
            sweep.points.push_back(point);
        }

        const auto report = process_sweep(sweep, cfg, state);
        if (report_out.is_open()) report_out << report_to_json(report).dump() << '\n';
        reports.push_back(report);
    }
    finalize(state);

    write_ply(state.output_map, opt.out_map, PlyColorMode::Label);
    if (!opt.out_tracking.empty()) write_ply(state.tracking_map, opt.out_tracking, PlyColorMode::Label);

    std::cout << render_timing_table(timing_summary(reports));
    std::cout << "output-map points:   " << state.output_map.point_count() << "\n"
              << "tracking-map points: " << state.tracking_map.point_count() << "\n";
    if (keep_records) {
        std::cout << render_pr_rr_table(score(records));
    }
    return kExitOk;
}

int cmd_synth(const std::string &scene_path, int64_t sweeps, const std::string &out_dir) {
    const SceneSpec spec = load_scene(scene_path);
    emit_dataset(spec, sweeps, out_dir);
    std::cout << "wrote " << sweeps << " sweeps under " << out_dir << "\n";
    return kExitOk;
}

int cmd_eval(const std::string &verdicts_path, const std::string &labels_dir,
             const std::string &dynamic_classes_path, const std::string &json_out) {
    std::ifstream in(verdicts_path);
    if (!in) throw IoError("cannot open verdicts file: " + verdicts_path);

    std::unordered_set<uint16_t> dynamic_classes;
    std::unordered_map<int64_t, std::vector<uint32_t>> labels_by_sweep;
    const bool join_labels = !labels_dir.empty();
    if (join_labels) dynamic_classes = load_dynamic_classes(dynamic_classes_path);

    std::vector<PointRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error &e) {
            throw FormatError(verdicts_path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        PointRecord record;
        record.sweep = j.at("sweep").get<int64_t>();
        record.source_index = j.at("idx").get<int32_t>();
        record.verdict = verdict_from_string(j.at("verdict").get<std::string>());
        if (j.contains("gt")) record.gt_dynamic = j.at("gt").get<std::string>() == "dynamic" ? 1 : 0;

        if (join_labels && record.source_index >= 0) {
            auto it = labels_by_sweep.find(record.sweep);
            if (it == labels_by_sweep.end()) {
                char name[16];
                std::snprintf(name, sizeof(name), "%06lld", static_cast<long long>(record.sweep));
                const auto path = fs::path(labels_dir) / (std::string(name) + ".label");
                it = labels_by_sweep.emplace(record.sweep, read_semantic_labels(path.string())).first;
            }
            const auto &labels = it->second;
            if (record.source_index >= static_cast<int32_t>(labels.size())) {
                throw FormatError("label file for sweep " + std::to_string(record.sweep) +
                                  " has no entry " + std::to_string(record.source_index));
            }
            record.gt_dynamic = dynamic_classes.count(semantic_class(labels[record.source_index])) ? 1 : 0;
        }
        records.push_back(record);
    }

    const auto result = score(records);
    std::cout << render_pr_rr_table(result);
    if (!json_out.empty()) {
        json j{{"preserved_static", result.preserved_static},
               {"total_static", result.total_static},
               {"rejected_dynamic", result.rejected_dynamic},
               {"total_dynamic", result.total_dynamic}};
        if (result.pr_percent) j["pr_percent"] = *result.pr_percent;
        if (result.rr_percent) j["rr_percent"] = *result.rr_percent;
        std::ofstream out(json_out);
        if (!out) throw IoError("cannot write " + json_out);
        out << j.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Label-consistency dynamic point removal for spinning-LiDAR sweeps"};
    app.require_subcommand(1);

    RunOptions run_opt;
    ConfigOverrides overrides;

    auto *run = app.add_subcommand("run", "Run the removal pipeline over a scan directory");
    run->add_option("--scans", run_opt.scans, "Directory of .bin scans")->required();
    run->add_option("--poses", run_opt.poses, "Pose file (one pose per scan)")->required();
    run->add_option("--pose-format", run_opt.pose_format, "kitti | tum");
    run->add_option("--config", run_opt.config_path, "Pipeline config JSON");
    run->add_option("--out-map", run_opt.out_map, "Output-map PLY path")->required();
    run->add_option("--out-tracking", run_opt.out_tracking, "Tracking-map PLY path");
    run->add_option("--report", run_opt.report_path, "Per-sweep JSON-lines report path");
    run->add_option("--verdicts", run_opt.verdicts_path, "Per-point JSON-lines verdict dump path");
    run->add_option("--labels", run_opt.labels_dir, "Semantic label directory (enables PR/RR)");
    run->add_option("--dynamic-classes", run_opt.dynamic_classes_path,
                    "JSON file mapping semantic classes to ground-truth dynamic");
    overrides.attach(run);

    std::string synth_scene, synth_out;
    int64_t synth_sweeps = 0;
    auto *synth = app.add_subcommand("synth", "Raycast a synthetic scene into a KITTI-layout dataset");
    synth->add_option("--scene", synth_scene, "Scene JSON file")->required();
    synth->add_option("--sweeps", synth_sweeps, "Number of sweeps")->required();
    synth->add_option("--out", synth_out, "Output dataset directory")->required();

    std::string eval_verdicts, eval_labels, eval_json;
    std::string eval_classes = "data/semantic_kitti_dynamic_classes.json";
    auto *eval = app.add_subcommand("eval", "Score a verdict dump against ground truth");
    eval->add_option("--verdicts", eval_verdicts, "Verdict JSON-lines file")->required();
    eval->add_option("--labels", eval_labels, "Semantic label directory (rejoins ground truth)");
    eval->add_option("--dynamic-classes", eval_classes, "Dynamic-class mapping JSON");
    eval->add_option("--json", eval_json, "Also write the scores as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("run")) {
            PipelineConfig cfg;
            if (!run_opt.config_path.empty()) cfg = load_pipeline_config(run_opt.config_path);
            overrides.apply(cfg);
            return cmd_run(run_opt, cfg);
        }
        if (app.got_subcommand("synth")) return cmd_synth(synth_scene, synth_sweeps, synth_out);
        if (app.got_subcommand("eval")) return cmd_eval(eval_verdicts, eval_labels, eval_classes, eval_json);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
