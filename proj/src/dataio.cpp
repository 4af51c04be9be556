#include "dynamap/dataio.hpp"

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dynamap/errors.hpp"
#include "json_util.hpp"

namespace dynamap {

namespace {

std::vector<char> read_all_bytes(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<char> bytes(static_cast<size_t>(size));
    if (size > 0) in.read(bytes.data(), size);
    if (!in) throw IoError("failed reading file: " + path);
    return bytes;
}

}  // namespace

std::vector<RawPoint> read_kitti_bin(const std::string &path) {
    const auto bytes = read_all_bytes(path);
    if (bytes.size() % 16 != 0) {
        throw FormatError(path + ": size " + std::to_string(bytes.size()) +
                          " is not a multiple of 16 bytes");
    }
    std::vector<RawPoint> points(bytes.size() / 16);
    if (!points.empty()) std::memcpy(points.data(), bytes.data(), bytes.size());
    return points;
}

void write_kitti_bin(const std::string &path, const std::vector<RawPoint> &points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(reinterpret_cast<const char *>(points.data()),
              static_cast<std::streamsize>(points.size() * sizeof(RawPoint)));
    if (!out) throw IoError("failed writing file: " + path);
}

std::vector<uint32_t> read_semantic_labels(const std::string &path, int64_t expected_points) {
    const auto bytes = read_all_bytes(path);
    if (bytes.size() % 4 != 0) {
        throw FormatError(path + ": size " + std::to_string(bytes.size()) +
                          " is not a multiple of 4 bytes");
    }
    std::vector<uint32_t> labels(bytes.size() / 4);
    if (!labels.empty()) std::memcpy(labels.data(), bytes.data(), bytes.size());
    if (expected_points >= 0 && static_cast<int64_t>(labels.size()) != expected_points) {
        throw FormatError(path + ": " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(expected_points) + " points");
    }
    return labels;
}

void write_semantic_labels(const std::string &path, const std::vector<uint32_t> &labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(reinterpret_cast<const char *>(labels.data()),
              static_cast<std::streamsize>(labels.size() * sizeof(uint32_t)));
    if (!out) throw IoError("failed writing file: " + path);
}

std::unordered_set<uint16_t> load_dynamic_classes(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dynamic-class file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto root = detail::parse_text(buffer.str(), path);
    detail::require_keys(root, "dynamic_classes_file", {"dynamic_classes", "comment"});
    if (!root.contains("dynamic_classes")) {
        throw ConfigError(path + ": missing 'dynamic_classes' array");
    }
    std::unordered_set<uint16_t> classes;
    for (const auto &value : root.at("dynamic_classes")) {
        if (!value.is_number_unsigned()) throw ConfigError(path + ": class ids must be unsigned");
        classes.insert(static_cast<uint16_t>(value.get<uint32_t>() & 0xFFFFu));
    }
    return classes;
}

PoseFormat parse_pose_format(const std::string &name) {
    if (name == "kitti" || name == "kitti_odometry") return PoseFormat::KittiOdometry;
    if (name == "tum") return PoseFormat::Tum;
    throw ConfigError("pose format must be 'kitti' or 'tum', got '" + name + "'");
}

std::vector<Pose> read_poses(const std::string &path, PoseFormat format, const Pose &extrinsic) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pose file: " + path);

    std::vector<Pose> poses;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::vector<double> values;
        double v;
        while (fields >> v) values.push_back(v);
        if (!fields.eof()) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric field");
        }

        Pose pose;
        if (format == PoseFormat::KittiOdometry) {
            if (values.size() != 12) {
                throw FormatError(path + ":" + std::to_string(line_no) + ": expected 12 values, got " +
                                  std::to_string(values.size()));
            }
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 4; ++c) {
                    const double value = values[r * 4 + c];
                    if (c == 3) {
                        pose.translation(r) = value;
                    } else {
                        pose.rotation(r, c) = value;
                    }
                }
            }
        } else {
            if (values.size() != 8) {
                throw FormatError(path + ":" + std::to_string(line_no) + ": expected 8 values, got " +
                                  std::to_string(values.size()));
            }
            // timestamp tx ty tz qx qy qz qw
            pose.translation = Point3(values[1], values[2], values[3]);
            Eigen::Quaterniond q(values[7], values[4], values[5], values[6]);
            if (q.norm() < 1e-12) {
                throw FormatError(path + ":" + std::to_string(line_no) + ": zero quaternion");
            }
            q.normalize();
            pose.rotation = q.toRotationMatrix();
        }

        if (!pose.translation.allFinite() || !pose.rotation.allFinite()) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": non-finite pose");
        }
        pose.rotation = orthonormalized(pose.rotation);
        poses.push_back(compose(pose, extrinsic));
    }
    return poses;
}

void write_poses_kitti(const std::string &path, const std::vector<Pose> &poses) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write pose file: " + path);
    out.precision(12);
    for (const auto &pose : poses) {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (r != 0 || c != 0) out << ' ';
                out << (c == 3 ? pose.translation(r) : pose.rotation(r, c));
            }
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing pose file: " + path);
}

void write_ply(const VoxelMap &map, const std::string &path, PlyColorMode color_mode) {
    const auto points = map.export_points();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PLY file: " + path);

    out << "ply\n"
        << "format binary_little_endian 1.0\n"
        << "element vertex " << points.size() << "\n"
        << "property float x\n"
        << "property float y\n"
        << "property float z\n"
        << "property uchar red\n"
        << "property uchar green\n"
        << "property uchar blue\n"
        << "end_header\n";

    constexpr std::array<uint8_t, 3> kGroundColor{255, 140, 0};
    constexpr std::array<uint8_t, 3> kNonGroundColor{255, 255, 255};
    constexpr std::array<uint8_t, 3> kStaticColor{180, 180, 180};

    for (const auto &point : points) {
        const std::array<float, 3> xyz{static_cast<float>(point.position.x()),
                                       static_cast<float>(point.position.y()),
                                       static_cast<float>(point.position.z())};
        const auto &rgb = color_mode == PlyColorMode::Class
                              ? kStaticColor
                              : (point.label == GroundLabel::Ground ? kGroundColor : kNonGroundColor);
        out.write(reinterpret_cast<const char *>(xyz.data()), sizeof(xyz));
        out.write(reinterpret_cast<const char *>(rgb.data()), 3);
    }
    if (!out) throw IoError("failed writing PLY file: " + path);
}

}  // namespace dynamap
