#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "dynamap/geometry.hpp"
#include "dynamap/point_types.hpp"

namespace dynamap::testing {

inline Pose random_pose(std::mt19937 &rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    Eigen::Vector3d axis{unit(rng), unit(rng), unit(rng)};
    while (axis.norm() < 1e-3) axis = {unit(rng), unit(rng), unit(rng)};
    Pose pose;
    pose.rotation = Eigen::AngleAxisd(angle(rng), axis.normalized()).toRotationMatrix();
    pose.translation = {10.0 * unit(rng), 10.0 * unit(rng), 10.0 * unit(rng)};
    return pose;
}

inline Point3 random_point(std::mt19937 &rng, double scale = 10.0) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    return {scale * unit(rng), scale * unit(rng), scale * unit(rng)};
}

inline LabeledPoint sensor_point(double x, double y, double z, int ring = -1) {
    LabeledPoint point;
    point.position_sensor = {x, y, z};
    point.range = point.position_sensor.norm();
    point.ring = ring;
    return point;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("dynamap_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    std::filesystem::path path() const { return path_; }
    std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace dynamap::testing
