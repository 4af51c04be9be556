#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "dynamap/dataio.hpp"
#include "dynamap/errors.hpp"
#include "test_helpers.hpp"

using namespace dynamap;
using dynamap::testing::TempDir;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("kitti bin round-trip is bit exact") {
    TempDir dir;
    std::vector<RawPoint> points{{1.5f, -2.25f, 0.125f, 0.66f}, {-7.0f, 3.5f, 1e-8f, 0.0f}};
    const auto path = dir.file("scan.bin");
    write_kitti_bin(path, points);

    const auto back = read_kitti_bin(path);
    REQUIRE(back.size() == 2);
    CHECK(std::memcmp(back.data(), points.data(), sizeof(RawPoint) * 2) == 0);
}

TEST_CASE("kitti bin size handling") {
    TempDir dir;
    const auto path = dir.file("scan.bin");

    {
        std::ofstream out(path, std::ios::binary);
        const std::string bytes(32, '\0');
        out.write(bytes.data(), 32);
    }
    CHECK(read_kitti_bin(path).size() == 2);

    {
        std::ofstream out(path, std::ios::binary);
    }
    CHECK(read_kitti_bin(path).empty());

    {
        std::ofstream out(path, std::ios::binary);
        const std::string bytes(17, '\0');
        out.write(bytes.data(), 17);
    }
    CHECK_THROWS_AS(read_kitti_bin(path), FormatError);

    CHECK_THROWS_AS(read_kitti_bin(dir.file("missing.bin")), IoError);
}

TEST_CASE("semantic labels: round-trip, class extraction, count mismatch") {
    TempDir dir;
    const auto path = dir.file("scan.label");
    // upper 16 bits hold the instance id and must be masked off
    write_semantic_labels(path, {252u | (7u << 16), 40u, 9u});

    const auto labels = read_semantic_labels(path, 3);
    REQUIRE(labels.size() == 3);
    CHECK(semantic_class(labels[0]) == 252);
    CHECK(semantic_class(labels[1]) == 40);

    CHECK_THROWS_AS(read_semantic_labels(path, 4), FormatError);
}

TEST_CASE("dynamic class mapping file drives the GT split") {
    TempDir dir;
    const auto path = dir.file("classes.json");
    {
        std::ofstream out(path);
        out << R"({"comment": "moving things", "dynamic_classes": [252, 253, 254]})";
    }
    const auto classes = load_dynamic_classes(path);
    CHECK(classes.count(252) == 1);
    CHECK(classes.count(254) == 1);
    CHECK(classes.count(40) == 0);

    {
        std::ofstream out(path);
        out << R"({"dynamic_classes": [252], "surprise": 1})";
    }
    CHECK_THROWS_AS(load_dynamic_classes(path), ConfigError);
}

TEST_CASE("kitti pose parsing") {
    TempDir dir;
    const auto path = dir.file("poses.txt");
    {
        std::ofstream out(path);
        out << "1 0 0 0 0 1 0 0 0 0 1 0\n";
        out << "1 0 0 4.5 0 1 0 -2 0 0 1 0.25\n";
    }
    const auto poses = read_poses(path, PoseFormat::KittiOdometry);
    REQUIRE(poses.size() == 2);
    CHECK(poses[0].rotation.isApprox(Eigen::Matrix3d::Identity()));
    CHECK(poses[1].translation.isApprox(Point3{4.5, -2.0, 0.25}));

    {
        std::ofstream out(path);
        out << "1 0 0 0 0 1 0 0 0 0 1\n";  // 11 values
    }
    try {
        read_poses(path, PoseFormat::KittiOdometry);
        FAIL("expected FormatError");
    } catch (const FormatError &e) {
        CHECK(std::string(e.what()).find(":1") != std::string::npos);
    }
}

TEST_CASE("tum pose parsing and round-trip identity") {
    TempDir dir;
    const auto path = dir.file("poses_tum.txt");
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "0.0 1 2 3 0 0 0 1\n";
        out << "0.1 0 0 0 0 0 0.7071067811865476 0.7071067811865476\n";
    }
    const auto poses = read_poses(path, PoseFormat::Tum);
    REQUIRE(poses.size() == 2);
    CHECK(poses[0].rotation.isApprox(Eigen::Matrix3d::Identity(), 1e-12));
    CHECK(poses[0].translation.isApprox(Point3{1, 2, 3}));
    // 90 degrees about z
    CHECK(transform_point({1, 0, 0}, poses[1]).isApprox(Point3{0, 1, 0}, 1e-9));

    for (const auto &pose : poses) {
        const Pose round = compose(pose, inverse(pose));
        CHECK((round.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(round.translation.norm() < 1e-9);
    }
}

TEST_CASE("pose extrinsic composition") {
    TempDir dir;
    const auto path = dir.file("poses.txt");
    {
        std::ofstream out(path);
        out << "1 0 0 10 0 1 0 0 0 0 1 0\n";
    }
    Pose extrinsic;
    extrinsic.translation = {0.5, 0.0, 1.0};
    const auto poses = read_poses(path, PoseFormat::KittiOdometry, extrinsic);
    REQUIRE(poses.size() == 1);
    CHECK(poses[0].translation.isApprox(Point3{10.5, 0.0, 1.0}));
}

TEST_CASE("poses written by write_poses_kitti parse back") {
    TempDir dir;
    std::mt19937 rng(8);
    std::vector<Pose> poses;
    for (int i = 0; i < 5; ++i) poses.push_back(dynamap::testing::random_pose(rng));

    const auto path = dir.file("poses.txt");
    write_poses_kitti(path, poses);
    const auto back = read_poses(path, PoseFormat::KittiOdometry);
    REQUIRE(back.size() == poses.size());
    for (size_t i = 0; i < poses.size(); ++i) {
        CHECK((back[i].rotation - poses[i].rotation).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((back[i].translation - poses[i].translation).norm() < 1e-9);
    }
}

TEST_CASE("ply export: header, payload size, determinism") {
    TempDir dir;
    VoxelMap map({1.0, 20, 0.0});

    const auto empty_path = dir.file("empty.ply");
    write_ply(map, empty_path, PlyColorMode::Label);
    const auto empty_bytes = slurp(empty_path);
    CHECK(empty_bytes.find("element vertex 0\n") != std::string::npos);

    REQUIRE(map.insert({1.0, 2.0, 3.0}, GroundLabel::Ground));
    const auto one_path = dir.file("one.ply");
    write_ply(map, one_path, PlyColorMode::Label);
    const auto bytes = slurp(one_path);
    CHECK(bytes.find("element vertex 1\n") != std::string::npos);
    const auto header_end = bytes.find("end_header\n") + std::strlen("end_header\n");
    CHECK(bytes.size() - header_end == 15);  // 3 float32 + 3 uint8

    float x = 0.0f;
    std::memcpy(&x, bytes.data() + header_end, 4);
    CHECK(x == 1.0f);

    const auto again_path = dir.file("one_again.ply");
    write_ply(map, again_path, PlyColorMode::Label);
    CHECK(slurp(again_path) == bytes);
}
