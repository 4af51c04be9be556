#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dynamap {

using Point3 = Eigen::Vector3d;

/// Rigid-body transform (rotation + translation) placing a frame in a parent
/// frame. Rotations are stored as full 3x3 matrices and re-orthonormalized
/// via polar decomposition when drift is detected.
struct Pose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static Pose identity() { return {}; }

    Point3 operator*(const Point3 &p) const { return rotation * p + translation; }
};

// Max absolute deviation of R^T R from identity.
double rotation_drift(const Eigen::Matrix3d &rotation);

// True if rotation is orthonormal with det +1 within `tol` and all entries finite.
bool is_valid_rotation(const Eigen::Matrix3d &rotation, double tol = 1e-6);

bool is_valid_pose(const Pose &pose, double tol = 1e-6);

// Nearest orthonormal matrix (polar decomposition, det forced to +1).
Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d &rotation);

Point3 transform_point(const Point3 &p, const Pose &pose);

// Applies b first, then a. Re-orthonormalizes when drift exceeds 1e-6.
Pose compose(const Pose &a, const Pose &b);

Pose inverse(const Pose &pose);

}  // namespace dynamap
