#include "dynamap/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace dynamap {

double rotation_drift(const Eigen::Matrix3d &rotation) {
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    return (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

bool is_valid_rotation(const Eigen::Matrix3d &rotation, double tol) {
    if (!rotation.allFinite()) return false;
    if (rotation_drift(rotation) > tol) return false;
    return rotation.determinant() > 0.0;
}

bool is_valid_pose(const Pose &pose, double tol) {
    return pose.translation.allFinite() && is_valid_rotation(pose.rotation, tol);
}

Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d &rotation) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    const Eigen::Matrix3d v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
    return u * v.transpose();
}

Point3 transform_point(const Point3 &p, const Pose &pose) {
    return pose.rotation * p + pose.translation;
}

Pose compose(const Pose &a, const Pose &b) {
    Pose out;
    out.rotation = a.rotation * b.rotation;
    out.translation = a.rotation * b.translation + a.translation;
    if (rotation_drift(out.rotation) > 1e-6) out.rotation = orthonormalized(out.rotation);
    return out;
}

Pose inverse(const Pose &pose) {
    Pose out;
    out.rotation = pose.rotation.transpose();
    out.translation = -(out.rotation * pose.translation);
    return out;
}

}  // namespace dynamap
