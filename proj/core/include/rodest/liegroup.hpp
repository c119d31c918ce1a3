#pragma once

#include <Eigen/Dense>

namespace rodest {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat4 = Eigen::Matrix4d;

// Twists stack [angular; linear] and wrenches stack [moment; force].
// Every 6-vector in this library follows that angular-first convention.
using Twist = Vec6;
using Wrench = Vec6;

inline Eigen::Ref<const Vec3> angular(const Vec6& x) { return x.head<3>(); }
inline Eigen::Ref<const Vec3> linear(const Vec6& x) { return x.tail<3>(); }

inline Vec6 stack(const Vec3& ang, const Vec3& lin) {
  Vec6 x;
  x << ang, lin;
  return x;
}

/// Rigid transform in SE(3), stored as rotation matrix + position.
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 p = Vec3::Zero();

  Pose() = default;
  Pose(const Mat3& R_, const Vec3& p_) : R(R_), p(p_) {}

  Pose operator*(const Pose& o) const { return {R * o.R, R * o.p + p}; }
  Pose inverse() const { return {R.transpose(), -(R.transpose() * p)}; }

  Mat4 matrix() const;

  double orthonormality_error() const;
  // Gram-Schmidt reprojection, applied when drift exceeds tolerance.
  void reorthonormalize();
};

Mat3 hat3(const Vec3& v);

Mat4 hat6(const Twist& eta);
// Throws std::invalid_argument if the bottom row is nonzero or the upper-left
// block is not skew, beyond tolerance 1e-9.
Twist vee6(const Mat4& m);

Mat6 ad(const Twist& eta);
Mat6 Ad(const Pose& g);
// Closed form (transpose-rotation blocks), not a matrix inversion.
Mat6 Ad_inverse(const Pose& g);

// exp of the scaled twist (step * xi)^wedge.
Pose exp_se3(const Twist& xi, double step = 1.0);
// Throws std::domain_error when the rotation angle is >= pi - 1e-6.
Twist log_se3(const Pose& g);

Mat3 exp_so3(const Vec3& w);
Vec3 log_so3(const Mat3& R);

}  // namespace rodest
