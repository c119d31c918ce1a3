#include "rodest/liegroup.hpp"

#include <cmath>
#include <stdexcept>

namespace rodest {

namespace {
constexpr double kSmallAngle = 1e-8;
constexpr double kOrthoTol = 1e-8;
}  // namespace

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.topRightCorner<3, 1>() = p;
  return m;
}

double Pose::orthonormality_error() const {
  return (R.transpose() * R - Mat3::Identity()).norm();
}

void Pose::reorthonormalize() {
  if (orthonormality_error() <= kOrthoTol) return;
  Vec3 c0 = R.col(0).normalized();
  Vec3 c1 = (R.col(1) - c0.dot(R.col(1)) * c0).normalized();
  Vec3 c2 = c0.cross(c1);
  R.col(0) = c0;
  R.col(1) = c1;
  R.col(2) = c2;
}

Mat3 hat3(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Mat4 hat6(const Twist& eta) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat3(angular(eta));
  m.topRightCorner<3, 1>() = linear(eta);
  return m;
}

Twist vee6(const Mat4& m) {
  constexpr double tol = 1e-9;
  if (m.bottomRows<1>().cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("vee6: bottom row is not zero");
  Mat3 w = m.topLeftCorner<3, 3>();
  if ((w + w.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("vee6: upper-left block is not skew");
  return stack(Vec3(w(2, 1), w(0, 2), w(1, 0)), m.topRightCorner<3, 1>());
}

Mat6 ad(const Twist& eta) {
  Mat6 m = Mat6::Zero();
  Mat3 wh = hat3(angular(eta));
  m.topLeftCorner<3, 3>() = wh;
  m.bottomRightCorner<3, 3>() = wh;
  m.bottomLeftCorner<3, 3>() = hat3(linear(eta));
  return m;
}

Mat6 Ad(const Pose& g) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = g.R;
  m.bottomRightCorner<3, 3>() = g.R;
  m.bottomLeftCorner<3, 3>() = hat3(g.p) * g.R;
  return m;
}

Mat6 Ad_inverse(const Pose& g) {
  Mat6 m = Mat6::Zero();
  Mat3 Rt = g.R.transpose();
  m.topLeftCorner<3, 3>() = Rt;
  m.bottomRightCorner<3, 3>() = Rt;
  m.bottomLeftCorner<3, 3>() = -Rt * hat3(g.p);
  return m;
}

Mat3 exp_so3(const Vec3& w) {
  double theta = w.norm();
  Mat3 wh = hat3(w);
  double a, b;
  if (theta < kSmallAngle) {
    // 4th-order series in theta
    a = 1.0 - theta * theta / 6.0;
    b = 0.5 - theta * theta / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * wh + b * wh * wh;
}

Vec3 log_so3(const Mat3& R) {
  double c = (R.trace() - 1.0) * 0.5;
  c = std::clamp(c, -1.0, 1.0);
  double theta = std::acos(c);
  if (theta >= M_PI - 1e-6)
    throw std::domain_error("log_so3: rotation angle too close to pi");
  Vec3 axis(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  double s = (theta < kSmallAngle) ? 0.5 + theta * theta / 12.0
                                   : theta / (2.0 * std::sin(theta));
  return s * axis;
}

Pose exp_se3(const Twist& xi, double step) {
  Vec3 w = step * angular(xi);
  Vec3 v = step * linear(xi);
  double theta = w.norm();
  Mat3 wh = hat3(w);
  Mat3 V;
  if (theta < kSmallAngle) {
    V = Mat3::Identity() + 0.5 * wh + wh * wh / 6.0;
  } else {
    double t2 = theta * theta;
    V = Mat3::Identity() + (1.0 - std::cos(theta)) / t2 * wh +
        (theta - std::sin(theta)) / (t2 * theta) * wh * wh;
  }
  return {exp_so3(w), V * v};
}

Twist log_se3(const Pose& g) {
  Vec3 w = log_so3(g.R);
  double theta = w.norm();
  Mat3 wh = hat3(w);
  Mat3 Vinv;
  if (theta < kSmallAngle) {
    Vinv = Mat3::Identity() - 0.5 * wh + wh * wh / 12.0;
  } else {
    double half = 0.5 * theta;
    double cot = half / std::tan(half);
    Vinv = Mat3::Identity() - 0.5 * wh +
           (1.0 - cot) / (theta * theta) * wh * wh;
  }
  return stack(w, Vinv * g.p);
}

}  // namespace rodest
