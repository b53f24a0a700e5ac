#pragma once

#include <Eigen/Dense>

namespace swim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// hat map: hat(w) * x == w.cross(x)
inline Mat3 hat(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
      -w.y(), w.x(), 0.0;
  return m;
}

inline Vec3 unhat(const Mat3& m) {
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

// Rodrigues formula, exact for any rotation vector.
inline Mat3 rot_exp(const Vec3& w) {
  const double th = w.norm();
  if (th < 1e-12) {
    const Mat3 W = hat(w);
    return Mat3::Identity() + W + 0.5 * W * W;
  }
  const Vec3 a = w / th;
  const Mat3 A = hat(a);
  return Mat3::Identity() + std::sin(th) * A + (1.0 - std::cos(th)) * A * A;
}

// Logarithm on SO(3); returns the rotation vector with angle in [0, pi].
inline Vec3 rot_log(const Mat3& R) {
  const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  const double th = std::acos(c);
  if (th < 1e-10) {
    return unhat(0.5 * (R - R.transpose()));
  }
  if (th > M_PI - 1e-6) {
    // near half turn: extract the axis from R + I
    Mat3 B = 0.5 * (R + Mat3::Identity());
    int k;
    B.diagonal().maxCoeff(&k);
    Vec3 axis = B.col(k) / std::sqrt(B(k, k));
    Vec3 w = th * axis.normalized();
    // fix the sign from the skew part
    if (unhat(R - R.transpose()).dot(w) < 0.0) w = -w;
    return w;
  }
  return th / (2.0 * std::sin(th)) * unhat(R - R.transpose());
}

inline double orthogonality_defect(const Mat3& R) {
  return (R.transpose() * R - Mat3::Identity()).norm();
}

}  // namespace swim
