#pragma once

#include "motionscript/skeleton.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <optional>

// Geometric measurements shared by the posecode classifiers. Everything
// here is templated on the scalar type so the same code serves double
// pipelines and higher-precision reference computations in tests.
namespace motionscript::geometry {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
constexpr Scalar rad_to_deg(Scalar r) {
  return r * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
constexpr Scalar deg_to_rad(Scalar d) {
  return d * std::numbers::pi_v<Scalar> / Scalar(180);
}

/// Interior angle at `vertex` between the rays towards `a` and `b`, in
/// degrees within [0, 180]. Empty when either ray has zero length.
template <typename DA, typename DV, typename DB>
std::optional<typename DA::Scalar> interior_angle_deg(const Eigen::MatrixBase<DA>& a,
                                                      const Eigen::MatrixBase<DV>& vertex,
                                                      const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  const Vector3<Scalar> u = (a - vertex).transpose();
  const Vector3<Scalar> v = (b - vertex).transpose();
  if (u.squaredNorm() == Scalar(0) || v.squaredNorm() == Scalar(0)) return std::nullopt;
  // atan2 of |u x v| and u.v keeps precision near 0 and 180 degrees.
  return rad_to_deg(std::atan2(u.cross(v).norm(), u.dot(v)));
}

/// Angle in degrees between the segment bottom->top and the vertical axis,
/// folded into [0, 90]. Empty for a zero-length segment.
template <typename DT, typename DB>
std::optional<typename DT::Scalar> angle_from_vertical_deg(const Eigen::MatrixBase<DT>& top,
                                                           const Eigen::MatrixBase<DB>& bottom) {
  using Scalar = typename DT::Scalar;
  const Vector3<Scalar> d = (top - bottom).transpose();
  const Scalar horizontal = std::hypot(d.x(), d.z());
  if (horizontal == Scalar(0) && d.y() == Scalar(0)) return std::nullopt;
  return rad_to_deg(std::atan2(horizontal, std::abs(d.y())));
}

/// Heading of the body about +y, measured from +z, derived from the hip
/// line. Empty when the hips coincide in the horizontal plane.
template <typename Scalar>
std::optional<Scalar> facing_yaw(const JointPositions<Scalar>& pose) {
  const Vector3<Scalar> across =
      (pose.row(joint::left_hip) - pose.row(joint::right_hip)).transpose();
  // facing = across x up, with up = +y
  const Scalar fx = -across.z();
  const Scalar fz = across.x();
  if (fx == Scalar(0) && fz == Scalar(0)) return std::nullopt;
  return std::atan2(fx, fz);
}

/// Rigid transform p' = Ry(yaw) * (p - offset). The y component is carried
/// through untouched so heights stay bit-exact.
template <typename Scalar>
JointPositions<Scalar> rotate_about_y(const JointPositions<Scalar>& pose, Scalar yaw,
                                      const Vector3<Scalar>& offset) {
  const Scalar c = std::cos(yaw);
  const Scalar s = std::sin(yaw);
  JointPositions<Scalar> out;
  for (int j = 0; j < kNumJoints; ++j) {
    const Scalar x = pose(j, 0) - offset.x();
    const Scalar z = pose(j, 2) - offset.z();
    out(j, 0) = c * x + s * z;
    out(j, 1) = pose(j, 1) - offset.y();
    out(j, 2) = -s * x + c * z;
  }
  return out;
}

/// Body frame of the root: columns are the body's left (hip line), up
/// (pelvis to neck, orthogonalised) and forward directions.
template <typename Scalar>
std::optional<Matrix3<Scalar>> root_frame(const JointPositions<Scalar>& pose) {
  Vector3<Scalar> left = (pose.row(joint::left_hip) - pose.row(joint::right_hip)).transpose();
  Vector3<Scalar> up = (pose.row(joint::neck) - pose.row(joint::pelvis)).transpose();
  if (left.norm() == Scalar(0)) return std::nullopt;
  left.normalize();
  up -= up.dot(left) * left;
  if (up.norm() == Scalar(0)) return std::nullopt;
  up.normalize();
  Matrix3<Scalar> frame;
  frame.col(0) = left;
  frame.col(1) = up;
  frame.col(2) = left.cross(up);
  return frame;
}

template <typename Scalar>
struct YawPitchRoll {
  Scalar yaw;    // about y
  Scalar pitch;  // about x
  Scalar roll;   // about z
};

/// Decomposes R = Ry(yaw) * Rx(pitch) * Rz(roll); angles in degrees,
/// yaw and roll in (-180, 180], pitch in [-90, 90].
template <typename Derived>
YawPitchRoll<typename Derived::Scalar> yaw_pitch_roll_deg(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  const Scalar yaw = std::atan2(r(0, 2), r(2, 2));
  const Scalar pitch = std::atan2(-r(1, 2), std::hypot(r(0, 2), r(2, 2)));
  const Scalar roll = std::atan2(r(1, 0), r(1, 1));
  return {rad_to_deg(yaw), rad_to_deg(pitch), rad_to_deg(roll)};
}

}  // namespace motionscript::geometry
