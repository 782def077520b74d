#pragma once

// Scripted motions for tests: poses built from the reference T-pose and
// sequences interpolated linearly between keyframes.

#include "motionscript/motion_io.hpp"
#include "motionscript/skeleton.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace synth {

using motionscript::JointPositions;
using motionscript::MotionSequence;
using Frame = JointPositions<double>;
namespace joint = motionscript::joint;

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

/// Puts `tip` at `length` from `vertex` so the interior angle at `vertex`
/// between `root` and `tip` is `interior_deg`, bending towards `bend_dir`.
inline void place_limb(Frame& f, int root, int vertex, int tip, double interior_deg, Eigen::Vector3d bend_dir) {
  const Eigen::Vector3d r = f.row(root).transpose(), v = f.row(vertex).transpose(), t = f.row(tip).transpose();
  const double length = (t - v).norm();
  const Eigen::Vector3d a = (r - v).normalized();
  Eigen::Vector3d n = bend_dir - bend_dir.dot(a) * a;
  n.normalize();
  const double th = deg(interior_deg);
  const Eigen::Vector3d d = std::cos(th) * a + std::sin(th) * n;
  f.row(tip) = (v + length * d).transpose();
}

inline Frame tpose() { return motionscript::t_pose(); }

/// Elbow interior angle; the forearm folds forward.
inline Frame with_elbow(Frame f, bool left, double interior_deg) {
  if (left)
    place_limb(f, joint::left_shoulder, joint::left_elbow, joint::left_wrist, interior_deg, {0, 0, 1});
  else
    place_limb(f, joint::right_shoulder, joint::right_elbow, joint::right_wrist, interior_deg, {0, 0, 1});
  return f;
}

/// Knee interior angle; the shin folds backward and the foot follows.
inline Frame with_knee(Frame f, bool left, double interior_deg) {
  const int hip = left ? joint::left_hip : joint::right_hip;
  const int knee = left ? joint::left_knee : joint::right_knee;
  const int ankle = left ? joint::left_ankle : joint::right_ankle;
  const int foot = left ? joint::left_foot : joint::right_foot;
  const Eigen::RowVector3d offset = f.row(foot) - f.row(ankle);
  place_limb(f, hip, knee, ankle, interior_deg, {0, 0, -1});
  f.row(foot) = f.row(ankle) + offset;
  return f;
}

/// Linear interpolation of joint positions between (frame index, pose) keys.
inline MotionSequence keyframes(const std::vector<std::pair<int, Frame>>& keys, double fps = 20.0) {
  MotionSequence seq;
  seq.fps = fps;
  const int last = keys.back().first;
  seq.frames.resize(static_cast<std::size_t>(last) + 1);
  for (std::size_t k = 0; k + 1 < keys.size(); ++k) {
    const auto& [f0, p0] = keys[k];
    const auto& [f1, p1] = keys[k + 1];
    for (int t = f0; t <= f1; ++t) {
      const double s = f1 == f0 ? 0.0 : static_cast<double>(t - f0) / (f1 - f0);
      seq.frames[static_cast<std::size_t>(t)] = (1.0 - s) * p0 + s * p1;
    }
  }
  return seq;
}

/// Interpolates pose parameters rather than positions, so angles change
/// linearly. `make` maps an interpolation parameter vector to a pose.
template <typename Make>
MotionSequence parametric(const std::vector<std::pair<int, std::vector<double>>>& keys, Make make,
                          double fps = 20.0) {
  MotionSequence seq;
  seq.fps = fps;
  seq.frames.resize(static_cast<std::size_t>(keys.back().first) + 1);
  for (std::size_t k = 0; k + 1 < keys.size(); ++k) {
    const auto& [f0, p0] = keys[k];
    const auto& [f1, p1] = keys[k + 1];
    for (int t = f0; t <= f1; ++t) {
      const double s = f1 == f0 ? 0.0 : static_cast<double>(t - f0) / (f1 - f0);
      std::vector<double> p(p0.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - s) * p0[i] + s * p1[i];
      seq.frames[static_cast<std::size_t>(t)] = make(p);
    }
  }
  return seq;
}

/// Elbows and knees driven by interior angles {l_elbow, r_elbow, l_knee, r_knee}.
inline Frame limbs(const std::vector<double>& a) {
  Frame f = tpose();
  f = with_elbow(f, true, a[0]);
  f = with_elbow(f, false, a[1]);
  f = with_knee(f, true, a[2]);
  f = with_knee(f, false, a[3]);
  return f;
}

}  // namespace synth
