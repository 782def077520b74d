#pragma once

// Scripted motions that exercise each aggregation rule.

#include "synthetic.hpp"

namespace scenario {

using synth::Frame;
namespace joint = motionscript::joint;

/// Both elbows bend together.
inline motionscript::MotionSequence both_elbows_bend() {
  return synth::parametric({{0, {180, 180, 180, 180}},
                            {10, {180, 180, 180, 180}},
                            {40, {40, 40, 180, 180}},
                            {50, {40, 40, 180, 180}}},
                           synth::limbs);
}

/// The left elbow bends and the left hand comes down towards the right foot.
inline motionscript::MotionSequence left_arm_reaches_down() {
  Frame a = synth::tpose(), b = synth::tpose();
  b.row(joint::left_elbow) << -0.05, 0.15, 0.20;
  b.row(joint::left_wrist) << -0.10, 0.08, 0.22;
  return synth::keyframes({{0, a}, {10, a}, {40, b}, {50, b}});
}

/// The right elbow bends while moving away from the left elbow, then
/// straightens partway right after.
inline motionscript::MotionSequence right_elbow_bend_and_spread() {
  auto make = [](const std::vector<double>& p) {
    Frame f = synth::tpose();
    f.row(joint::left_elbow) << 0.20, 1.12, 0.0;
    f.row(joint::left_wrist) << 0.20, 0.87, 0.0;
    const Eigen::RowVector3d e0(0.10, 1.12, 0.10), e1(-0.45, 1.40, 0.0);
    f.row(joint::right_elbow) = (1 - p[0]) * e0 + p[0] * e1;
    f.row(joint::right_wrist) = f.row(joint::right_elbow) + Eigen::RowVector3d(-0.25, 0, 0);
    synth::place_limb(f, joint::right_shoulder, joint::right_elbow, joint::right_wrist, p[1], {0, 0, 1});
    return f;
  };
  return synth::parametric(
      {{0, {0, 180}}, {2, {0, 180}}, {10, {1, 60}}, {12, {1, 60}}, {20, {1, 120}}, {30, {1, 120}}}, make);
}

/// The right elbow bends and straightens twice; the right knee bends in the
/// middle of the first cycle.
inline motionscript::MotionSequence elbow_cycles_with_knee() {
  auto make = [](const std::vector<double>& a) {
    Frame f = synth::tpose();
    synth::place_limb(f, joint::right_shoulder, joint::right_elbow, joint::right_wrist, a[0], {0, 1, 1});
    return synth::with_knee(f, false, a[1]);
  };
  return synth::parametric({{0, {180, 180}},
                            {5, {180, 180}},
                            {20, {115, 180}},
                            {25, {115, 180}},
                            {38, {180, 60}},
                            {45, {180, 60}},
                            {60, {115, 60}},
                            {65, {115, 60}},
                            {80, {180, 60}},
                            {90, {180, 60}}},
                           make);
}

}  // namespace scenario
