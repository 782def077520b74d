#pragma once

#include "motionscript/motion_io.hpp"
#include "motionscript/motioncode.hpp"

namespace motionscript {

struct SubjectChoice {
  enum class Mode { single_joint, mutual };
  Mode mode = Mode::single_joint;
  int joint = -1;  // set in single-joint mode
  double share = 1.0;

  bool operator==(const SubjectChoice&) const = default;
};

/// Picks the more active joint of a pair from its travelled distances.
SubjectChoice select_subject(double d_a, double d_b, int joint_a, int joint_b, double threshold);

/// Pair motioncodes (proximity, spatial relation) compare how far each joint
/// moves between T_s and T_e. Single-joint codes return their own joint.
SubjectChoice select_subject(const Motioncode& code, const MotionSequence& seq, double threshold);

}  // namespace motionscript
