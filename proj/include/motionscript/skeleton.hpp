#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace motionscript {

// HumanML3D body subset of SMPL-H: 22 joints, fixed order.
inline constexpr int kNumJoints = 22;

namespace joint {
inline constexpr int pelvis = 0;
inline constexpr int left_hip = 1;
inline constexpr int right_hip = 2;
inline constexpr int spine1 = 3;
inline constexpr int left_knee = 4;
inline constexpr int right_knee = 5;
inline constexpr int spine2 = 6;
inline constexpr int left_ankle = 7;
inline constexpr int right_ankle = 8;
inline constexpr int spine3 = 9;
inline constexpr int left_foot = 10;
inline constexpr int right_foot = 11;
inline constexpr int neck = 12;
inline constexpr int left_collar = 13;
inline constexpr int right_collar = 14;
inline constexpr int head = 15;
inline constexpr int left_shoulder = 16;
inline constexpr int right_shoulder = 17;
inline constexpr int left_elbow = 18;
inline constexpr int right_elbow = 19;
inline constexpr int left_wrist = 20;
inline constexpr int right_wrist = 21;
}  // namespace joint

/// Per-frame joint positions, one row per joint (x, y, z).
template <typename Scalar>
using JointPositions = Eigen::Matrix<Scalar, kNumJoints, 3, Eigen::RowMajor>;

enum class Side { center, left, right };

struct EntityGroup {
  std::string name;
  std::vector<int> joints;
};

/// Joint identifiers, left/right pairing and the named body-part groups
/// used when merging motions of several joints under one subject.
class SkeletonSpec {
 public:
  /// The 22-joint skeleton every motion is converted to.
  static const SkeletonSpec& canonical();

  SkeletonSpec(std::vector<std::string> joints, std::vector<std::pair<int, int>> symmetry_pairs,
               std::vector<EntityGroup> entity_groups);

  const std::vector<std::string>& joint_names() const { return joints_; }
  const std::vector<std::pair<int, int>>& symmetry_pairs() const { return symmetry_pairs_; }
  const std::vector<EntityGroup>& entity_groups() const { return entity_groups_; }

  int size() const { return static_cast<int>(joints_.size()); }
  const std::string& name(int joint) const { return joints_.at(static_cast<std::size_t>(joint)); }
  std::optional<int> find(std::string_view name) const;
  /// Throws std::invalid_argument for unknown names.
  int index_of(std::string_view name) const;

  Side side(int joint) const;
  /// The opposite-side joint; center joints map to themselves.
  int mirror(int joint) const;

  /// Human-readable joint name, e.g. "left hand" for left_wrist.
  std::string display_name(int joint) const;
  /// Side-free plural, e.g. "hands" for either wrist.
  std::string plural_name(int joint) const;
  /// Side-free singular, e.g. "hand" for either wrist.
  std::string base_name(int joint) const;

  /// Index into entity_groups() of the group containing every joint in `joints`.
  std::optional<std::size_t> common_entity(const std::vector<int>& joints) const;

  /// Throws std::logic_error when an invariant is violated.
  void validate() const;

 private:
  std::vector<std::string> joints_;
  std::vector<std::pair<int, int>> symmetry_pairs_;
  std::vector<EntityGroup> entity_groups_;
  std::vector<int> mirror_;
};

/// Reference T-pose in meters, facing +z with the body's left side towards +x.
JointPositions<double> t_pose();

}  // namespace motionscript
