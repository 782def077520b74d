#pragma once

#include "motionscript/motion_io.hpp"
#include "motionscript/skeleton.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motionscript {

enum class PosecodeKind { angle, distance, relative_position, pitch_roll, ground_contact, orientation, position };
enum class Axis { x, y, z };
enum class PositionReference { root_relative, global };

std::string_view kind_name(PosecodeKind kind);
std::string_view axis_name(Axis axis);
std::string_view reference_name(PositionReference reference);

/// One configured posecode: a kind plus the joints it is measured on.
///   angle              (endpoint, vertex, endpoint)
///   distance           (a, b)
///   relative_position  (a, b) along `axis`, sign of a - b
///   pitch_roll         (top, bottom) body segment
///   ground_contact     (joint)
///   orientation        (pelvis) about `axis`
///   position           (joint) along `axis` in `reference` frame
struct PosecodeInstance {
  PosecodeKind kind = PosecodeKind::angle;
  std::vector<int> joints;
  Axis axis = Axis::x;
  PositionReference reference = PositionReference::root_relative;

  /// Stable textual id, e.g. "angle:left_shoulder,left_elbow,left_wrist".
  std::string key() const;
  /// Joints the posecode is about: the vertex of an angle, both ends of a
  /// pair, the single joint otherwise.
  std::vector<int> key_joints() const;
  void validate() const;

  bool operator==(const PosecodeInstance&) const = default;
};

/// Parses the instance notation used by the config file, e.g.
/// "angle left_shoulder left_elbow left_wrist", "relative_position x a b",
/// "position y global pelvis", "orientation y".
PosecodeInstance parse_instance(std::string_view text);
std::string format_instance(const PosecodeInstance& instance);

/// Transparent category: the frame carries no usable label.
inline constexpr int kIgnored = std::numeric_limits<int>::min();

struct PosecodeTimeline {
  PosecodeInstance instance;
  std::vector<int> categories;  // one ordinal per frame, or kIgnored
  std::vector<std::string> category_names;
  int min_ordinal = 0;  // ordinal of category_names.front()

  std::string_view name_of(int ordinal) const;
};

struct NoiseConfig {
  double angle_sigma = 2.0;      // degrees
  double distance_sigma = 0.01;  // meters
  std::uint64_t seed = 0;
  bool enabled = true;

  void validate() const;
};

struct PosecodeThresholds {
  // Lower edges, degrees: completely bent < 45 <= almost completely bent < 75 <=
  // right angle < 105 <= partially bent < 135 <= slightly bent < 160 <= straight.
  std::array<double, 5> angle_edges{45.0, 75.0, 105.0, 135.0, 160.0};
  // Shoulder-width ratios: close < 0.5 <= shoulder width < 1.5 <= spread < 2.5 <= wide apart.
  std::array<double, 3> distance_edges{0.5, 1.5, 2.5};
  double relative_position_band = 0.05;
  double vertical_cone = 25.0;
  double horizontal_cone = 65.0;
  double ground_epsilon = 0.05;
  double orientation_sector = 45.0;
  double position_step = 0.15;
  int position_max_bin = 5;

  void validate() const;
};

/// Category labels and the ordinal of the first one for an instance.
std::vector<std::string> category_names(const PosecodeInstance& instance, const PosecodeThresholds& thresholds,
                                        int* min_ordinal = nullptr);

// Angle ordinals: 0 straight ... 5 completely bent.
inline constexpr int kAngleCategories = 6;
// Distance ordinals: 0 close ... 3 wide apart.
inline constexpr int kDistanceCategories = 4;

/// Interior angle at the vertex; empty when a ray has zero length.
std::optional<double> measure_angle(const JointPositions<double>& frame, int a, int vertex, int b);

// Classifiers take the already drawn perturbation (zero when noise is off).
int classify_angle(double degrees, double perturbation, const PosecodeThresholds& t);
int classify_distance(double distance, double shoulder_width, double perturbation, const PosecodeThresholds& t);
/// 0 = right of / below / behind, 1 = left of / above / in front of, kIgnored inside the band.
int classify_relative_position(const Eigen::RowVector3d& a, const Eigen::RowVector3d& b, Axis axis,
                               double perturbation, const PosecodeThresholds& t);
/// 0 = vertical, 1 = horizontal, kIgnored in between or for a degenerate segment.
int classify_pitch_roll(const Eigen::RowVector3d& top, const Eigen::RowVector3d& bottom, double perturbation,
                        const PosecodeThresholds& t);
/// 0 = on the ground, 1 = ground-ignored.
int detect_ground_contact(double joint_y, double ground_y, double perturbation, const PosecodeThresholds& t);
/// Signed 45-degree sector of the rotation about `axis` (relative to frame 0).
int classify_root_orientation(const Eigen::Matrix3d& relative_rotation, Axis axis, double perturbation,
                              const PosecodeThresholds& t);
/// Signed displacement bin, rounded half away from zero and clipped.
int classify_position(double displacement, double perturbation, const PosecodeThresholds& t);

/// Measures and classifies every instance over every frame. Noise is drawn
/// once per (instance index, frame) from a generator keyed on the seed.
std::vector<PosecodeTimeline> extract_posecode_timelines(const MotionSequence& seq,
                                                         std::span<const PosecodeInstance> instances,
                                                         const NoiseConfig& noise,
                                                         const PosecodeThresholds& thresholds);

std::vector<PosecodeInstance> default_instances();

/// The instance describing the same relation on the mirrored body.
PosecodeInstance mirror_instance(const PosecodeInstance& instance);

struct MirrorMatch {
  std::size_t index;
  bool reversed;  // pair stored in the opposite order
};
/// Locates mirror_instance(instances[i]) in the set, allowing a reversed pair
/// for distance and relative-position instances.
std::optional<MirrorMatch> find_mirror_instance(std::span<const PosecodeInstance> instances, std::size_t i);

/// Whether the mirrored body reports the opposite direction for the matched
/// instance (left/right swaps, reversed pairs, yaw and roll).
bool mirror_flips(const PosecodeInstance& instance, bool reversed);
/// Maps an ordinal of the matched instance to the value the mirrored body
/// produces: two-sided relations swap 0 and 1, signed bins negate.
int mirror_category(const PosecodeInstance& instance, bool reversed, int ordinal);

}  // namespace motionscript
