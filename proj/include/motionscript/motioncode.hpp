#pragma once

#include "motionscript/motion_io.hpp"
#include "motionscript/posecode.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motionscript {

enum class Family { angular, proximity, spatial_relation, displacement, rotation };
enum class Intensity { stationary, slight, moderate, significant };
enum class VelocityClass { very_slow, slow, moderate, fast, very_fast };

std::string_view family_name(Family family);
std::string_view intensity_name(Intensity intensity);
std::string_view velocity_name(VelocityClass velocity);
Family parse_family(std::string_view name);
Intensity parse_intensity(std::string_view name);
VelocityClass parse_velocity(std::string_view name);

/// Motion family fed by a posecode kind; pitch/roll and ground contact only
/// describe static poses.
std::optional<Family> family_of(PosecodeKind kind);

struct SegmentationParams {
  int min_run = 3;          // frames a new category must persist to count
  int min_transitions = 1;  // smallest |M_S| kept
  int max_range = 15;       // longest hold (frames) between two changes of one segment
  void validate() const;
};

/// One same-direction run of counted category transitions. The interval
/// also covers up to max_range held frames before the first change and
/// after the last one; a hold between two segments is split evenly, so
/// consecutive segments satisfy t_end <= next t_start.
struct MotionSegment {
  int t_start = 0;
  int t_end = 0;
  int direction = 0;  // +1 or -1
  int spatial = 0;    // signed sum of ordinal changes
  bool operator==(const MotionSegment&) const = default;
};

/// Replaces ignored frames with the closest preceding labelled category
/// (leading ignored frames take the first label). All-ignored input yields
/// an empty vector.
std::vector<int> fill_ignored(std::span<const int> categories);

/// Hysteresis: a run of a new category only takes over once it lasts at
/// least `min_run` frames; shorter runs are rewritten to the category in
/// force. The first run is always in force.
std::vector<int> stabilize_categories(std::span<const int> filled, int min_run);

std::vector<MotionSegment> detect_motion_segments(std::span<const int> categories, const SegmentationParams& params);

/// Sum of counted category changes over [t_start, t_end - 1].
int compute_spatial_attribute(const MotionSegment& segment, std::span<const int> categories, int min_run);

struct VelocityEdges {
  // Transitions per second: very slow < 0.5 <= slow < 1.5 <= moderate < 3 <= fast < 6 <= very fast.
  std::array<double, 4> edges{0.5, 1.5, 3.0, 6.0};
  void validate() const;
};

struct VelocityAttribute {
  double per_frame;  // M_V
  VelocityClass velocity_class;
};

VelocityAttribute compute_velocity_attribute(int spatial, int t_start, int t_end, double fps,
                                             const VelocityEdges& edges);

struct IntensityEdges {
  // |M_S| at which slight, moderate and significant begin.
  std::array<int, 3> edges{1, 2, 3};
  Intensity classify(int magnitude) const;
  void validate() const;
};

struct MotioncodeConfig {
  int min_run = 3;
  int min_transitions = 1;
  double max_range_seconds = 0.75;
  VelocityEdges velocity;
  IntensityEdges intensity;
  double velocity_edge_sigma = 0.1;  // multiplicative noise on velocity edges

  SegmentationParams segmentation(double fps) const;
  void validate() const;
};

struct Motioncode {
  Family family = Family::angular;
  std::size_t instance_index = 0;
  PosecodeInstance instance;
  int t_start = 0;
  int t_end = 0;
  int spatial = 0;        // M_S
  double velocity = 0.0;  // M_V, transitions per frame
  VelocityClass velocity_class = VelocityClass::moderate;
  std::optional<Intensity> intensity;  // none for spatial relations
  std::string direction_label;
  int start_category = 0;
  int end_category = 0;

  int duration() const { return t_end - t_start; }
  int magnitude() const { return spatial < 0 ? -spatial : spatial; }
};

/// Direction label for a family/instance and the sign of M_S.
std::string direction_label(Family family, const PosecodeInstance& instance, int sign);
/// Every label a family can produce for the given instance, positive first.
std::array<std::string, 2> direction_labels(Family family, const PosecodeInstance& instance);
/// Swaps left/right and clockwise/counter-clockwise wording.
std::string mirror_label(std::string_view label);

/// Segments every timeline and turns the segments into motioncodes, in
/// canonical order (instance index, then t_start).
std::vector<Motioncode> build_motioncodes(std::span<const PosecodeTimeline> timelines, const MotionSequence& seq,
                                          const MotioncodeConfig& config, const NoiseConfig& noise);

}  // namespace motionscript
