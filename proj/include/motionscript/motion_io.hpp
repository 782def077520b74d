#pragma once

#include "motionscript/skeleton.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace motionscript {

/// A joint-trajectory sequence on the canonical skeleton. Positions are in
/// meters, y up, z forward, with the body's left side towards +x.
struct MotionSequence {
  double fps = 20.0;
  std::vector<JointPositions<double>> frames;
  bool normalized = false;

  int frame_count() const { return static_cast<int>(frames.size()); }
  Eigen::RowVector3d position(int frame, int joint) const {
    return frames[static_cast<std::size_t>(frame)].row(joint);
  }

  /// Throws MotionError when fps is not positive, there are fewer than two
  /// frames or any coordinate is non-finite.
  void validate() const;
};

class MotionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MotionFormat { canonical_json, flat_csv };

MotionFormat parse_motion_format(std::string_view name);
std::string_view format_name(MotionFormat format);

struct ParseOptions {
  // Flat CSV carries no frame rate unless a "# fps=<value>" line is present.
  double default_fps = 20.0;
};

/// Parses a motion file body. The result is validated but not normalized.
MotionSequence parse_motion(std::string_view content, MotionFormat format,
                            const ParseOptions& options = {});
MotionSequence load_motion_file(const std::filesystem::path& path, MotionFormat format,
                                const ParseOptions& options = {});

std::string to_canonical_json(const MotionSequence& seq);
std::string to_flat_csv(const MotionSequence& seq);

/// Moves the frame-0 root to x = z = 0 and turns the whole sequence about
/// the vertical axis so the body faces +z at frame 0. Heights are kept.
/// When the frame-0 hips coincide the rotation is skipped and a message is
/// appended to `warnings`.
MotionSequence normalize_sequence(const MotionSequence& seq,
                                  std::vector<std::string>* warnings = nullptr);

/// Reflects x and swaps left/right joint channels.
MotionSequence mirror_sequence(const MotionSequence& seq);

/// Applies p' = Ry(yaw) p + translation to every joint of every frame.
MotionSequence transform_sequence(const MotionSequence& seq, double yaw_radians,
                                  const Eigen::Vector3d& translation);

}  // namespace motionscript
