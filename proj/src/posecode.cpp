#include "motionscript/posecode.hpp"

#include "motionscript/geometry.hpp"
#include "motionscript/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace motionscript {

namespace {

constexpr std::uint64_t kPosecodeNoiseStream = 1;

std::size_t arity(PosecodeKind kind) {
  switch (kind) {
    case PosecodeKind::angle:
      return 3;
    case PosecodeKind::distance:
    case PosecodeKind::relative_position:
    case PosecodeKind::pitch_roll:
      return 2;
    case PosecodeKind::ground_contact:
    case PosecodeKind::orientation:
    case PosecodeKind::position:
      return 1;
  }
  return 0;
}

bool has_axis(PosecodeKind kind) {
  return kind == PosecodeKind::relative_position || kind == PosecodeKind::orientation ||
         kind == PosecodeKind::position;
}

bool is_pair(PosecodeKind kind) {
  return kind == PosecodeKind::distance || kind == PosecodeKind::relative_position;
}

bool angular_noise(PosecodeKind kind) {
  return kind == PosecodeKind::angle || kind == PosecodeKind::pitch_roll || kind == PosecodeKind::orientation;
}

int axis_index(Axis axis) { return static_cast<int>(axis); }

Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw std::invalid_argument("unknown axis '" + std::string(s) + "'");
}

PosecodeKind parse_kind(std::string_view s) {
  for (auto k : {PosecodeKind::angle, PosecodeKind::distance, PosecodeKind::relative_position,
                 PosecodeKind::pitch_roll, PosecodeKind::ground_contact, PosecodeKind::orientation,
                 PosecodeKind::position})
    if (kind_name(k) == s) return k;
  throw std::invalid_argument("unknown posecode kind '" + std::string(s) + "'");
}

PositionReference parse_reference(std::string_view s) {
  if (s == "root_relative") return PositionReference::root_relative;
  if (s == "global") return PositionReference::global;
  throw std::invalid_argument("unknown position reference '" + std::string(s) + "'");
}

int orientation_max_sector(const PosecodeThresholds& t) {
  return static_cast<int>(std::lround(180.0 / t.orientation_sector));
}

std::string signed_label(double value, const char* unit, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.*f%s", decimals, value, unit);
  return buf;
}

}  // namespace

std::string_view kind_name(PosecodeKind kind) {
  switch (kind) {
    case PosecodeKind::angle:
      return "angle";
    case PosecodeKind::distance:
      return "distance";
    case PosecodeKind::relative_position:
      return "relative_position";
    case PosecodeKind::pitch_roll:
      return "pitch_roll";
    case PosecodeKind::ground_contact:
      return "ground_contact";
    case PosecodeKind::orientation:
      return "orientation";
    case PosecodeKind::position:
      return "position";
  }
  return "?";
}

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::x:
      return "x";
    case Axis::y:
      return "y";
    case Axis::z:
      return "z";
  }
  return "?";
}

std::string_view reference_name(PositionReference reference) {
  return reference == PositionReference::global ? "global" : "root_relative";
}

std::string PosecodeInstance::key() const {
  const auto& skeleton = SkeletonSpec::canonical();
  std::string k(kind_name(kind));
  if (has_axis(kind)) k += ":" + std::string(axis_name(axis));
  if (kind == PosecodeKind::position) k += ":" + std::string(reference_name(reference));
  k += ":";
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (i) k += ",";
    k += skeleton.name(joints[i]);
  }
  return k;
}

std::vector<int> PosecodeInstance::key_joints() const {
  if (kind == PosecodeKind::angle) return {joints.at(1)};
  return joints;
}

void PosecodeInstance::validate() const {
  if (joints.size() != arity(kind))
    throw std::invalid_argument(std::string(kind_name(kind)) + " posecode needs " + std::to_string(arity(kind)) +
                                " joints, got " + std::to_string(joints.size()));
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (joints[i] < 0 || joints[i] >= kNumJoints)
      throw std::invalid_argument("posecode joint index out of range");
    for (std::size_t k = 0; k < i; ++k)
      if (joints[k] == joints[i]) throw std::invalid_argument("posecode joints must be distinct");
  }
  if (kind == PosecodeKind::orientation && joints[0] != joint::pelvis)
    throw std::invalid_argument("orientation posecodes are measured on the pelvis");
}

PosecodeInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("empty posecode instance");
  const auto& skeleton = SkeletonSpec::canonical();

  PosecodeInstance inst;
  inst.kind = parse_kind(tokens[0]);
  std::size_t next = 1;
  auto take = [&]() -> const std::string& {
    if (next >= tokens.size())
      throw std::invalid_argument("posecode instance '" + std::string(text) + "' is missing fields");
    return tokens[next++];
  };
  if (has_axis(inst.kind)) inst.axis = parse_axis(take());
  if (inst.kind == PosecodeKind::position) inst.reference = parse_reference(take());
  if (inst.kind == PosecodeKind::orientation) {
    inst.joints = {joint::pelvis};
  } else {
    while (next < tokens.size()) inst.joints.push_back(skeleton.index_of(take()));
  }
  if (next != tokens.size())
    throw std::invalid_argument("posecode instance '" + std::string(text) + "' has trailing fields");
  inst.validate();
  return inst;
}

std::string format_instance(const PosecodeInstance& instance) {
  const auto& skeleton = SkeletonSpec::canonical();
  std::string s(kind_name(instance.kind));
  if (has_axis(instance.kind)) s += " " + std::string(axis_name(instance.axis));
  if (instance.kind == PosecodeKind::position) s += " " + std::string(reference_name(instance.reference));
  if (instance.kind != PosecodeKind::orientation)
    for (int j : instance.joints) s += " " + skeleton.name(j);
  return s;
}

std::string_view PosecodeTimeline::name_of(int ordinal) const {
  if (ordinal == kIgnored) return "ignored";
  const auto idx = static_cast<std::size_t>(ordinal - min_ordinal);
  return idx < category_names.size() ? std::string_view(category_names[idx]) : std::string_view("?");
}

void NoiseConfig::validate() const {
  if (!(angle_sigma >= 0.0) || !(distance_sigma >= 0.0))
    throw std::invalid_argument("noise sigmas must be non-negative");
}

void PosecodeThresholds::validate() const {
  if (!std::is_sorted(angle_edges.begin(), angle_edges.end()) || angle_edges.front() <= 0.0 ||
      angle_edges.back() >= 180.0)
    throw std::invalid_argument("angle edges must be ascending inside (0, 180)");
  if (!std::is_sorted(distance_edges.begin(), distance_edges.end()) || distance_edges.front() <= 0.0)
    throw std::invalid_argument("distance edges must be positive and ascending");
  if (relative_position_band < 0.0) throw std::invalid_argument("relative position band must be non-negative");
  if (!(0.0 < vertical_cone && vertical_cone <= horizontal_cone && horizontal_cone < 90.0))
    throw std::invalid_argument("pitch/roll cones must satisfy 0 < vertical <= horizontal < 90");
  if (ground_epsilon <= 0.0) throw std::invalid_argument("ground epsilon must be positive");
  if (orientation_sector <= 0.0 || orientation_sector > 180.0)
    throw std::invalid_argument("orientation sector must be in (0, 180]");
  if (position_step <= 0.0 || position_max_bin < 1)
    throw std::invalid_argument("position step must be positive and max bin at least 1");
}

std::vector<std::string> category_names(const PosecodeInstance& instance, const PosecodeThresholds& t,
                                        int* min_ordinal) {
  int lo = 0;
  std::vector<std::string> names;
  switch (instance.kind) {
    case PosecodeKind::angle:
      names = {"straight", "slightly bent", "partially bent", "bent at a right angle", "almost completely bent",
               "completely bent"};
      break;
    case PosecodeKind::distance:
      names = {"close", "shoulder width", "spread", "wide apart"};
      break;
    case PosecodeKind::relative_position:
      switch (instance.axis) {
        case Axis::x:
          names = {"right of", "left of"};
          break;
        case Axis::y:
          names = {"below", "above"};
          break;
        case Axis::z:
          names = {"behind", "in front of"};
          break;
      }
      break;
    case PosecodeKind::pitch_roll:
      names = {"vertical", "horizontal"};
      break;
    case PosecodeKind::ground_contact:
      names = {"on the ground", "ground-ignored"};
      break;
    case PosecodeKind::orientation: {
      const int m = orientation_max_sector(t);
      lo = -m;
      for (int s = -m; s <= m; ++s) names.push_back(signed_label(s * t.orientation_sector, " deg", 0));
      break;
    }
    case PosecodeKind::position: {
      lo = -t.position_max_bin;
      for (int b = -t.position_max_bin; b <= t.position_max_bin; ++b)
        names.push_back(signed_label(b * t.position_step, " m", 2));
      break;
    }
  }
  if (min_ordinal) *min_ordinal = lo;
  return names;
}

std::optional<double> measure_angle(const JointPositions<double>& frame, int a, int vertex, int b) {
  return geometry::interior_angle_deg(frame.row(a), frame.row(vertex), frame.row(b));
}

int classify_angle(double degrees, double perturbation, const PosecodeThresholds& t) {
  const double d = degrees + perturbation;
  // edges ascend; count how many lower edges the angle clears
  int cleared = 0;
  for (double edge : t.angle_edges)
    if (d >= edge) ++cleared;
  return static_cast<int>(t.angle_edges.size()) - cleared;
}

int classify_distance(double distance, double shoulder_width, double perturbation, const PosecodeThresholds& t) {
  if (!(shoulder_width > 0.0)) return kIgnored;
  const double ratio = (distance + perturbation) / shoulder_width;
  int bin = 0;
  for (double edge : t.distance_edges)
    if (ratio >= edge) ++bin;
  return bin;
}

int classify_relative_position(const Eigen::RowVector3d& a, const Eigen::RowVector3d& b, Axis axis,
                               double perturbation, const PosecodeThresholds& t) {
  const double delta = a(axis_index(axis)) - b(axis_index(axis)) + perturbation;
  if (delta > t.relative_position_band) return 1;
  if (delta < -t.relative_position_band) return 0;
  return kIgnored;
}

int classify_pitch_roll(const Eigen::RowVector3d& top, const Eigen::RowVector3d& bottom, double perturbation,
                        const PosecodeThresholds& t) {
  const auto tilt = geometry::angle_from_vertical_deg(top, bottom);
  if (!tilt) return kIgnored;
  const double d = *tilt + perturbation;
  if (d < t.vertical_cone) return 0;
  if (d > t.horizontal_cone) return 1;
  return kIgnored;
}

int detect_ground_contact(double joint_y, double ground_y, double perturbation, const PosecodeThresholds& t) {
  return (joint_y - ground_y + perturbation) < t.ground_epsilon ? 0 : 1;
}

int classify_root_orientation(const Eigen::Matrix3d& relative_rotation, Axis axis, double perturbation,
                              const PosecodeThresholds& t) {
  const auto ypr = geometry::yaw_pitch_roll_deg(relative_rotation);
  double angle = 0.0;
  switch (axis) {
    case Axis::x:
      angle = ypr.pitch;
      break;
    case Axis::y:
      angle = ypr.yaw;
      break;
    case Axis::z:
      angle = ypr.roll;
      break;
  }
  // sectors centred on multiples of the sector width, lower edge inclusive
  const int m = orientation_max_sector(t);
  const int sector = static_cast<int>(std::floor((angle + perturbation) / t.orientation_sector + 0.5));
  return std::clamp(sector, -m, m);
}

int classify_position(double displacement, double perturbation, const PosecodeThresholds& t) {
  const double v = (displacement + perturbation) / t.position_step;
  const double rounded = std::copysign(std::floor(std::abs(v) + 0.5), v);
  const double clipped = std::clamp(rounded, -static_cast<double>(t.position_max_bin),
                                    static_cast<double>(t.position_max_bin));
  return static_cast<int>(clipped);
}

std::vector<PosecodeTimeline> extract_posecode_timelines(const MotionSequence& seq,
                                                         std::span<const PosecodeInstance> instances,
                                                         const NoiseConfig& noise,
                                                         const PosecodeThresholds& thresholds) {
  seq.validate();
  const int frames = seq.frame_count();
  const auto& first = seq.frames.front();
  const double shoulder_width = (first.row(joint::left_shoulder) - first.row(joint::right_shoulder)).norm();

  double ground_y = first(0, 1);
  for (const auto& pose : seq.frames) ground_y = std::min(ground_y, pose.col(1).minCoeff());

  const auto root0 = geometry::root_frame(first);

  std::vector<PosecodeTimeline> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    inst.validate();
    PosecodeTimeline timeline;
    timeline.instance = inst;
    timeline.category_names = category_names(inst, thresholds, &timeline.min_ordinal);
    timeline.categories.resize(static_cast<std::size_t>(frames));

    const double sigma = angular_noise(inst.kind) ? noise.angle_sigma : noise.distance_sigma;
    const auto& j = inst.joints;
    for (int f = 0; f < frames; ++f) {
      const auto& pose = seq.frames[static_cast<std::size_t>(f)];
      const double eps = noise.enabled && sigma > 0.0
                             ? sigma * keyed_normal(noise.seed, kPosecodeNoiseStream, i, static_cast<std::uint64_t>(f))
                             : 0.0;
      int category = kIgnored;
      switch (inst.kind) {
        case PosecodeKind::angle:
          if (auto deg = measure_angle(pose, j[0], j[1], j[2])) category = classify_angle(*deg, eps, thresholds);
          break;
        case PosecodeKind::distance:
          category = classify_distance((pose.row(j[0]) - pose.row(j[1])).norm(), shoulder_width, eps, thresholds);
          break;
        case PosecodeKind::relative_position:
          category = classify_relative_position(pose.row(j[0]), pose.row(j[1]), inst.axis, eps, thresholds);
          break;
        case PosecodeKind::pitch_roll:
          category = classify_pitch_roll(pose.row(j[0]), pose.row(j[1]), eps, thresholds);
          break;
        case PosecodeKind::ground_contact:
          category = detect_ground_contact(pose(j[0], 1), ground_y, eps, thresholds);
          break;
        case PosecodeKind::orientation:
          if (root0) {
            if (auto frame = geometry::root_frame(pose))
              category = classify_root_orientation(*frame * root0->transpose(), inst.axis, eps, thresholds);
          }
          break;
        case PosecodeKind::position: {
          const int a = axis_index(inst.axis);
          const double value = inst.reference == PositionReference::global ? pose(j[0], a) - first(j[0], a)
                                                                            : pose(j[0], a) - pose(joint::pelvis, a);
          category = classify_position(value, eps, thresholds);
          break;
        }
      }
      timeline.categories[static_cast<std::size_t>(f)] = category;
    }
    out.push_back(std::move(timeline));
  }
  return out;
}

std::vector<PosecodeInstance> default_instances() {
  std::vector<std::string> lines = {
      "angle left_shoulder left_elbow left_wrist",
      "angle right_shoulder right_elbow right_wrist",
      "angle left_hip left_knee left_ankle",
      "angle right_hip right_knee right_ankle",

      "distance left_elbow right_elbow",
      "distance left_wrist right_wrist",
      "distance left_knee right_knee",
      "distance left_ankle right_ankle",
      "distance left_wrist left_shoulder",
      "distance right_wrist right_shoulder",
      "distance left_wrist right_shoulder",
      "distance right_wrist left_shoulder",
      "distance left_wrist right_elbow",
      "distance right_wrist left_elbow",
      "distance left_wrist left_knee",
      "distance right_wrist right_knee",
      "distance left_wrist right_foot",
      "distance right_wrist left_foot",
      "distance left_elbow right_foot",
      "distance right_elbow left_foot",
      "distance left_wrist head",
      "distance right_wrist head",

      "relative_position x left_wrist right_wrist",
      "relative_position y left_wrist right_wrist",
      "relative_position z left_wrist right_wrist",
      "relative_position x left_ankle right_ankle",
      "relative_position y left_ankle right_ankle",
      "relative_position z left_ankle right_ankle",
      "relative_position x left_wrist head",
      "relative_position x right_wrist head",
      "relative_position y left_wrist head",
      "relative_position y right_wrist head",
      "relative_position z left_wrist head",
      "relative_position z right_wrist head",
      "relative_position y left_wrist pelvis",
      "relative_position y right_wrist pelvis",

      "pitch_roll left_shoulder left_elbow",
      "pitch_roll right_shoulder right_elbow",
      "pitch_roll left_elbow left_wrist",
      "pitch_roll right_elbow right_wrist",
      "pitch_roll left_hip left_knee",
      "pitch_roll right_hip right_knee",
      "pitch_roll left_knee left_ankle",
      "pitch_roll right_knee right_ankle",
      "pitch_roll neck pelvis",

      "ground_contact left_ankle",
      "ground_contact right_ankle",
      "ground_contact left_foot",
      "ground_contact right_foot",
      "ground_contact left_knee",
      "ground_contact right_knee",
      "ground_contact left_wrist",
      "ground_contact right_wrist",

      "orientation x",
      "orientation y",
      "orientation z",

      "position x global pelvis",
      "position y global pelvis",
      "position z global pelvis",
  };
  for (const char* j : {"left_wrist", "right_wrist", "left_ankle", "right_ankle"})
    for (const char* ref : {"root_relative", "global"})
      for (const char* ax : {"x", "y", "z"})
        lines.push_back(std::string("position ") + ax + " " + ref + " " + j);

  std::vector<PosecodeInstance> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(parse_instance(l));
  return out;
}

PosecodeInstance mirror_instance(const PosecodeInstance& instance) {
  const auto& skeleton = SkeletonSpec::canonical();
  PosecodeInstance m = instance;
  for (auto& j : m.joints) j = skeleton.mirror(j);
  return m;
}

std::optional<MirrorMatch> find_mirror_instance(std::span<const PosecodeInstance> instances, std::size_t i) {
  const PosecodeInstance target = mirror_instance(instances[i]);
  for (std::size_t k = 0; k < instances.size(); ++k)
    if (instances[k] == target) return MirrorMatch{k, false};
  if (is_pair(target.kind)) {
    PosecodeInstance reversed = target;
    std::swap(reversed.joints[0], reversed.joints[1]);
    for (std::size_t k = 0; k < instances.size(); ++k)
      if (instances[k] == reversed) return MirrorMatch{k, true};
  }
  return std::nullopt;
}

bool mirror_flips(const PosecodeInstance& instance, bool reversed) {
  switch (instance.kind) {
    case PosecodeKind::relative_position:
      return (instance.axis == Axis::x) != reversed;
    case PosecodeKind::position:
      return instance.axis == Axis::x;
    case PosecodeKind::orientation:
      return instance.axis != Axis::x;
    default:
      return false;
  }
}

int mirror_category(const PosecodeInstance& instance, bool reversed, int ordinal) {
  if (ordinal == kIgnored || !mirror_flips(instance, reversed)) return ordinal;
  return instance.kind == PosecodeKind::relative_position ? 1 - ordinal : -ordinal;
}

}  // namespace motionscript
