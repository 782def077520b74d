#include "motionscript/motion_io.hpp"

#include "motionscript/geometry.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace motionscript {

namespace {

using nlohmann::json;

constexpr double kIdentityYaw = 1e-12;

std::string frame_prefix(std::size_t frame) { return "frame " + std::to_string(frame) + ": "; }

std::string joint_count_message(std::size_t got) {
  return "joint count " + std::to_string(got) + " ≠ " + std::to_string(kNumJoints);
}

void check_fps(double fps) {
  if (!std::isfinite(fps) || fps <= 0.0) throw MotionError("fps must be positive");
}

void check_scale(double scale) {
  if (!std::isfinite(scale) || scale <= 0.0) throw MotionError("unit_scale must be positive");
}

MotionSequence parse_canonical_json(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content.begin(), content.end());
  } catch (const json::parse_error& e) {
    throw MotionError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MotionError("motion file must be a JSON object");

  MotionSequence seq;
  if (!doc.contains("fps") || !doc["fps"].is_number()) throw MotionError("field 'fps': missing or not a number");
  seq.fps = doc["fps"].get<double>();
  check_fps(seq.fps);

  double scale = 1.0;
  if (doc.contains("unit_scale")) {
    if (!doc["unit_scale"].is_number()) throw MotionError("field 'unit_scale': not a number");
    scale = doc["unit_scale"].get<double>();
    check_scale(scale);
  }

  const auto& skeleton = SkeletonSpec::canonical();
  if (!doc.contains("joints") || !doc["joints"].is_array()) throw MotionError("field 'joints': missing or not an array");
  const auto& joints = doc["joints"];
  if (joints.size() != static_cast<std::size_t>(kNumJoints))
    throw MotionError("field 'joints': " + joint_count_message(joints.size()));
  for (std::size_t j = 0; j < joints.size(); ++j) {
    if (!joints[j].is_string() || joints[j].get<std::string>() != skeleton.name(static_cast<int>(j)))
      throw MotionError("field 'joints'[" + std::to_string(j) + "]: expected '" +
                        skeleton.name(static_cast<int>(j)) + "'");
  }

  if (!doc.contains("frames") || !doc["frames"].is_array()) throw MotionError("field 'frames': missing or not an array");
  const auto& frames = doc["frames"];
  seq.frames.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& frame = frames[f];
    if (!frame.is_array()) throw MotionError(frame_prefix(f) + "not an array");
    if (frame.size() != static_cast<std::size_t>(kNumJoints))
      throw MotionError(frame_prefix(f) + joint_count_message(frame.size()));
    JointPositions<double> pose;
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const auto& p = frame[j];
      if (!p.is_array() || p.size() != 3)
        throw MotionError(frame_prefix(f) + "joint " + std::to_string(j) + ": expected [x, y, z]");
      for (std::size_t c = 0; c < 3; ++c) {
        if (!p[c].is_number())
          throw MotionError(frame_prefix(f) + "joint " + std::to_string(j) + ": coordinate is not a number");
        const double v = p[c].get<double>() * scale;
        if (!std::isfinite(v))
          throw MotionError(frame_prefix(f) + "joint " + std::to_string(j) + ": non-finite coordinate");
        pose(static_cast<int>(j), static_cast<int>(c)) = v;
      }
    }
    seq.frames.push_back(pose);
  }
  seq.validate();
  return seq;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

MotionSequence parse_flat_csv(std::string_view content, const ParseOptions& options) {
  const auto& skeleton = SkeletonSpec::canonical();
  MotionSequence seq;
  seq.fps = options.default_fps;
  double scale = 1.0;
  bool header_seen = false;
  std::vector<std::vector<Eigen::RowVector3d>> frames;

  auto close_frame_check = [&](std::size_t f) {
    if (frames[f].size() != static_cast<std::size_t>(kNumJoints))
      throw MotionError(frame_prefix(f) + joint_count_message(frames[f].size()));
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto end = content.find('\n', pos);
    std::string_view raw = content.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? content.size() + 1 : end + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      std::string_view key = trim(body.substr(0, eq));
      std::string_view value = trim(body.substr(eq + 1));
      double v = 0.0;
      if (key == "fps" || key == "unit_scale") {
        if (!parse_number(value, v)) throw MotionError(where + "invalid " + std::string(key) + " value");
        if (key == "fps") {
          check_fps(v);
          seq.fps = v;
        } else {
          check_scale(v);
          scale = v;
        }
      }
      continue;
    }

    if (!header_seen) {
      if (line != "frame,joint,x,y,z") throw MotionError(where + "expected header 'frame,joint,x,y,z'");
      header_seen = true;
      continue;
    }

    auto fields = split_commas(line);
    if (fields.size() != 5) throw MotionError(where + "expected 5 fields, got " + std::to_string(fields.size()));
    std::size_t frame = 0;
    if (!parse_number(fields[0], frame)) throw MotionError(where + "field 'frame': not a non-negative integer");
    if (frame > frames.size()) throw MotionError(where + "frame " + std::to_string(frame) + " out of order");
    if (frame == frames.size()) {
      if (frame > 0) close_frame_check(frame - 1);
      frames.emplace_back();
    } else if (frame + 1 != frames.size()) {
      throw MotionError(where + "frame " + std::to_string(frame) + " out of order");
    }
    auto& joints = frames[frame];
    if (joints.size() >= static_cast<std::size_t>(kNumJoints))
      throw MotionError(frame_prefix(frame) + joint_count_message(joints.size() + 1));
    const std::string& expected = skeleton.name(static_cast<int>(joints.size()));
    if (fields[1] != expected)
      throw MotionError(where + "field 'joint': expected '" + expected + "', got '" + std::string(fields[1]) + "'");
    Eigen::RowVector3d p;
    for (int c = 0; c < 3; ++c) {
      double v = 0.0;
      if (!parse_number(fields[static_cast<std::size_t>(c) + 2], v))
        throw MotionError(where + "field '" + std::string(1, "xyz"[c]) + "': not a number");
      v *= scale;
      if (!std::isfinite(v)) throw MotionError(where + "non-finite coordinate");
      p(c) = v;
    }
    joints.push_back(p);
  }
  if (!header_seen) throw MotionError("missing header 'frame,joint,x,y,z'");
  if (!frames.empty()) close_frame_check(frames.size() - 1);

  seq.frames.reserve(frames.size());
  for (const auto& joints : frames) {
    JointPositions<double> pose;
    for (int j = 0; j < kNumJoints; ++j) pose.row(j) = joints[static_cast<std::size_t>(j)];
    seq.frames.push_back(pose);
  }
  seq.validate();
  return seq;
}

}  // namespace

void MotionSequence::validate() const {
  check_fps(fps);
  if (frames.size() < 2)
    throw MotionError("sequence needs at least 2 frames, got " + std::to_string(frames.size()));
  for (std::size_t f = 0; f < frames.size(); ++f)
    if (!frames[f].allFinite()) throw MotionError(frame_prefix(f) + "non-finite coordinate");
}

MotionFormat parse_motion_format(std::string_view name) {
  if (name == "canonical-json") return MotionFormat::canonical_json;
  if (name == "flat-csv") return MotionFormat::flat_csv;
  throw std::invalid_argument("unknown motion format '" + std::string(name) + "'");
}

std::string_view format_name(MotionFormat format) {
  return format == MotionFormat::canonical_json ? "canonical-json" : "flat-csv";
}

MotionSequence parse_motion(std::string_view content, MotionFormat format, const ParseOptions& options) {
  return format == MotionFormat::canonical_json ? parse_canonical_json(content)
                                                : parse_flat_csv(content, options);
}

MotionSequence load_motion_file(const std::filesystem::path& path, MotionFormat format,
                                const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MotionError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_motion(buffer.str(), format, options);
}

std::string to_canonical_json(const MotionSequence& seq) {
  json doc;
  doc["fps"] = seq.fps;
  doc["joints"] = SkeletonSpec::canonical().joint_names();
  json frames = json::array();
  for (const auto& pose : seq.frames) {
    json frame = json::array();
    for (int j = 0; j < kNumJoints; ++j) frame.push_back({pose(j, 0), pose(j, 1), pose(j, 2)});
    frames.push_back(std::move(frame));
  }
  doc["frames"] = std::move(frames);
  return doc.dump();
}

std::string to_flat_csv(const MotionSequence& seq) {
  const auto& skeleton = SkeletonSpec::canonical();
  std::ostringstream out;
  out.precision(17);
  out << "# fps=" << seq.fps << "\nframe,joint,x,y,z\n";
  for (int f = 0; f < seq.frame_count(); ++f)
    for (int j = 0; j < kNumJoints; ++j) {
      const auto& p = seq.frames[static_cast<std::size_t>(f)];
      out << f << ',' << skeleton.name(j) << ',' << p(j, 0) << ',' << p(j, 1) << ',' << p(j, 2) << '\n';
    }
  return out.str();
}

MotionSequence normalize_sequence(const MotionSequence& seq, std::vector<std::string>* warnings) {
  seq.validate();
  const auto& first = seq.frames.front();
  const Eigen::Vector3d offset(first(joint::pelvis, 0), 0.0, first(joint::pelvis, 2));

  double yaw = 0.0;
  if (auto heading = geometry::facing_yaw(first)) {
    yaw = -*heading;
  } else if (warnings) {
    warnings->push_back("frame 0: left and right hip coincide; facing direction unknown, rotation skipped");
  }
  const bool rotate = std::abs(yaw) > kIdentityYaw;

  MotionSequence out;
  out.fps = seq.fps;
  out.normalized = true;
  out.frames.reserve(seq.frames.size());
  for (const auto& pose : seq.frames) {
    if (rotate) {
      out.frames.push_back(geometry::rotate_about_y(pose, yaw, offset));
    } else {
      JointPositions<double> moved = pose;
      moved.col(0).array() -= offset.x();
      moved.col(2).array() -= offset.z();
      out.frames.push_back(moved);
    }
  }
  return out;
}

MotionSequence mirror_sequence(const MotionSequence& seq) {
  const auto& skeleton = SkeletonSpec::canonical();
  MotionSequence out = seq;
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const auto& src = seq.frames[f];
    auto& dst = out.frames[f];
    for (int j = 0; j < kNumJoints; ++j) {
      const int m = skeleton.mirror(j);
      dst(j, 0) = -src(m, 0);
      dst(j, 1) = src(m, 1);
      dst(j, 2) = src(m, 2);
    }
  }
  return out;
}

MotionSequence transform_sequence(const MotionSequence& seq, double yaw_radians,
                                  const Eigen::Vector3d& translation) {
  MotionSequence out = seq;
  out.normalized = false;
  for (auto& pose : out.frames) {
    pose = geometry::rotate_about_y(pose, yaw_radians, Eigen::Vector3d::Zero().eval());
    pose.rowwise() += translation.transpose();
  }
  return out;
}

}  // namespace motionscript
