#include "motionscript/motioncode.hpp"

#include "motionscript/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motionscript {

namespace {

constexpr std::uint64_t kVelocityNoiseStream = 2;

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::array<E, N>& values, std::string_view (*to_name)(E),
             const char* what) {
  for (E v : values)
    if (to_name(v) == name) return v;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::angular:
      return "angular";
    case Family::proximity:
      return "proximity";
    case Family::spatial_relation:
      return "spatial-relation";
    case Family::displacement:
      return "displacement";
    case Family::rotation:
      return "rotation";
  }
  return "?";
}

std::string_view intensity_name(Intensity intensity) {
  switch (intensity) {
    case Intensity::stationary:
      return "stationary";
    case Intensity::slight:
      return "slight";
    case Intensity::moderate:
      return "moderate";
    case Intensity::significant:
      return "significant";
  }
  return "?";
}

std::string_view velocity_name(VelocityClass velocity) {
  switch (velocity) {
    case VelocityClass::very_slow:
      return "very slow";
    case VelocityClass::slow:
      return "slow";
    case VelocityClass::moderate:
      return "moderate";
    case VelocityClass::fast:
      return "fast";
    case VelocityClass::very_fast:
      return "very fast";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  return parse_enum(name,
                    std::array{Family::angular, Family::proximity, Family::spatial_relation, Family::displacement,
                               Family::rotation},
                    family_name, "motion family");
}

Intensity parse_intensity(std::string_view name) {
  return parse_enum(name,
                    std::array{Intensity::stationary, Intensity::slight, Intensity::moderate, Intensity::significant},
                    intensity_name, "intensity");
}

VelocityClass parse_velocity(std::string_view name) {
  return parse_enum(name,
                    std::array{VelocityClass::very_slow, VelocityClass::slow, VelocityClass::moderate,
                               VelocityClass::fast, VelocityClass::very_fast},
                    velocity_name, "velocity class");
}

std::optional<Family> family_of(PosecodeKind kind) {
  switch (kind) {
    case PosecodeKind::angle:
      return Family::angular;
    case PosecodeKind::distance:
      return Family::proximity;
    case PosecodeKind::relative_position:
      return Family::spatial_relation;
    case PosecodeKind::position:
      return Family::displacement;
    case PosecodeKind::orientation:
      return Family::rotation;
    case PosecodeKind::pitch_roll:
    case PosecodeKind::ground_contact:
      return std::nullopt;
  }
  return std::nullopt;
}

void SegmentationParams::validate() const {
  if (min_run < 1) throw std::invalid_argument("min_run must be at least 1");
  if (min_transitions < 1) throw std::invalid_argument("min_transitions must be at least 1");
  if (max_range < 0) throw std::invalid_argument("max_range must be non-negative");
}

std::vector<int> fill_ignored(std::span<const int> categories) {
  auto first = std::find_if(categories.begin(), categories.end(), [](int c) { return c != kIgnored; });
  if (first == categories.end()) return {};
  std::vector<int> out(categories.begin(), categories.end());
  int last = *first;
  for (auto& c : out) {
    if (c == kIgnored)
      c = last;
    else
      last = c;
  }
  return out;
}

std::vector<int> stabilize_categories(std::span<const int> filled, int min_run) {
  std::vector<int> out(filled.begin(), filled.end());
  if (out.empty()) return out;
  int in_force = filled[0];
  std::size_t start = 0;
  while (start < filled.size()) {
    std::size_t end = start;
    while (end < filled.size() && filled[end] == filled[start]) ++end;
    if (start == 0 || static_cast<int>(end - start) >= min_run) in_force = filled[start];
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(start), out.begin() + static_cast<std::ptrdiff_t>(end),
              in_force);
    start = end;
  }
  return out;
}

std::vector<MotionSegment> detect_motion_segments(std::span<const int> categories, const SegmentationParams& params) {
  params.validate();
  const auto filled = fill_ignored(categories);
  if (filled.size() < 2) return {};
  const auto stable = stabilize_categories(filled, params.min_run);
  const int frames = static_cast<int>(stable.size());

  struct Transition {
    int t;
    int delta;
  };
  std::vector<Transition> tr;
  for (int t = 1; t < frames; ++t) {
    const int delta = stable[static_cast<std::size_t>(t)] - stable[static_cast<std::size_t>(t) - 1];
    if (delta != 0) tr.push_back({t, delta});
  }
  const auto sign = [](int v) { return v > 0 ? 1 : -1; };

  // Frames of the held category a segment may claim next to its first or
  // last change; a hold between two changes is shared half and half.
  const auto context = [&](int hold, bool shared) {
    return std::min(params.max_range, shared ? (hold - 1) / 2 : hold - 1);
  };

  std::vector<MotionSegment> out;
  for (std::size_t first = 0; first < tr.size();) {
    std::size_t last = first;
    while (last + 1 < tr.size() && sign(tr[last + 1].delta) == sign(tr[first].delta) &&
           tr[last + 1].t - tr[last].t - 1 <= params.max_range)
      ++last;

    const int before = first == 0 ? 0 : tr[first - 1].t;
    const int after = last + 1 == tr.size() ? frames : tr[last + 1].t;
    MotionSegment seg;
    seg.t_start = tr[first].t - 1 - context(tr[first].t - before, first != 0);
    seg.t_end = tr[last].t + context(after - tr[last].t, last + 1 != tr.size());
    seg.direction = sign(tr[first].delta);
    for (std::size_t k = first; k <= last; ++k) seg.spatial += tr[k].delta;
    if (std::abs(seg.spatial) >= params.min_transitions) out.push_back(seg);
    first = last + 1;
  }
  return out;
}

int compute_spatial_attribute(const MotionSegment& segment, std::span<const int> categories, int min_run) {
  const auto stable = stabilize_categories(fill_ignored(categories), min_run);
  int sum = 0;
  for (int t = segment.t_start; t < segment.t_end; ++t)
    sum += stable[static_cast<std::size_t>(t) + 1] - stable[static_cast<std::size_t>(t)];
  return sum;
}

void VelocityEdges::validate() const {
  if (!std::is_sorted(edges.begin(), edges.end()) || edges.front() <= 0.0)
    throw std::invalid_argument("velocity edges must be positive and ascending");
}

VelocityAttribute compute_velocity_attribute(int spatial, int t_start, int t_end, double fps,
                                             const VelocityEdges& edges) {
  if (t_end <= t_start) throw std::invalid_argument("velocity needs t_end > t_start");
  const double per_frame = static_cast<double>(std::abs(spatial)) / static_cast<double>(t_end - t_start);
  const double per_second = per_frame * fps;
  int cls = 0;
  for (double e : edges.edges)
    if (per_second >= e) ++cls;
  return {per_frame, static_cast<VelocityClass>(cls)};
}

Intensity IntensityEdges::classify(int magnitude) const {
  if (magnitude >= edges[2]) return Intensity::significant;
  if (magnitude >= edges[1]) return Intensity::moderate;
  if (magnitude >= edges[0]) return Intensity::slight;
  return Intensity::stationary;
}

void IntensityEdges::validate() const {
  if (!(0 < edges[0] && edges[0] < edges[1] && edges[1] < edges[2]))
    throw std::invalid_argument("intensity edges must be positive and strictly ascending");
}

SegmentationParams MotioncodeConfig::segmentation(double fps) const {
  SegmentationParams p;
  p.min_run = min_run;
  p.min_transitions = min_transitions;
  p.max_range = std::max(1, static_cast<int>(std::lround(max_range_seconds * fps)));
  return p;
}

void MotioncodeConfig::validate() const {
  if (min_run < 1) throw std::invalid_argument("min_run must be at least 1");
  if (min_transitions < 1) throw std::invalid_argument("min_transitions must be at least 1");
  if (!(max_range_seconds >= 0.0)) throw std::invalid_argument("max_range_seconds must be non-negative");
  if (!(velocity_edge_sigma >= 0.0)) throw std::invalid_argument("velocity edge sigma must be non-negative");
  velocity.validate();
  intensity.validate();
}

std::array<std::string, 2> direction_labels(Family family, const PosecodeInstance& instance) {
  switch (family) {
    case Family::angular:
      return {"bending", "extending"};
    case Family::proximity:
      return {"spreading", "closing"};
    case Family::spatial_relation:
      switch (instance.axis) {
        case Axis::x:
          return {"right-to-left", "left-to-right"};
        case Axis::y:
          return {"below-to-above", "above-to-below"};
        case Axis::z:
          return {"behind-to-front", "front-to-behind"};
      }
      break;
    case Family::displacement:
      switch (instance.axis) {
        case Axis::x:
          return {"leftward", "rightward"};
        case Axis::y:
          return {"upward", "downward"};
        case Axis::z:
          return {"forward", "backward"};
      }
      break;
    case Family::rotation:
      switch (instance.axis) {
        case Axis::x:
          return {"leaning forward", "leaning backward"};
        case Axis::y:
          return {"turning counter-clockwise", "turning clockwise"};
        case Axis::z:
          return {"leaning right", "leaning left"};
      }
      break;
  }
  return {"?", "?"};
}

std::string direction_label(Family family, const PosecodeInstance& instance, int sign) {
  auto labels = direction_labels(family, instance);
  return sign > 0 ? labels[0] : labels[1];
}

std::string mirror_label(std::string_view label) {
  std::string s(label);
  replace_all(s, "counter-clockwise", "\x01");
  replace_all(s, "clockwise", "counter-clockwise");
  replace_all(s, "\x01", "clockwise");
  replace_all(s, "left", "\x01");
  replace_all(s, "right", "left");
  replace_all(s, "\x01", "right");
  return s;
}

std::vector<Motioncode> build_motioncodes(std::span<const PosecodeTimeline> timelines, const MotionSequence& seq,
                                          const MotioncodeConfig& config, const NoiseConfig& noise) {
  config.validate();
  const auto params = config.segmentation(seq.fps);
  std::vector<Motioncode> out;
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    const auto& timeline = timelines[i];
    const auto family = family_of(timeline.instance.kind);
    if (!family) continue;
    const auto stable = stabilize_categories(fill_ignored(timeline.categories), params.min_run);
    for (const auto& seg : detect_motion_segments(timeline.categories, params)) {
      Motioncode code;
      code.family = *family;
      code.instance_index = i;
      code.instance = timeline.instance;
      code.t_start = seg.t_start;
      code.t_end = seg.t_end;
      code.spatial = seg.spatial;

      VelocityEdges edges = config.velocity;
      if (noise.enabled && config.velocity_edge_sigma > 0.0) {
        for (std::size_t k = 0; k < edges.edges.size(); ++k)
          edges.edges[k] *= 1.0 + config.velocity_edge_sigma *
                                      keyed_normal(noise.seed, kVelocityNoiseStream, i,
                                                   static_cast<std::uint64_t>(seg.t_start) * 8 + k);
        std::sort(edges.edges.begin(), edges.edges.end());
      }
      const auto v = compute_velocity_attribute(seg.spatial, seg.t_start, seg.t_end, seq.fps, edges);
      code.velocity = v.per_frame;
      code.velocity_class = v.velocity_class;
      if (code.family != Family::spatial_relation) code.intensity = config.intensity.classify(code.magnitude());
      code.direction_label = direction_label(code.family, code.instance, seg.direction);
      code.start_category = stable[static_cast<std::size_t>(seg.t_start)];
      code.end_category = stable[static_cast<std::size_t>(seg.t_end)];
      out.push_back(std::move(code));
    }
  }
  return out;
}

}  // namespace motionscript
