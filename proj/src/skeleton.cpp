#include "motionscript/skeleton.hpp"

#include <algorithm>
#include <stdexcept>

namespace motionscript {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string strip_side(std::string_view name) {
  if (starts_with(name, "left_")) return std::string(name.substr(5));
  if (starts_with(name, "right_")) return std::string(name.substr(6));
  return std::string(name);
}

std::string readable_base(const std::string& base) {
  if (base == "wrist") return "hand";
  if (base == "collar") return "collarbone";
  if (base == "spine1") return "lower back";
  if (base == "spine2") return "torso";
  if (base == "spine3") return "chest";
  return base;
}

std::string pluralize(const std::string& noun) {
  if (noun == "foot") return "feet";
  return noun + "s";
}

}  // namespace

const SkeletonSpec& SkeletonSpec::canonical() {
  static const SkeletonSpec spec = [] {
    std::vector<std::string> names = {
        "pelvis",      "left_hip",    "right_hip",      "spine1",         "left_knee",  "right_knee",
        "spine2",      "left_ankle",  "right_ankle",    "spine3",         "left_foot",  "right_foot",
        "neck",        "left_collar", "right_collar",   "head",           "left_shoulder",
        "right_shoulder", "left_elbow", "right_elbow",  "left_wrist",     "right_wrist"};
    std::vector<std::pair<int, int>> pairs = {
        {joint::left_hip, joint::right_hip},           {joint::left_knee, joint::right_knee},
        {joint::left_ankle, joint::right_ankle},       {joint::left_foot, joint::right_foot},
        {joint::left_collar, joint::right_collar},     {joint::left_shoulder, joint::right_shoulder},
        {joint::left_elbow, joint::right_elbow},       {joint::left_wrist, joint::right_wrist}};
    std::vector<EntityGroup> groups = {
        {"left arm", {joint::left_shoulder, joint::left_elbow, joint::left_wrist}},
        {"right arm", {joint::right_shoulder, joint::right_elbow, joint::right_wrist}},
        {"left leg", {joint::left_hip, joint::left_knee, joint::left_ankle, joint::left_foot}},
        {"right leg", {joint::right_hip, joint::right_knee, joint::right_ankle, joint::right_foot}},
        {"torso", {joint::pelvis, joint::spine1, joint::spine2, joint::spine3}}};
    SkeletonSpec s(std::move(names), std::move(pairs), std::move(groups));
    s.validate();
    return s;
  }();
  return spec;
}

SkeletonSpec::SkeletonSpec(std::vector<std::string> joints,
                           std::vector<std::pair<int, int>> symmetry_pairs,
                           std::vector<EntityGroup> entity_groups)
    : joints_(std::move(joints)),
      symmetry_pairs_(std::move(symmetry_pairs)),
      entity_groups_(std::move(entity_groups)) {
  mirror_.resize(joints_.size());
  for (std::size_t i = 0; i < joints_.size(); ++i) mirror_[i] = static_cast<int>(i);
  for (const auto& [l, r] : symmetry_pairs_) {
    if (l < 0 || r < 0 || l >= size() || r >= size()) continue;  // caught by validate()
    mirror_[static_cast<std::size_t>(l)] = r;
    mirror_[static_cast<std::size_t>(r)] = l;
  }
}

std::optional<int> SkeletonSpec::find(std::string_view name) const {
  auto it = std::find(joints_.begin(), joints_.end(), name);
  if (it == joints_.end()) return std::nullopt;
  return static_cast<int>(it - joints_.begin());
}

int SkeletonSpec::index_of(std::string_view name) const {
  if (auto j = find(name)) return *j;
  throw std::invalid_argument("unknown joint '" + std::string(name) + "'");
}

Side SkeletonSpec::side(int joint) const {
  const auto& n = name(joint);
  if (starts_with(n, "left_")) return Side::left;
  if (starts_with(n, "right_")) return Side::right;
  return Side::center;
}

int SkeletonSpec::mirror(int joint) const { return mirror_.at(static_cast<std::size_t>(joint)); }

std::string SkeletonSpec::base_name(int joint) const { return readable_base(strip_side(name(joint))); }

std::string SkeletonSpec::display_name(int joint) const {
  switch (side(joint)) {
    case Side::left:
      return "left " + base_name(joint);
    case Side::right:
      return "right " + base_name(joint);
    case Side::center:
      break;
  }
  return base_name(joint);
}

std::string SkeletonSpec::plural_name(int joint) const { return pluralize(base_name(joint)); }

std::optional<std::size_t> SkeletonSpec::common_entity(const std::vector<int>& joints) const {
  if (joints.empty()) return std::nullopt;
  for (std::size_t g = 0; g < entity_groups_.size(); ++g) {
    const auto& members = entity_groups_[g].joints;
    bool all = std::all_of(joints.begin(), joints.end(), [&](int j) {
      return std::find(members.begin(), members.end(), j) != members.end();
    });
    if (all) return g;
  }
  return std::nullopt;
}

void SkeletonSpec::validate() const {
  if (size() != kNumJoints)
    throw std::logic_error("skeleton must have " + std::to_string(kNumJoints) + " joints, got " +
                           std::to_string(size()));
  for (const auto& [l, r] : symmetry_pairs_) {
    if (l < 0 || r < 0 || l >= size() || r >= size())
      throw std::logic_error("symmetry pair references a joint outside the skeleton");
    if (!starts_with(name(l), "left_") || !starts_with(name(r), "right_") ||
        strip_side(name(l)) != strip_side(name(r)))
      throw std::logic_error("symmetry pair (" + name(l) + ", " + name(r) +
                             ") is not a matching left/right pair");
  }
  for (const auto& g : entity_groups_) {
    if (g.joints.empty()) throw std::logic_error("entity group '" + g.name + "' is empty");
    for (int j : g.joints)
      if (j < 0 || j >= size())
        throw std::logic_error("entity group '" + g.name + "' references an unknown joint");
  }
}

JointPositions<double> t_pose() {
  JointPositions<double> p;
  p.row(joint::pelvis) << 0.0, 0.95, 0.0;
  p.row(joint::left_hip) << 0.09, 0.87, 0.0;
  p.row(joint::right_hip) << -0.09, 0.87, 0.0;
  p.row(joint::spine1) << 0.0, 1.05, 0.0;
  p.row(joint::left_knee) << 0.10, 0.49, 0.0;
  p.row(joint::right_knee) << -0.10, 0.49, 0.0;
  p.row(joint::spine2) << 0.0, 1.18, 0.0;
  p.row(joint::left_ankle) << 0.10, 0.08, 0.0;
  p.row(joint::right_ankle) << -0.10, 0.08, 0.0;
  p.row(joint::spine3) << 0.0, 1.25, 0.0;
  p.row(joint::left_foot) << 0.10, 0.02, 0.12;
  p.row(joint::right_foot) << -0.10, 0.02, 0.12;
  p.row(joint::neck) << 0.0, 1.47, 0.0;
  p.row(joint::left_collar) << 0.07, 1.38, 0.0;
  p.row(joint::right_collar) << -0.07, 1.38, 0.0;
  p.row(joint::head) << 0.0, 1.62, 0.03;
  p.row(joint::left_shoulder) << 0.18, 1.40, 0.0;
  p.row(joint::right_shoulder) << -0.18, 1.40, 0.0;
  p.row(joint::left_elbow) << 0.45, 1.40, 0.0;
  p.row(joint::right_elbow) << -0.45, 1.40, 0.0;
  p.row(joint::left_wrist) << 0.70, 1.40, 0.0;
  p.row(joint::right_wrist) << -0.70, 1.40, 0.0;
  return p;
}

}  // namespace motionscript
