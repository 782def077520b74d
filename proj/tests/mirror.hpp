#pragma once

// Compares the intermediate dumps of a sequence and its mirror image.

#include "motionscript/posecode.hpp"
#include "motionscript/skeleton.hpp"

#include <json.hpp>

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace mirror_check {

using nlohmann::json;
using namespace motionscript;

inline std::string mirror_joint(const std::string& name) {
  const auto& sk = SkeletonSpec::canonical();
  return sk.name(sk.mirror(sk.index_of(name)));
}

inline json mirror_joints(const json& names) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(mirror_joint(n.get<std::string>()));
  std::sort(out.begin(), out.end());
  return out;
}

inline json sorted_joints(const json& names) {
  std::vector<std::string> out = names.get<std::vector<std::string>>();
  std::sort(out.begin(), out.end());
  return out;
}

struct Mapping {
  std::vector<std::size_t> index;
  std::vector<bool> flips;
};

inline Mapping mapping(std::span<const PosecodeInstance> instances) {
  Mapping m;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto match = find_mirror_instance(instances, i);
    if (!match) throw std::logic_error("instance without mirror: " + format_instance(instances[i]));
    m.index.push_back(match->index);
    m.flips.push_back(mirror_flips(instances[i], match->reversed));
  }
  return m;
}

inline std::string code_signature(const json& c, const Mapping* map) {
  std::size_t index = c["instance_index"].get<std::size_t>();
  int spatial = c["spatial"].get<int>();
  if (map) {
    if (map->flips[index]) spatial = -spatial;
    index = map->index[index];
  }
  return json{index, c["t_start"], c["t_end"], spatial, c["velocity_class"], c["intensity"]}.dump();
}

inline std::string clause_signature(const json& c, bool mirrored) {
  json members = json::array();
  for (const auto& m : c["members"]) {
    const auto label = m["effective_label"].get<std::string>();
    json cp = m["counterpart"];
    if (mirrored && !cp.is_null()) cp = mirror_joint(cp.get<std::string>());
    members.push_back({m["family"], mirrored ? mirror_label(label) : label, m["intensity"], m["bin"],
                       mirrored ? mirror_joints(m["focus"]) : sorted_joints(m["focus"]), cp, m["subject_mode"]});
  }
  std::vector<std::string> sorted;
  for (const auto& m : members) sorted.push_back(m.dump());
  std::sort(sorted.begin(), sorted.end());
  const auto& s = c["subject"];
  return json{s["form"], s["plural"], mirrored ? mirror_joints(s["joints"]) : sorted_joints(s["joints"]), sorted}
      .dump();
}

inline std::string item_signature(const json& item, bool mirrored) {
  json clauses = json::array();
  for (const auto& c : item["clauses"]) clauses.push_back(clause_signature(c, mirrored));
  std::vector<std::string> trace;
  for (const auto& r : item["rule_trace"])
    if (r != "timecode" && r != "singleton") trace.push_back(r.get<std::string>());
  return json{item["bin_anchor"], item["last_bin"], clauses, item["clause_tags"], trace}.dump();
}

template <typename F>
std::vector<std::string> signatures(const json& list, F f) {
  std::vector<std::string> out;
  for (const auto& x : list) out.push_back(f(x));
  std::sort(out.begin(), out.end());
  return out;
}

/// Empty when the mirrored dump is the mirror image of the original:
/// timelines frame by frame, motioncodes and selections as multisets, and
/// aggregated motions with joints swapped and left/right labels flipped.
/// Leads between motions sharing a bin follow instance order and are not
/// compared.
inline std::string mismatch(const std::string& original, const std::string& mirrored,
                            std::span<const PosecodeInstance> instances) {
  const auto a = json::parse(original), b = json::parse(mirrored);
  const auto map = mapping(instances);

  const auto& ta = a["timelines"];
  const auto& tb = b["timelines"];
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto match = find_mirror_instance(instances, i);
    const auto& ca = ta[i]["categories"];
    const auto& cb = tb[map.index[i]]["categories"];
    for (std::size_t f = 0; f < ca.size(); ++f) {
      if (ca[f].is_null() != cb[f].is_null()) return "timeline " + format_instance(instances[i]) + " frame " +
                                                     std::to_string(f) + ": ignored state differs";
      if (ca[f].is_null()) continue;
      if (mirror_category(instances[i], match->reversed, ca[f].get<int>()) != cb[f].get<int>())
        return "timeline " + format_instance(instances[i]) + " frame " + std::to_string(f) + " differs";
    }
  }
  for (const char* key : {"motioncodes", "selected"}) {
    const auto sa = signatures(a[key], [&](const json& c) { return code_signature(c, &map); });
    const auto sb = signatures(b[key], [&](const json& c) { return code_signature(c, nullptr); });
    if (sa != sb) return std::string(key) + " differ";
  }
  const auto ia = signatures(a["aggregation"], [](const json& x) { return item_signature(x, true); });
  const auto ib = signatures(b["aggregation"], [](const json& x) { return item_signature(x, false); });
  if (ia != ib) return "aggregation differs";
  return {};
}

}  // namespace mirror_check
