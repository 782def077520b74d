#pragma once

#include "motionscript/aggregate.hpp"
#include "motionscript/motioncode.hpp"
#include "motionscript/random.hpp"
#include "motionscript/subject.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motionscript {

struct InjectionCandidate {
  std::string description;
  std::vector<int> joints;
  double weight = 1.0;
};

struct InjectionResult {
  std::vector<std::size_t> chosen;  // candidate indices in pick order
  std::vector<int> uncovered;       // targets no candidate covers
  double total_weight = 0.0;
};

/// 1 + the number of candidate joints outside the target set.
double injection_weight(const std::vector<int>& joints, const std::vector<int>& targets);

/// Greedy weighted set cover: take the candidate with the most newly covered
/// targets per unit weight (earliest on ties) until nothing new is covered.
InjectionResult choose_pose_injection(const std::vector<int>& targets, std::span<const InjectionCandidate> candidates);

/// Clause describing a static posecode, e.g. "the left elbow is straight".
std::string describe_posecode(const PosecodeInstance& instance, std::string_view category,
                              const SkeletonSpec& skeleton);
/// Same, for both sides of a symmetric angle: "both elbows are straight".
std::string describe_symmetric_posecode(const PosecodeInstance& instance, std::string_view category,
                                        const SkeletonSpec& skeleton);

inline constexpr std::string_view kSlotSubject = "⟨subject⟩";
inline constexpr std::string_view kSlotVerb = "⟨verb⟩";
inline constexpr std::string_view kSlotIntensity = "⟨intensity⟩";
inline constexpr std::string_view kSlotVelocity = "⟨velocity⟩";
inline constexpr std::string_view kSlotConnective = "⟨connective⟩";
inline constexpr std::string_view kSlotPose = "⟨pose⟩";
inline constexpr std::string_view kSlotObject = "⟨object⟩";

/// Phrase lists keyed by section header. Sections:
///   [verb <family> <label>]  verb phrases, third person singular
///   [intensity <class>]  [velocity <class>]  [connective <relation>]
///   [transition pose-to-motion]  [transition motion-to-pose]
///   [skeleton]  [mutual]
class TemplateLibrary {
 public:
  /// Throws std::runtime_error on malformed text or missing phrases.
  static TemplateLibrary parse(std::string_view text);
  static TemplateLibrary load_file(const std::string& path);
  static const TemplateLibrary& builtin();

  const std::vector<std::string>& section(const std::string& name) const;
  const std::vector<std::string>& verbs(Family family, std::string_view label) const;
  const std::map<std::string, std::vector<std::string>>& sections() const { return sections_; }
  void validate() const;

 private:
  std::map<std::string, std::vector<std::string>> sections_;
};

/// Text of the library compiled into the binary.
std::string_view builtin_template_text();

/// Third person plural of a verb phrase ("bends" -> "bend").
std::string pluralize_verb(std::string_view phrase);

struct PoseInjection {
  std::vector<std::string> start;
  std::vector<std::string> end;
};

struct FragmentRecord {
  std::vector<std::string> semantics;  // slot=value pairs independent of surface choice
  std::vector<std::string> fillers;    // slot=value pairs as rendered
};

struct CaptionDocument {
  std::string text;
  std::vector<std::string> sentences;  // one per aggregated motion
  std::vector<std::string> injected_posecodes;
  std::uint64_t seed = 0;
  bool no_salient_motion = false;
  std::string intermediate;  // JSON dump of the pipeline stages
  std::vector<FragmentRecord> fragments;
};

CaptionDocument render_caption(std::span<const AggregatedMotion> items, std::span<const PoseInjection> injections,
                               const TemplateLibrary& templates, Rng& rng);

}  // namespace motionscript
