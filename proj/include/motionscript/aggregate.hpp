#pragma once

#include "motionscript/motioncode.hpp"
#include "motionscript/random.hpp"
#include "motionscript/skeleton.hpp"
#include "motionscript/subject.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motionscript {

/// Frequencies of (family, intensity, velocity) label combinations and the
/// patterns considered rare. Keys and patterns read "family:intensity:velocity"
/// with "none" for a missing intensity; a pattern field may be "*".
struct SalienceStats {
  std::map<std::string, double> frequency;
  std::vector<std::string> rare_set;

  bool is_rare(const Motioncode& code) const;
  void validate() const;
};

std::string combo_key(Family family, std::optional<Intensity> intensity, VelocityClass velocity);
std::string combo_key(const Motioncode& code);
/// Every combination a motioncode can carry.
std::vector<std::string> all_combo_keys();
bool combo_matches(std::string_view pattern, std::string_view key);

std::vector<std::string> default_rare_set();
SalienceStats default_salience_stats();
/// Observed combination frequencies; rare = never observed or at most the
/// given percentile (nearest rank) of observed frequencies.
SalienceStats salience_from_corpus(std::span<const Motioncode> codes, double percentile = 5.0);

struct AggregationConfig {
  double T_w_seconds = 0.5;
  int T_range_bins = 2;
  double p_rule = 0.75;
  std::size_t N_max = 8;
  double subject_threshold = 0.6;

  int window_frames(double fps) const;
  void validate() const;
};

/// Drops stationary and non-rare slight angular/proximity codes, removes
/// codes duplicated on the same joints with overlapping intervals, and keeps
/// the N_max best by (rare, |M_S|, duration, T_s). Codes tied with the best
/// code that does not fit are dropped too, so the result never depends on
/// joint order. Result is in ranking order.
std::vector<Motioncode> select_motioncodes(std::span<const Motioncode> codes, const SalienceStats& stats,
                                           std::size_t n_max);
/// Ranking order used by select_motioncodes: true when `a` outranks `b`.
bool outranks(const Motioncode& a, const Motioncode& b, const SalienceStats& stats);

int bin_of(int t_start, int window);
std::map<int, std::vector<std::size_t>> assign_bins(std::span<const Motioncode> codes, int window);

enum class RelationTag { simultaneous, immediately_after, few_seconds_later, a_moment_before };
std::string_view relation_name(RelationTag tag);
RelationTag parse_relation(std::string_view name);
/// Tag for something starting `gap` bins after the reference point.
RelationTag relation_from_gap(int gap);

struct AggregateMember {
  Motioncode code;
  SubjectChoice subject;
  int bin = 0;
  std::vector<int> focus;  // joints the sentence is about, sorted
  int counterpart = -1;    // other joint of a pair in single-joint mode
  std::string label;       // direction label seen from the subject joint
};

struct Subject {
  enum class Form { joint, body, symmetric, entity, compound, mutual };
  Form form = Form::joint;
  std::vector<int> joints;  // sorted focus joints
  std::string phrase;       // "the left elbow", "the elbows", "the left arm", ...
  bool plural = false;
  std::string object;  // counterpart phrase, empty when none or mutual
};
std::string_view form_name(Subject::Form form);

/// Members sharing one predicate and one (possibly merged) subject.
struct Clause {
  std::vector<AggregateMember> members;
  Subject subject;
  std::vector<std::string> rules;

  int first_bin() const;
  int last_bin() const;
  Family family() const { return members.front().code.family; }
  const std::string& label() const { return members.front().label; }
  std::optional<Intensity> intensity() const { return members.front().code.intensity; }
};

struct AggregatedMotion {
  std::vector<Clause> clauses;          // several only for a keypoint chain
  std::vector<RelationTag> clause_tags;  // clauses.size() - 1
  std::vector<RelationTag> relation_tags;  // members - 1, by bin distance
  std::vector<std::string> rule_trace;
  int bin_anchor = 0;
  int last_bin = 0;
  std::optional<RelationTag> lead;  // relation to the previous item in order

  std::vector<const AggregateMember*> members() const;
};

/// Builds members in canonical order (bin, T_s, instance index).
std::vector<AggregateMember> make_members(std::span<const Motioncode> codes, const MotionSequence& seq,
                                          const SkeletonSpec& skeleton, const AggregationConfig& config);
Clause singleton_clause(const AggregateMember& member, const SkeletonSpec& skeleton);

std::vector<Clause> aggregate_symmetry(std::vector<Clause> clauses, const SkeletonSpec& skeleton, Rng& rng,
                                       double p_rule);
std::vector<Clause> aggregate_entity(std::vector<Clause> clauses, const SkeletonSpec& skeleton, Rng& rng,
                                     double p_rule);
std::vector<Clause> aggregate_interpretation(std::vector<Clause> clauses, int T_range, Rng& rng, double p_rule);
std::vector<AggregatedMotion> aggregate_keypoint(std::vector<Clause> clauses, int T_range, Rng& rng, double p_rule);
/// Chronological order by anchor bin; items starting before the previous
/// item's last bin get an a-moment-before lead.
std::vector<AggregatedMotion> order_timecodes(std::vector<AggregatedMotion> items);

/// symmetry -> entity -> interpretation -> keypoint -> timecode.
std::vector<AggregatedMotion> aggregate_motioncodes(std::span<const Motioncode> selected, const MotionSequence& seq,
                                                    const SkeletonSpec& skeleton, const AggregationConfig& config,
                                                    Rng& rng);

}  // namespace motionscript
