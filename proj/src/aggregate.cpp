#include "motionscript/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace motionscript {

namespace {

constexpr std::array kFamilies{Family::angular, Family::proximity, Family::spatial_relation, Family::displacement,
                               Family::rotation};
constexpr std::array kIntensities{Intensity::slight, Intensity::moderate, Intensity::significant};
constexpr std::array kVelocities{VelocityClass::very_slow, VelocityClass::slow, VelocityClass::moderate,
                                 VelocityClass::fast, VelocityClass::very_fast};

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(':', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int j : a)
    if (std::find(b.begin(), b.end(), j) != b.end()) return false;
  return true;
}

bool same_predicate(const Clause& a, const Clause& b) {
  return a.family() == b.family() && a.label() == b.label() && a.intensity() == b.intensity();
}

int counterpart_of(const Clause& c) { return c.members.front().counterpart; }

bool single_counterpart(const Clause& c) {
  const int cp = counterpart_of(c);
  return std::all_of(c.members.begin(), c.members.end(), [&](const auto& m) { return m.counterpart == cp; });
}

std::string the(const std::string& noun) { return "the " + noun; }

std::string join_phrases(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += (i + 1 == parts.size()) ? (parts.size() > 2 ? ", and " : " and ") : ", ";
    out += parts[i];
  }
  return out;
}

std::string object_phrase(int subject, int counterpart, const SkeletonSpec& sk) {
  if (counterpart < 0) return {};
  if (sk.side(counterpart) != Side::center && counterpart == sk.mirror(subject))
    return "the other " + sk.base_name(counterpart);
  return the(sk.display_name(counterpart));
}

void sort_members(std::vector<AggregateMember>& members) {
  std::stable_sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
    return std::tie(a.bin, a.code.t_start, a.code.instance_index) <
           std::tie(b.bin, b.code.t_start, b.code.instance_index);
  });
}

auto clause_order_key(const Clause& c) {
  const auto& m = c.members.front();
  return std::make_tuple(c.first_bin(), m.code.t_start, m.code.instance_index);
}

void absorb(Clause& into, Clause& from, std::string_view rule) {
  into.members.insert(into.members.end(), std::make_move_iterator(from.members.begin()),
                      std::make_move_iterator(from.members.end()));
  sort_members(into.members);
  for (auto& r : from.rules)
    if (std::find(into.rules.begin(), into.rules.end(), r) == into.rules.end()) into.rules.push_back(r);
  if (std::find(into.rules.begin(), into.rules.end(), rule) == into.rules.end()) into.rules.emplace_back(rule);
  into.subject.joints = sorted_unique([&] {
    auto j = into.subject.joints;
    j.insert(j.end(), from.subject.joints.begin(), from.subject.joints.end());
    return j;
  }());
}

template <typename Compatible, typename Merge>
std::vector<Clause> greedy_merge(std::vector<Clause> clauses, Rng& rng, double p_rule, Compatible compatible,
                                 Merge merge) {
  std::vector<bool> used(clauses.size(), false);
  std::vector<Clause> out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (used[i]) continue;
    Clause current = std::move(clauses[i]);
    for (std::size_t j = i + 1; j < clauses.size(); ++j) {
      if (used[j] || !compatible(current, clauses[j])) continue;
      if (!rng.bernoulli(p_rule)) continue;
      merge(current, clauses[j]);
      used[j] = true;
    }
    out.push_back(std::move(current));
  }
  return out;
}

}  // namespace

std::string combo_key(Family family, std::optional<Intensity> intensity, VelocityClass velocity) {
  std::string key(family_name(family));
  key += ':';
  key += intensity ? intensity_name(*intensity) : std::string_view("none");
  key += ':';
  key += velocity_name(velocity);
  return key;
}

std::string combo_key(const Motioncode& code) { return combo_key(code.family, code.intensity, code.velocity_class); }

std::vector<std::string> all_combo_keys() {
  std::vector<std::string> keys;
  for (Family f : kFamilies)
    for (VelocityClass v : kVelocities) {
      if (f == Family::spatial_relation) {
        keys.push_back(combo_key(f, std::nullopt, v));
        continue;
      }
      for (Intensity i : kIntensities) keys.push_back(combo_key(f, i, v));
    }
  return keys;
}

bool combo_matches(std::string_view pattern, std::string_view key) {
  const auto p = split_fields(pattern);
  const auto k = split_fields(key);
  if (p.size() != 3 || k.size() != 3) return false;
  for (std::size_t i = 0; i < 3; ++i)
    if (p[i] != "*" && p[i] != k[i]) return false;
  return true;
}

bool SalienceStats::is_rare(const Motioncode& code) const {
  const auto key = combo_key(code);
  return std::any_of(rare_set.begin(), rare_set.end(), [&](const auto& p) { return combo_matches(p, key); });
}

void SalienceStats::validate() const {
  for (const auto& [k, f] : frequency)
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("salience frequency for '" + k + "' outside [0, 1]");
  for (const auto& p : rare_set)
    if (split_fields(p).size() != 3)
      throw std::invalid_argument("rare pattern '" + p + "' must read family:intensity:velocity");
}

std::vector<std::string> default_rare_set() { return {"*:significant:*", "*:*:very fast", "*:*:very slow"}; }

SalienceStats default_salience_stats() {
  // Reference marginals; the table is their product.
  const std::map<Family, double> pf{{Family::angular, 0.30},
                                    {Family::proximity, 0.25},
                                    {Family::spatial_relation, 0.20},
                                    {Family::displacement, 0.15},
                                    {Family::rotation, 0.10}};
  const std::map<Intensity, double> pi{
      {Intensity::slight, 0.45}, {Intensity::moderate, 0.35}, {Intensity::significant, 0.20}};
  const std::map<VelocityClass, double> pv{{VelocityClass::very_slow, 0.10},
                                           {VelocityClass::slow, 0.25},
                                           {VelocityClass::moderate, 0.35},
                                           {VelocityClass::fast, 0.20},
                                           {VelocityClass::very_fast, 0.10}};
  SalienceStats stats;
  for (Family f : kFamilies)
    for (VelocityClass v : kVelocities) {
      if (f == Family::spatial_relation) {
        stats.frequency[combo_key(f, std::nullopt, v)] = pf.at(f) * pv.at(v);
        continue;
      }
      for (Intensity i : kIntensities) stats.frequency[combo_key(f, i, v)] = pf.at(f) * pi.at(i) * pv.at(v);
    }
  stats.rare_set = default_rare_set();
  return stats;
}

SalienceStats salience_from_corpus(std::span<const Motioncode> codes, double percentile) {
  if (!(percentile >= 0.0 && percentile <= 100.0)) throw std::invalid_argument("percentile must lie in [0, 100]");
  std::map<std::string, std::size_t> counts;
  for (const auto& c : codes) ++counts[combo_key(c)];

  SalienceStats stats;
  for (const auto& key : all_combo_keys()) stats.frequency[key] = 0.0;
  std::vector<double> observed;
  for (const auto& [key, n] : counts) {
    const double f = static_cast<double>(n) / static_cast<double>(codes.size());
    stats.frequency[key] = f;
    observed.push_back(f);
  }
  std::sort(observed.begin(), observed.end());
  double cut = -1.0;
  if (!observed.empty()) {
    const auto rank = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(observed.size()))));
    cut = observed[rank - 1];
  }
  for (const auto& [key, f] : stats.frequency)
    if (f == 0.0 || f <= cut) stats.rare_set.push_back(key);
  return stats;
}

int AggregationConfig::window_frames(double fps) const {
  return std::max(1, static_cast<int>(std::lround(T_w_seconds * fps)));
}

void AggregationConfig::validate() const {
  if (!(T_w_seconds > 0.0)) throw std::invalid_argument("T_w_seconds must be positive");
  if (T_range_bins < 0) throw std::invalid_argument("T_range_bins must be non-negative");
  if (!(p_rule >= 0.0 && p_rule <= 1.0)) throw std::invalid_argument("p_rule must lie in [0, 1]");
  if (N_max < 1) throw std::invalid_argument("N_max must be at least 1");
  if (!(subject_threshold > 0.5 && subject_threshold <= 1.0))
    throw std::invalid_argument("subject_threshold must lie in (0.5, 1]");
}

bool outranks(const Motioncode& a, const Motioncode& b, const SalienceStats& stats) {
  const bool ra = stats.is_rare(a), rb = stats.is_rare(b);
  if (ra != rb) return ra;
  if (a.magnitude() != b.magnitude()) return a.magnitude() > b.magnitude();
  if (a.duration() != b.duration()) return a.duration() > b.duration();
  if (a.t_start != b.t_start) return a.t_start < b.t_start;
  return a.instance_index < b.instance_index;
}

std::vector<Motioncode> select_motioncodes(std::span<const Motioncode> codes, const SalienceStats& stats,
                                           std::size_t n_max) {
  std::vector<Motioncode> pool;
  for (const auto& c : codes) {
    if (c.spatial == 0) continue;
    const bool weak_family = c.family == Family::angular || c.family == Family::proximity;
    if (weak_family && c.intensity == Intensity::slight && !stats.is_rare(c)) continue;
    pool.push_back(c);
  }
  std::sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) { return outranks(a, b, stats); });

  std::vector<Motioncode> kept;
  for (auto& c : pool) {
    const auto joints = sorted_unique(c.instance.key_joints());
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Motioncode& k) {
      return k.family == c.family && k.instance.axis == c.instance.axis && (k.spatial > 0) == (c.spatial > 0) &&
             sorted_unique(k.instance.key_joints()) == joints && k.t_start < c.t_end && c.t_start < k.t_end;
    });
    if (duplicate) continue;
    kept.push_back(std::move(c));
  }
  if (kept.size() > n_max) {
    // codes tied with the first one left out go out with it
    const auto tied = [&](const Motioncode& a, const Motioncode& b) {
      return stats.is_rare(a) == stats.is_rare(b) && a.magnitude() == b.magnitude() &&
             a.duration() == b.duration() && a.t_start == b.t_start;
    };
    std::size_t end = n_max;
    while (end > 0 && tied(kept[end - 1], kept[n_max])) --end;
    kept.resize(end);
  }
  return kept;
}

int bin_of(int t_start, int window) {
  if (window < 1) throw std::invalid_argument("bin window must be at least 1 frame");
  if (t_start < 0) throw std::invalid_argument("T_s must be non-negative");
  return t_start / window;
}

std::map<int, std::vector<std::size_t>> assign_bins(std::span<const Motioncode> codes, int window) {
  std::map<int, std::vector<std::size_t>> bins;
  for (std::size_t i = 0; i < codes.size(); ++i) bins[bin_of(codes[i].t_start, window)].push_back(i);
  return bins;
}

std::string_view relation_name(RelationTag tag) {
  switch (tag) {
    case RelationTag::simultaneous:
      return "simultaneous";
    case RelationTag::immediately_after:
      return "immediately-after";
    case RelationTag::few_seconds_later:
      return "few-seconds-later";
    case RelationTag::a_moment_before:
      return "a-moment-before";
  }
  return "?";
}

RelationTag parse_relation(std::string_view name) {
  for (auto t : {RelationTag::simultaneous, RelationTag::immediately_after, RelationTag::few_seconds_later,
                 RelationTag::a_moment_before})
    if (relation_name(t) == name) return t;
  throw std::invalid_argument("unknown relation tag '" + std::string(name) + "'");
}

RelationTag relation_from_gap(int gap) {
  if (gap < 0) return RelationTag::a_moment_before;
  if (gap == 0) return RelationTag::simultaneous;
  if (gap == 1) return RelationTag::immediately_after;
  return RelationTag::few_seconds_later;
}

std::string_view form_name(Subject::Form form) {
  switch (form) {
    case Subject::Form::joint:
      return "joint";
    case Subject::Form::body:
      return "body";
    case Subject::Form::symmetric:
      return "symmetric";
    case Subject::Form::entity:
      return "entity";
    case Subject::Form::compound:
      return "compound";
    case Subject::Form::mutual:
      return "mutual";
  }
  return "?";
}

int Clause::first_bin() const {
  int b = members.front().bin;
  for (const auto& m : members) b = std::min(b, m.bin);
  return b;
}

int Clause::last_bin() const {
  int b = members.front().bin;
  for (const auto& m : members) b = std::max(b, m.bin);
  return b;
}

std::vector<const AggregateMember*> AggregatedMotion::members() const {
  std::vector<const AggregateMember*> out;
  for (const auto& c : clauses)
    for (const auto& m : c.members) out.push_back(&m);
  return out;
}

std::vector<AggregateMember> make_members(std::span<const Motioncode> codes, const MotionSequence& seq,
                                          const SkeletonSpec& skeleton, const AggregationConfig& config) {
  (void)skeleton;
  const int window = config.window_frames(seq.fps);
  std::vector<AggregateMember> out;
  for (const auto& code : codes) {
    AggregateMember m;
    m.code = code;
    m.bin = bin_of(code.t_start, window);
    m.subject = select_subject(code, seq, config.subject_threshold);
    m.label = code.direction_label;
    const auto& j = code.instance.joints;
    switch (code.instance.kind) {
      case PosecodeKind::angle:
        m.focus = {j[1]};
        break;
      case PosecodeKind::distance:
      case PosecodeKind::relative_position:
        if (m.subject.mode == SubjectChoice::Mode::mutual) {
          m.focus = sorted_unique({j[0], j[1]});
        } else {
          m.focus = {m.subject.joint};
          m.counterpart = m.subject.joint == j[0] ? j[1] : j[0];
          if (code.family == Family::spatial_relation && m.subject.joint == j[1])
            m.label = direction_label(code.family, code.instance, code.spatial > 0 ? -1 : 1);
        }
        break;
      default:
        m.focus = {j[0]};
        break;
    }
    out.push_back(std::move(m));
  }
  sort_members(out);
  return out;
}

Clause singleton_clause(const AggregateMember& member, const SkeletonSpec& skeleton) {
  Clause c;
  c.members = {member};
  c.subject.joints = member.focus;
  const auto& code = member.code;
  if (member.subject.mode == SubjectChoice::Mode::mutual && member.focus.size() == 2) {
    c.subject.form = Subject::Form::mutual;
    c.subject.plural = true;
    c.subject.phrase = the(skeleton.display_name(code.instance.joints[0])) + " and " +
                       the(skeleton.display_name(code.instance.joints[1]));
    return c;
  }
  const int j = member.focus.front();
  if (code.family == Family::rotation || (code.family == Family::displacement && j == joint::pelvis)) {
    c.subject.form = Subject::Form::body;
    c.subject.phrase = "the body";
    return c;
  }
  c.subject.form = Subject::Form::joint;
  c.subject.phrase = the(skeleton.display_name(j));
  c.subject.object = object_phrase(j, member.counterpart, skeleton);
  return c;
}

std::vector<Clause> aggregate_symmetry(std::vector<Clause> clauses, const SkeletonSpec& skeleton, Rng& rng,
                                       double p_rule) {
  auto compatible = [&](const Clause& a, const Clause& b) {
    if (a.subject.form != Subject::Form::joint || b.subject.form != Subject::Form::joint) return false;
    if (a.first_bin() != b.first_bin() || !same_predicate(a, b)) return false;
    const int ja = a.subject.joints.front(), jb = b.subject.joints.front();
    if (skeleton.side(ja) == Side::center || skeleton.mirror(ja) != jb) return false;
    const auto& ia = a.members.front().code.instance;
    const auto& ib = b.members.front().code.instance;
    if (ia.kind != ib.kind || ia.reference != ib.reference) return false;
    const int ca = counterpart_of(a), cb = counterpart_of(b);
    if (ca < 0 || cb < 0) return ca == cb;
    return cb == skeleton.mirror(ca) && ca != jb;
  };
  auto merge = [&](Clause& a, Clause& b) {
    const int ja = a.subject.joints.front();
    const int ca = counterpart_of(a);
    absorb(a, b, "symmetry");
    a.subject.form = Subject::Form::symmetric;
    a.subject.plural = true;
    a.subject.phrase = the(skeleton.plural_name(ja));
    if (ca < 0)
      a.subject.object.clear();
    else if (skeleton.side(ca) == Side::center)
      a.subject.object = the(skeleton.display_name(ca));
    else if (skeleton.side(ca) == skeleton.side(ja))
      a.subject.object = the(skeleton.plural_name(ca));
    else
      a.subject.object = "the opposite " + skeleton.plural_name(ca);
  };
  return greedy_merge(std::move(clauses), rng, p_rule, compatible, merge);
}

std::vector<Clause> aggregate_entity(std::vector<Clause> clauses, const SkeletonSpec& skeleton, Rng& rng,
                                     double p_rule) {
  auto compatible = [&](const Clause& a, const Clause& b) {
    const auto joint_like = [](const Clause& c) {
      return c.subject.form == Subject::Form::joint || c.subject.form == Subject::Form::entity;
    };
    if (!joint_like(a) || !joint_like(b)) return false;
    if (a.first_bin() != b.first_bin() || !same_predicate(a, b)) return false;
    if (!single_counterpart(a) || counterpart_of(a) != counterpart_of(b)) return false;
    if (!disjoint(a.subject.joints, b.subject.joints)) return false;
    auto joints = a.subject.joints;
    joints.insert(joints.end(), b.subject.joints.begin(), b.subject.joints.end());
    const auto group = skeleton.common_entity(joints);
    if (!group) return false;
    const auto& members = skeleton.entity_groups()[*group].joints;
    const int cp = counterpart_of(a);
    return cp < 0 || std::find(members.begin(), members.end(), cp) == members.end();
  };
  auto merge = [&](Clause& a, Clause& b) {
    const int cp = counterpart_of(a);
    absorb(a, b, "entity");
    const auto group = skeleton.common_entity(a.subject.joints);
    a.subject.form = Subject::Form::entity;
    a.subject.plural = false;
    a.subject.phrase = the(skeleton.entity_groups()[*group].name);
    a.subject.object = cp < 0 ? std::string() : the(skeleton.display_name(cp));
  };
  return greedy_merge(std::move(clauses), rng, p_rule, compatible, merge);
}

std::vector<Clause> aggregate_interpretation(std::vector<Clause> clauses, int T_range, Rng& rng, double p_rule) {
  auto compatible = [&](const Clause& a, const Clause& b) {
    if (a.subject.form == Subject::Form::mutual || b.subject.form == Subject::Form::mutual) return false;
    if (!same_predicate(a, b) || !disjoint(a.subject.joints, b.subject.joints)) return false;
    if (std::abs(b.first_bin() - a.first_bin()) > T_range) return false;
    return single_counterpart(a) && single_counterpart(b) && counterpart_of(a) == counterpart_of(b) &&
           a.subject.object == b.subject.object;
  };
  auto merge = [&](Clause& a, Clause& b) {
    const std::vector<std::string> parts{a.subject.phrase, b.subject.phrase};
    const auto object = a.subject.object;
    absorb(a, b, "interpretation");
    a.subject.form = Subject::Form::compound;
    a.subject.plural = true;
    a.subject.phrase = join_phrases(parts);
    a.subject.object = object;
  };
  return greedy_merge(std::move(clauses), rng, p_rule, compatible, merge);
}

std::vector<AggregatedMotion> aggregate_keypoint(std::vector<Clause> clauses, int T_range, Rng& rng,
                                                 double p_rule) {
  std::stable_sort(clauses.begin(), clauses.end(),
                   [](const Clause& a, const Clause& b) { return clause_order_key(a) < clause_order_key(b); });
  std::vector<AggregatedMotion> chains;
  for (auto& clause : clauses) {
    AggregatedMotion* target = nullptr;
    for (auto it = chains.rbegin(); it != chains.rend(); ++it) {
      const auto& last = it->clauses.back();
      if (last.subject.joints == clause.subject.joints && last.subject.form == clause.subject.form &&
          std::abs(clause.first_bin() - last.last_bin()) <= T_range) {
        target = &*it;
        break;
      }
    }
    if (target && rng.bernoulli(p_rule)) {
      target->clauses.push_back(std::move(clause));
      continue;
    }
    AggregatedMotion item;
    item.clauses.push_back(std::move(clause));
    chains.push_back(std::move(item));
  }

  for (auto& item : chains) {
    item.bin_anchor = item.clauses.front().first_bin();
    item.last_bin = item.bin_anchor;
    for (std::size_t k = 0; k < item.clauses.size(); ++k) {
      const auto& c = item.clauses[k];
      if (k > 0) item.clause_tags.push_back(relation_from_gap(c.first_bin() - item.clauses[k - 1].last_bin()));
      item.bin_anchor = std::min(item.bin_anchor, c.first_bin());
      item.last_bin = std::max(item.last_bin, c.last_bin());
      for (const auto& r : c.rules)
        if (std::find(item.rule_trace.begin(), item.rule_trace.end(), r) == item.rule_trace.end())
          item.rule_trace.push_back(r);
    }
    if (item.clauses.size() > 1) item.rule_trace.emplace_back("keypoint");
    const auto members = item.members();
    for (std::size_t k = 1; k < members.size(); ++k)
      item.relation_tags.push_back(relation_from_gap(members[k]->bin - members[k - 1]->bin));
  }
  return chains;
}

std::vector<AggregatedMotion> order_timecodes(std::vector<AggregatedMotion> items) {
  auto key = [](const AggregatedMotion& m) {
    const auto& first = m.clauses.front().members.front().code;
    return std::make_tuple(m.bin_anchor, first.t_start, first.instance_index);
  };
  std::stable_sort(items.begin(), items.end(),
                   [&](const AggregatedMotion& a, const AggregatedMotion& b) { return key(a) < key(b); });
  for (std::size_t k = 0; k < items.size(); ++k) {
    auto& item = items[k];
    item.lead.reset();
    std::erase(item.rule_trace, std::string("timecode"));
    if (k > 0) {
      item.lead = relation_from_gap(item.bin_anchor - items[k - 1].last_bin);
      if (*item.lead == RelationTag::a_moment_before) item.rule_trace.emplace_back("timecode");
    }
    if (item.rule_trace.empty()) item.rule_trace.emplace_back("singleton");
  }
  return items;
}

std::vector<AggregatedMotion> aggregate_motioncodes(std::span<const Motioncode> selected, const MotionSequence& seq,
                                                    const SkeletonSpec& skeleton, const AggregationConfig& config,
                                                    Rng& rng) {
  config.validate();
  std::vector<Clause> clauses;
  for (const auto& m : make_members(selected, seq, skeleton, config)) clauses.push_back(singleton_clause(m, skeleton));
  clauses = aggregate_symmetry(std::move(clauses), skeleton, rng, config.p_rule);
  clauses = aggregate_entity(std::move(clauses), skeleton, rng, config.p_rule);
  clauses = aggregate_interpretation(std::move(clauses), config.T_range_bins, rng, config.p_rule);
  return order_timecodes(aggregate_keypoint(std::move(clauses), config.T_range_bins, rng, config.p_rule));
}

}  // namespace motionscript
