#include "motionscript/textgen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace motionscript {

namespace {

constexpr std::array<std::string_view, 7> kSlots{kSlotSubject,    kSlotVerb, kSlotIntensity, kSlotVelocity,
                                                  kSlotConnective, kSlotPose, kSlotObject};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
}

std::string tidy(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    if ((c == ',' || c == '.') && !out.empty() && out.back() == ' ') out.pop_back();
    out += c;
  }
  while (!out.empty() && (out.front() == ',' || out.front() == ' ')) out.erase(out.begin());
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string capitalize(std::string s) {
  for (auto& c : s)
    if (std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    }
  return s;
}

std::string strip_period(std::string s) {
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string the(const std::string& noun) { return "the " + noun; }

std::vector<std::pair<Family, std::string>> reachable_labels() {
  std::vector<std::pair<Family, std::string>> out;
  for (Family f :
       {Family::angular, Family::proximity, Family::spatial_relation, Family::displacement, Family::rotation})
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
      PosecodeInstance inst;
      inst.axis = a;
      for (const auto& label : direction_labels(f, inst))
        if (std::find(out.begin(), out.end(), std::pair{f, label}) == out.end()) out.emplace_back(f, label);
    }
  return out;
}

std::string verb_section(Family family, std::string_view label) {
  return "verb " + std::string(family_name(family)) + " " + std::string(label);
}

class Renderer {
 public:
  Renderer(const TemplateLibrary& lib, Rng& rng) : lib_(lib), rng_(rng) {}

  std::string pick(const std::string& section, FragmentRecord& rec, std::string_view slot) {
    const auto& list = lib_.section(section);
    std::string s = list[rng_.index(list.size())];
    rec.fillers.push_back(std::string(slot) + "=" + s);
    return s;
  }

  std::string verb(const Clause& c, bool plural, FragmentRecord& rec) {
    std::string v = pick(verb_section(c.family(), c.label()), rec, "verb");
    if (v.find(kSlotObject) != std::string::npos) {
      std::string object = c.subject.object;
      if (c.subject.form == Subject::Form::mutual || object.empty()) object = pick("mutual", rec, "object");
      replace_all(v, kSlotObject, object);
    }
    return plural ? pluralize_verb(v) : v;
  }

  std::string intensity(const Clause& c, FragmentRecord& rec) {
    if (!c.intensity()) return {};
    return pick("intensity " + std::string(intensity_name(*c.intensity())), rec, "intensity");
  }

  std::string velocity(const Clause& c, FragmentRecord& rec) {
    return pick("velocity " + std::string(velocity_name(c.members.front().code.velocity_class)), rec, "velocity");
  }

  std::string connective(RelationTag tag, FragmentRecord& rec) {
    return pick("connective " + std::string(relation_name(tag)), rec, "connective");
  }

  std::string motion_sentence(const Clause& c, const std::string& subject, bool plural,
                              const std::string& connective_text, FragmentRecord& rec) {
    std::string s = pick("skeleton", rec, "skeleton");
    replace_all(s, kSlotConnective, connective_text);
    replace_all(s, kSlotSubject, subject);
    replace_all(s, kSlotVerb, verb(c, plural, rec));
    replace_all(s, kSlotIntensity, intensity(c, rec));
    replace_all(s, kSlotVelocity, velocity(c, rec));
    return capitalize(tidy(s));
  }

  std::string continuation(const Clause& c, bool plural, FragmentRecord& rec) {
    return verb(c, plural, rec) + " " + intensity(c, rec) + " " + velocity(c, rec);
  }

 private:
  const TemplateLibrary& lib_;
  Rng& rng_;
};

void add_semantics(FragmentRecord& rec, const Clause& c, std::string_view subject,
                   std::optional<RelationTag> connective) {
  rec.semantics.push_back("subject=" + std::string(subject));
  rec.semantics.push_back("verb=" + std::string(family_name(c.family())) + ":" + c.label());
  rec.semantics.push_back("intensity=" +
                          std::string(c.intensity() ? intensity_name(*c.intensity()) : std::string_view("none")));
  rec.semantics.push_back("velocity=" + std::string(velocity_name(c.members.front().code.velocity_class)));
  rec.semantics.push_back("connective=" +
                          std::string(connective ? relation_name(*connective) : std::string_view("none")));
}

}  // namespace

double injection_weight(const std::vector<int>& joints, const std::vector<int>& targets) {
  double extra = 0.0;
  for (int j : joints)
    if (std::find(targets.begin(), targets.end(), j) == targets.end()) extra += 1.0;
  return 1.0 + extra;
}

InjectionResult choose_pose_injection(const std::vector<int>& targets,
                                      std::span<const InjectionCandidate> candidates) {
  std::vector<int> remaining = targets;
  std::sort(remaining.begin(), remaining.end());
  remaining.erase(std::unique(remaining.begin(), remaining.end()), remaining.end());

  InjectionResult result;
  std::vector<bool> taken(candidates.size(), false);
  while (!remaining.empty()) {
    std::size_t best = candidates.size();
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      const auto& joints = candidates[i].joints;
      const auto fresh = std::count_if(remaining.begin(), remaining.end(), [&](int t) {
        return std::find(joints.begin(), joints.end(), t) != joints.end();
      });
      if (fresh == 0) continue;
      const double ratio = static_cast<double>(fresh) / candidates[i].weight;
      if (best == candidates.size() || ratio > best_ratio) {
        best = i;
        best_ratio = ratio;
      }
    }
    if (best == candidates.size()) break;
    taken[best] = true;
    result.chosen.push_back(best);
    result.total_weight += candidates[best].weight;
    const auto& joints = candidates[best].joints;
    std::erase_if(remaining, [&](int t) { return std::find(joints.begin(), joints.end(), t) != joints.end(); });
  }
  result.uncovered = remaining;
  return result;
}

std::string describe_posecode(const PosecodeInstance& instance, std::string_view category,
                              const SkeletonSpec& skeleton) {
  const auto& j = instance.joints;
  const std::string cat(category);
  switch (instance.kind) {
    case PosecodeKind::angle:
      return the(skeleton.display_name(j[1])) + " is " + cat;
    case PosecodeKind::distance: {
      std::string rel = cat;
      if (cat == "shoulder width") rel = "shoulder width apart";
      if (cat == "spread") rel = "spread apart";
      return the(skeleton.display_name(j[0])) + " and " + the(skeleton.display_name(j[1])) + " are " + rel;
    }
    case PosecodeKind::relative_position: {
      std::string rel = cat;
      if (cat == "right of" || cat == "left of") rel = "to the " + cat;
      return the(skeleton.display_name(j[0])) + " is " + rel + " " + the(skeleton.display_name(j[1]));
    }
    case PosecodeKind::pitch_roll:
      return "the segment from " + the(skeleton.display_name(j[0])) + " to " + the(skeleton.display_name(j[1])) +
             " is " + cat;
    case PosecodeKind::ground_contact:
      return the(skeleton.display_name(j[0])) + (cat == "on the ground" ? " is on the ground" : " is off the ground");
    case PosecodeKind::orientation:
      return "the body is rotated " + cat + " about the " + std::string(axis_name(instance.axis)) + " axis";
    case PosecodeKind::position:
      return the(skeleton.display_name(j[0])) + " is displaced " + cat + " along " +
             std::string(axis_name(instance.axis));
  }
  return {};
}

std::string describe_symmetric_posecode(const PosecodeInstance& instance, std::string_view category,
                                        const SkeletonSpec& skeleton) {
  if (instance.kind != PosecodeKind::angle) throw std::invalid_argument("symmetric description needs an angle");
  return "both " + skeleton.plural_name(instance.joints[1]) + " are " + std::string(category);
}

std::string pluralize_verb(std::string_view phrase) {
  const auto space = phrase.find(' ');
  std::string head(phrase.substr(0, space));
  const std::string rest = space == std::string_view::npos ? std::string() : std::string(phrase.substr(space));
  static const std::map<std::string, std::string> irregular{
      {"is", "are"}, {"has", "have"}, {"does", "do"}, {"goes", "go"}};
  auto ends = [&](std::string_view suffix) {
    return head.size() > suffix.size() && head.compare(head.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (auto it = irregular.find(head); it != irregular.end())
    head = it->second;
  else if (ends("ies"))
    head = head.substr(0, head.size() - 3) + "y";
  else if (ends("ches") || ends("shes") || ends("sses") || ends("xes") || ends("zes"))
    head.resize(head.size() - 2);
  else if (ends("s") && !ends("ss"))
    head.pop_back();
  return head + rest;
}

TemplateLibrary TemplateLibrary::parse(std::string_view text) {
  TemplateLibrary lib;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string current;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw std::runtime_error("templates line " + std::to_string(n) + ": unterminated header");
      current = trim(std::string_view(t).substr(1, t.size() - 2));
      if (current.empty()) throw std::runtime_error("templates line " + std::to_string(n) + ": empty header");
      lib.sections_[current];
      continue;
    }
    if (current.empty())
      throw std::runtime_error("templates line " + std::to_string(n) + ": phrase outside a section");
    lib.sections_[current].push_back(t);
  }
  lib.validate();
  return lib;
}

TemplateLibrary TemplateLibrary::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open template file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const TemplateLibrary& TemplateLibrary::builtin() {
  static const TemplateLibrary lib = parse(builtin_template_text());
  return lib;
}

const std::vector<std::string>& TemplateLibrary::section(const std::string& name) const {
  auto it = sections_.find(name);
  if (it == sections_.end() || it->second.empty())
    throw std::runtime_error("template section [" + name + "] is missing or empty");
  return it->second;
}

const std::vector<std::string>& TemplateLibrary::verbs(Family family, std::string_view label) const {
  return section(verb_section(family, label));
}

void TemplateLibrary::validate() const {
  std::vector<std::string> required{"skeleton", "pose", "mutual", "transition pose-to-motion",
                                    "transition motion-to-pose"};
  for (auto i : {Intensity::slight, Intensity::moderate, Intensity::significant})
    required.push_back("intensity " + std::string(intensity_name(i)));
  for (auto v : {VelocityClass::very_slow, VelocityClass::slow, VelocityClass::moderate, VelocityClass::fast,
                 VelocityClass::very_fast})
    required.push_back("velocity " + std::string(velocity_name(v)));
  for (auto r : {RelationTag::simultaneous, RelationTag::immediately_after, RelationTag::few_seconds_later,
                 RelationTag::a_moment_before})
    required.push_back("connective " + std::string(relation_name(r)));
  for (const auto& [f, label] : reachable_labels()) required.push_back(verb_section(f, label));
  for (const auto& name : required) section(name);

  for (const auto& [name, phrases] : sections_)
    for (const auto& p : phrases) {
      for (std::size_t pos = 0; (pos = p.find("⟨", pos)) != std::string::npos; ++pos) {
        const auto end = p.find("⟩", pos);
        if (end == std::string::npos) throw std::runtime_error("[" + name + "] unterminated slot in '" + p + "'");
        const auto slot = std::string_view(p).substr(pos, end + std::string_view("⟩").size() - pos);
        if (std::find(kSlots.begin(), kSlots.end(), slot) == kSlots.end())
          throw std::runtime_error("[" + name + "] unknown slot " + std::string(slot));
      }
    }
  for (const auto& s : section("skeleton"))
    if (s.find(kSlotSubject) == std::string::npos || s.find(kSlotVerb) == std::string::npos)
      throw std::runtime_error("skeleton '" + s + "' needs subject and verb slots");
  for (const auto& s : section("pose"))
    if (s.find(kSlotPose) == std::string::npos) throw std::runtime_error("pose skeleton '" + s + "' needs a pose slot");
  for (const auto& s : section("transition motion-to-pose"))
    if (s.find(kSlotPose) == std::string::npos)
      throw std::runtime_error("motion-to-pose transition '" + s + "' needs a pose slot");
}

CaptionDocument render_caption(std::span<const AggregatedMotion> items, std::span<const PoseInjection> injections,
                               const TemplateLibrary& templates, Rng& rng) {
  if (!injections.empty() && injections.size() != items.size())
    throw std::invalid_argument("one pose injection entry per aggregated motion expected");
  CaptionDocument doc;
  if (items.empty()) {
    doc.no_salient_motion = true;
    return doc;
  }
  Renderer r(templates, rng);
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& item = items[k];
    const PoseInjection none;
    const auto& inj = injections.empty() ? none : injections[k];
    FragmentRecord rec;
    std::vector<std::string> sentences;

    std::string lead = item.lead ? r.connective(*item.lead, rec) : std::string();
    if (!inj.start.empty()) {
      const auto pose = join(inj.start, " and ");
      std::string s = r.pick("pose", rec, "pose-skeleton");
      replace_all(s, kSlotConnective, lead);
      replace_all(s, kSlotPose, pose);
      sentences.push_back(capitalize(tidy(s)));
      rec.semantics.push_back("pose-start=" + pose);
      lead = r.pick("transition pose-to-motion", rec, "transition");
      doc.injected_posecodes.insert(doc.injected_posecodes.end(), inj.start.begin(), inj.start.end());
    }

    const auto& head = item.clauses.front();
    add_semantics(rec, head, head.subject.phrase, item.lead);
    sentences.push_back(r.motion_sentence(head, head.subject.phrase, head.subject.plural, lead, rec));
    const std::string pronoun = head.subject.plural ? "they" : "it";
    for (std::size_t c = 1; c < item.clauses.size(); ++c) {
      const auto& clause = item.clauses[c];
      const auto tag = item.clause_tags[c - 1];
      add_semantics(rec, clause, pronoun, tag);
      if (tag == RelationTag::simultaneous) {
        sentences.back() =
            tidy(strip_period(sentences.back()) + " and " + r.continuation(clause, head.subject.plural, rec) + ".");
      } else {
        sentences.push_back(
            r.motion_sentence(clause, pronoun, head.subject.plural, r.connective(tag, rec), rec));
      }
    }

    if (!inj.end.empty()) {
      const auto pose = join(inj.end, " and ");
      std::string t = r.pick("transition motion-to-pose", rec, "transition");
      replace_all(t, kSlotPose, pose);
      sentences.back() = tidy(strip_period(sentences.back()) + ", " + t + ".");
      rec.semantics.push_back("pose-end=" + pose);
      doc.injected_posecodes.insert(doc.injected_posecodes.end(), inj.end.begin(), inj.end.end());
    }

    doc.sentences.push_back(join(sentences, " "));
    doc.fragments.push_back(std::move(rec));
  }
  doc.text = join(doc.sentences, " ");
  return doc;
}

SubjectChoice select_subject(double d_a, double d_b, int joint_a, int joint_b, double threshold) {
  SubjectChoice out;
  const double total = d_a + d_b;
  if (!(total > 0.0)) {
    out.mode = SubjectChoice::Mode::mutual;
    out.share = 0.5;
    return out;
  }
  const bool a_leads = d_a >= d_b;
  out.share = (a_leads ? d_a : d_b) / total;
  if (out.share >= threshold) {
    out.mode = SubjectChoice::Mode::single_joint;
    out.joint = a_leads ? joint_a : joint_b;
  } else {
    out.mode = SubjectChoice::Mode::mutual;
  }
  return out;
}

SubjectChoice select_subject(const Motioncode& code, const MotionSequence& seq, double threshold) {
  const auto& inst = code.instance;
  if (inst.kind == PosecodeKind::distance || inst.kind == PosecodeKind::relative_position) {
    const int a = inst.joints[0], b = inst.joints[1];
    const auto& f0 = seq.frames.at(static_cast<std::size_t>(code.t_start));
    const auto& f1 = seq.frames.at(static_cast<std::size_t>(code.t_end));
    const double d_a = (f1.row(a) - f0.row(a)).norm();
    const double d_b = (f1.row(b) - f0.row(b)).norm();
    return select_subject(d_a, d_b, a, b, threshold);
  }
  SubjectChoice out;
  out.joint = inst.kind == PosecodeKind::angle ? inst.joints[1] : inst.joints[0];
  return out;
}

}  // namespace motionscript
