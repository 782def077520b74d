#include "motionscript/pipeline.hpp"

#include "motionscript/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

namespace motionscript {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool injectable(PosecodeKind kind) {
  return kind == PosecodeKind::angle || kind == PosecodeKind::distance || kind == PosecodeKind::relative_position;
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  return std::any_of(a.begin(), a.end(), [&](int j) { return std::find(b.begin(), b.end(), j) != b.end(); });
}

std::vector<std::vector<int>> stable_timelines(std::span<const PosecodeTimeline> timelines, int min_run) {
  std::vector<std::vector<int>> out;
  out.reserve(timelines.size());
  for (const auto& t : timelines) out.push_back(stabilize_categories(fill_ignored(t.categories), min_run));
  return out;
}

std::vector<std::string> inject_at(int frame, const std::vector<int>& targets, const std::vector<PosecodeKind>& kinds,
                                   const std::vector<std::size_t>& own, std::span<const PosecodeTimeline> timelines,
                                   const std::vector<std::vector<int>>& stable,
                                   std::span<const PosecodeInstance> instances, const SkeletonSpec& skeleton) {
  auto category = [&](std::size_t i) -> std::optional<int> {
    if (stable[i].empty()) return std::nullopt;
    return stable[i][static_cast<std::size_t>(frame)];
  };

  std::vector<InjectionCandidate> candidates;
  std::vector<std::size_t> order = own;
  for (std::size_t i = 0; i < timelines.size(); ++i)
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  for (std::size_t i : order) {
    const auto& inst = timelines[i].instance;
    if (std::find(kinds.begin(), kinds.end(), inst.kind) == kinds.end()) continue;
    const auto c = category(i);
    if (!c) continue;
    const auto joints = inst.key_joints();
    if (!intersects(joints, targets)) continue;
    candidates.push_back({describe_posecode(inst, timelines[i].name_of(*c), skeleton), joints,
                          injection_weight(joints, targets)});
  }
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    const auto& inst = timelines[i].instance;
    if (inst.kind != PosecodeKind::angle || skeleton.side(inst.joints[1]) != Side::left) continue;
    if (std::find(kinds.begin(), kinds.end(), inst.kind) == kinds.end()) continue;
    const auto m = find_mirror_instance(instances, i);
    if (!m) continue;
    const auto a = category(i), b = category(m->index);
    if (!a || !b || *a != *b) continue;
    const std::vector<int> joints{inst.joints[1], timelines[m->index].instance.joints[1]};
    if (!intersects(joints, targets)) continue;
    candidates.push_back({describe_symmetric_posecode(inst, timelines[i].name_of(*a), skeleton), joints,
                          injection_weight(joints, targets)});
  }

  std::vector<std::string> out;
  for (std::size_t k : choose_pose_injection(targets, candidates).chosen) out.push_back(candidates[k].description);
  return out;
}

json code_json(const Motioncode& c) {
  return {{"instance", format_instance(c.instance)},
          {"instance_index", c.instance_index},
          {"family", family_name(c.family)},
          {"t_start", c.t_start},
          {"t_end", c.t_end},
          {"spatial", c.spatial},
          {"velocity", c.velocity},
          {"velocity_class", velocity_name(c.velocity_class)},
          {"intensity", c.intensity ? json(intensity_name(*c.intensity)) : json(nullptr)},
          {"direction_label", c.direction_label},
          {"start_category", c.start_category},
          {"end_category", c.end_category}};
}

json names_json(const std::vector<int>& joints, const SkeletonSpec& skeleton) {
  json out = json::array();
  for (int j : joints) out.push_back(skeleton.name(j));
  return out;
}

json item_json(const AggregatedMotion& item, const SkeletonSpec& skeleton) {
  json clauses = json::array();
  for (const auto& c : item.clauses) {
    json members = json::array();
    for (const auto& m : c.members) {
      json mj = code_json(m.code);
      mj["bin"] = m.bin;
      mj["effective_label"] = m.label;
      mj["focus"] = names_json(m.focus, skeleton);
      mj["counterpart"] = m.counterpart < 0 ? json(nullptr) : json(skeleton.name(m.counterpart));
      mj["subject_mode"] = m.subject.mode == SubjectChoice::Mode::mutual ? "mutual" : "single-joint";
      mj["share"] = m.subject.share;
      members.push_back(std::move(mj));
    }
    clauses.push_back({{"subject",
                        {{"form", form_name(c.subject.form)},
                         {"phrase", c.subject.phrase},
                         {"plural", c.subject.plural},
                         {"object", c.subject.object},
                         {"joints", names_json(c.subject.joints, skeleton)}}},
                       {"rules", c.rules},
                       {"members", std::move(members)}});
  }
  json tags = json::array(), ctags = json::array();
  for (auto t : item.relation_tags) tags.push_back(relation_name(t));
  for (auto t : item.clause_tags) ctags.push_back(relation_name(t));
  return {{"bin_anchor", item.bin_anchor},
          {"last_bin", item.last_bin},
          {"lead", item.lead ? json(relation_name(*item.lead)) : json(nullptr)},
          {"rule_trace", item.rule_trace},
          {"relation_tags", tags},
          {"clause_tags", ctags},
          {"clauses", std::move(clauses)}};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t input_index, std::uint64_t caption_index) {
  return hash_key(seed, input_index, caption_index, 0x63617074ULL);
}

std::vector<PoseInjection> plan_injections(std::span<const AggregatedMotion> items,
                                           std::span<const PosecodeTimeline> timelines, const PipelineConfig& config,
                                           const SkeletonSpec& skeleton, Rng& rng) {
  const auto stable = stable_timelines(timelines, config.motioncode.min_run);
  std::vector<PoseInjection> out(items.size());
  for (std::size_t k = 0; k < items.size(); ++k) {
    const bool want_start = rng.bernoulli(config.textgen.p_inject_start);
    const bool want_end = rng.bernoulli(config.textgen.p_inject_end);
    std::vector<int> targets;
    std::vector<PosecodeKind> kinds;
    std::vector<std::size_t> own;
    int first = -1, last = -1;
    for (const auto* m : items[k].members()) {
      if (!injectable(m->code.instance.kind)) continue;
      targets.insert(targets.end(), m->focus.begin(), m->focus.end());
      kinds.push_back(m->code.instance.kind);
      own.push_back(m->code.instance_index);
      first = first < 0 ? m->code.t_start : std::min(first, m->code.t_start);
      last = std::max(last, m->code.t_end);
    }
    if (targets.empty()) continue;
    if (want_start)
      out[k].start = inject_at(first, targets, kinds, own, timelines, stable, config.instances, skeleton);
    if (want_end) out[k].end = inject_at(last, targets, kinds, own, timelines, stable, config.instances, skeleton);
  }
  return out;
}

CaptionDocument caption_sequence(const MotionSequence& seq, const PipelineConfig& config, std::uint64_t seed,
                                 const TemplateLibrary& templates, PipelineStages* stages) {
  PipelineStages local;
  PipelineStages& s = stages ? *stages : local;
  const auto& skeleton = SkeletonSpec::canonical();

  s.warnings.clear();
  s.normalized = normalize_sequence(seq, &s.warnings);
  NoiseConfig noise = config.noise;
  noise.seed = seed;
  s.timelines = extract_posecode_timelines(s.normalized, config.instances, noise, config.posecode);
  s.motioncodes = build_motioncodes(s.timelines, s.normalized, config.motioncode, noise);
  s.selected = select_motioncodes(s.motioncodes, config.salience, config.aggregation.N_max);

  Rng rng(seed);
  s.aggregated = aggregate_motioncodes(s.selected, s.normalized, skeleton, config.aggregation, rng);
  s.injections = plan_injections(s.aggregated, s.timelines, config, skeleton, rng);
  CaptionDocument doc = render_caption(s.aggregated, s.injections, templates, rng);
  doc.seed = seed;
  doc.intermediate = intermediate_json(s, doc);
  return doc;
}

std::string intermediate_json(const PipelineStages& s, const CaptionDocument& doc) {
  const auto& skeleton = SkeletonSpec::canonical();
  json root;
  root["seed"] = doc.seed;
  root["fps"] = s.normalized.fps;
  root["frames"] = s.normalized.frame_count();
  root["warnings"] = s.warnings;

  json timelines = json::array();
  for (const auto& t : s.timelines) {
    json cats = json::array();
    for (int c : t.categories) cats.push_back(c == kIgnored ? json(nullptr) : json(c));
    timelines.push_back({{"instance", format_instance(t.instance)}, {"categories", std::move(cats)}});
  }
  root["timelines"] = std::move(timelines);

  json codes = json::array(), selected = json::array(), items = json::array(), injections = json::array();
  for (const auto& c : s.motioncodes) codes.push_back(code_json(c));
  for (const auto& c : s.selected) selected.push_back(code_json(c));
  for (const auto& item : s.aggregated) items.push_back(item_json(item, skeleton));
  for (const auto& inj : s.injections) injections.push_back({{"start", inj.start}, {"end", inj.end}});
  root["motioncodes"] = std::move(codes);
  root["selected"] = std::move(selected);
  root["aggregation"] = std::move(items);
  root["injections"] = std::move(injections);

  json fragments = json::array();
  for (const auto& f : doc.fragments) fragments.push_back({{"semantics", f.semantics}, {"fillers", f.fillers}});
  root["caption"] = {{"text", doc.text},
                     {"sentences", doc.sentences},
                     {"no_salient_motion", doc.no_salient_motion},
                     {"injected_posecodes", doc.injected_posecodes},
                     {"fragments", std::move(fragments)}};
  return root.dump(1) + "\n";
}

std::vector<Motioncode> collect_corpus_motioncodes(const std::string& dir, MotionFormat format,
                                                   const PipelineConfig& config) {
  const std::string ext = format == MotionFormat::canonical_json ? ".json" : ".csv";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  NoiseConfig noise = config.noise;
  noise.enabled = false;
  std::vector<Motioncode> out;
  for (const auto& f : files) {
    try {
      const auto seq = normalize_sequence(load_motion_file(f, format));
      const auto timelines = extract_posecode_timelines(seq, config.instances, noise, config.posecode);
      const auto codes = build_motioncodes(timelines, seq, config.motioncode, noise);
      out.insert(out.end(), codes.begin(), codes.end());
    } catch (const std::exception&) {
      // unreadable corpus files do not contribute
    }
  }
  return out;
}

std::size_t RunReport::failures() const {
  return static_cast<std::size_t>(std::count_if(inputs.begin(), inputs.end(), [](const auto& r) { return !r.ok; }));
}

std::string RunReport::to_json() const {
  json list = json::array();
  for (const auto& r : inputs)
    list.push_back({{"path", r.path},
                    {"ok", r.ok},
                    {"error", r.ok ? json(nullptr) : json(r.error)},
                    {"outputs", r.outputs}});
  return json{{"inputs", std::move(list)}, {"failures", failures()}}.dump(2) + "\n";
}

RunReport run_pipeline(const PipelineConfig& config, const std::vector<std::string>& inputs, MotionFormat format,
                       const TemplateLibrary& templates) {
  config.validate();
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  RunReport report;
  report.inputs.resize(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      auto& r = report.inputs[i];
      r.path = inputs[i];
      try {
        const auto seq = parse_motion(read_file(inputs[i]), format);
        const auto stem = fs::path(inputs[i]).stem().string();
        for (int k = 0; k < config.captions_per_motion; ++k) {
          const auto seed = derive_seed(config.seed, i, static_cast<std::uint64_t>(k));
          const auto doc = caption_sequence(seq, config, seed, templates);
          const auto base = out_dir / (stem + "." + std::to_string(k));
          write_file(base.string() + ".txt", doc.text + "\n");
          r.outputs.push_back(base.filename().string() + ".txt");
          if (config.emit_intermediate) {
            write_file(base.string() + ".dump", doc.intermediate);
            r.outputs.push_back(base.filename().string() + ".dump");
          }
        }
        r.ok = true;
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    }
  };

  unsigned n = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  n = std::clamp<unsigned>(n, 1, static_cast<unsigned>(std::max<std::size_t>(1, inputs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  write_file(out_dir / "report.json", report.to_json());
  return report;
}

}  // namespace motionscript
