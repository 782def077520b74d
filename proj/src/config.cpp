#include "motionscript/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace motionscript {

using nlohmann::json;

namespace {

class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    node_ = &root.at(name_);
    if (!node_->is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
    for (const auto& [k, v] : node_->items()) unused_.insert(k);
  }

  template <typename T>
  void read(const char* key, T& out) {
    if (!node_ || !node_->contains(key)) return;
    unused_.erase(key);
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config: " + name_ + "." + key + " has the wrong type");
    }
  }

  void finish() const {
    if (!unused_.empty()) throw ConfigError("config: unknown key " + name_ + "." + *unused_.begin());
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> unused_;
};

}  // namespace

void TextgenConfig::validate() const {
  if (!(p_inject_start >= 0.0 && p_inject_start <= 1.0)) throw std::invalid_argument("p_inject_start outside [0, 1]");
  if (!(p_inject_end >= 0.0 && p_inject_end <= 1.0)) throw std::invalid_argument("p_inject_end outside [0, 1]");
}

void PipelineConfig::validate() const {
  try {
    posecode.validate();
    noise.validate();
    motioncode.validate();
    aggregation.validate();
    salience.validate();
    textgen.validate();
    if (instances.empty()) throw std::invalid_argument("instance list is empty");
    for (const auto& inst : instances) inst.validate();
    if (captions_per_motion < 1) throw std::invalid_argument("captions_per_motion must be at least 1");
    if (threads < 0) throw std::invalid_argument("threads must be non-negative");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

PipelineConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> sections{"posecode",    "noise",   "motioncode", "aggregation",
                                              "textgen",     "pipeline", "instances"};
  for (const auto& [k, v] : root.items())
    if (!sections.count(k)) throw ConfigError("config: unknown section '" + k + "'");

  PipelineConfig c;
  Section p(root, "posecode");
  p.read("angle_edges", c.posecode.angle_edges);
  p.read("distance_edges", c.posecode.distance_edges);
  p.read("relative_position_band", c.posecode.relative_position_band);
  p.read("vertical_cone", c.posecode.vertical_cone);
  p.read("horizontal_cone", c.posecode.horizontal_cone);
  p.read("ground_epsilon", c.posecode.ground_epsilon);
  p.read("orientation_sector", c.posecode.orientation_sector);
  p.read("position_step", c.posecode.position_step);
  p.read("position_max_bin", c.posecode.position_max_bin);
  p.finish();

  Section n(root, "noise");
  n.read("enabled", c.noise.enabled);
  n.read("angle_sigma", c.noise.angle_sigma);
  n.read("distance_sigma", c.noise.distance_sigma);
  n.finish();

  Section m(root, "motioncode");
  m.read("min_run", c.motioncode.min_run);
  m.read("min_transitions", c.motioncode.min_transitions);
  m.read("max_range_seconds", c.motioncode.max_range_seconds);
  m.read("velocity_edges", c.motioncode.velocity.edges);
  m.read("velocity_edge_sigma", c.motioncode.velocity_edge_sigma);
  m.read("intensity_edges", c.motioncode.intensity.edges);
  m.finish();

  Section a(root, "aggregation");
  a.read("T_w_seconds", c.aggregation.T_w_seconds);
  a.read("T_range_bins", c.aggregation.T_range_bins);
  a.read("p_rule", c.aggregation.p_rule);
  a.read("N_max", c.aggregation.N_max);
  a.read("rare_set", c.salience.rare_set);
  a.finish();

  Section t(root, "textgen");
  t.read("subject_threshold", c.aggregation.subject_threshold);
  t.read("p_inject_start", c.textgen.p_inject_start);
  t.read("p_inject_end", c.textgen.p_inject_end);
  t.read("templates", c.textgen.templates);
  t.finish();

  Section pl(root, "pipeline");
  pl.read("seed", c.seed);
  pl.read("captions_per_motion", c.captions_per_motion);
  pl.read("emit_intermediate", c.emit_intermediate);
  pl.read("output_dir", c.output_dir);
  pl.read("threads", c.threads);
  pl.finish();

  if (root.contains("instances")) {
    const auto& list = root.at("instances");
    if (!list.is_array()) throw ConfigError("config: 'instances' must be an array of strings");
    c.instances.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_string()) throw ConfigError("config: instances[" + std::to_string(i) + "] is not a string");
      try {
        c.instances.push_back(parse_instance(list[i].get<std::string>()));
      } catch (const std::exception& e) {
        throw ConfigError("config: instances[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  c.noise.seed = c.seed;
  c.validate();
  return c;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const PipelineConfig& c) {
  json root;
  root["posecode"] = {{"angle_edges", c.posecode.angle_edges},
                      {"distance_edges", c.posecode.distance_edges},
                      {"relative_position_band", c.posecode.relative_position_band},
                      {"vertical_cone", c.posecode.vertical_cone},
                      {"horizontal_cone", c.posecode.horizontal_cone},
                      {"ground_epsilon", c.posecode.ground_epsilon},
                      {"orientation_sector", c.posecode.orientation_sector},
                      {"position_step", c.posecode.position_step},
                      {"position_max_bin", c.posecode.position_max_bin}};
  root["noise"] = {{"enabled", c.noise.enabled},
                   {"angle_sigma", c.noise.angle_sigma},
                   {"distance_sigma", c.noise.distance_sigma}};
  root["motioncode"] = {{"min_run", c.motioncode.min_run},
                        {"min_transitions", c.motioncode.min_transitions},
                        {"max_range_seconds", c.motioncode.max_range_seconds},
                        {"velocity_edges", c.motioncode.velocity.edges},
                        {"velocity_edge_sigma", c.motioncode.velocity_edge_sigma},
                        {"intensity_edges", c.motioncode.intensity.edges}};
  root["aggregation"] = {{"T_w_seconds", c.aggregation.T_w_seconds},
                         {"T_range_bins", c.aggregation.T_range_bins},
                         {"p_rule", c.aggregation.p_rule},
                         {"N_max", c.aggregation.N_max},
                         {"rare_set", c.salience.rare_set}};
  root["textgen"] = {{"subject_threshold", c.aggregation.subject_threshold},
                     {"p_inject_start", c.textgen.p_inject_start},
                     {"p_inject_end", c.textgen.p_inject_end},
                     {"templates", c.textgen.templates}};
  root["pipeline"] = {{"seed", c.seed},
                      {"captions_per_motion", c.captions_per_motion},
                      {"emit_intermediate", c.emit_intermediate},
                      {"output_dir", c.output_dir},
                      {"threads", c.threads}};
  json instances = json::array();
  for (const auto& inst : c.instances) instances.push_back(format_instance(inst));
  root["instances"] = instances;
  return root.dump(2) + "\n";
}

}  // namespace motionscript
