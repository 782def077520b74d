// Batch captioner: motion files in, caption text files (and optional dumps) out.

#include "motionscript/config.hpp"
#include "motionscript/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace motionscript;

int main(int argc, char** argv) {
  CLI::App app{"Caption 22-joint motion sequences"};
  std::string config_path, corpus_dir, format_text = "canonical-json", out_dir;
  std::uint64_t seed = 0;
  int captions = 0;
  bool no_noise = false, emit = false;
  std::vector<std::string> inputs;

  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Base seed");
  app.add_flag("--no-noise", no_noise, "Disable threshold noise");
  auto* captions_opt = app.add_option("--captions-per-motion", captions, "Captions per input");
  app.add_flag("--emit-intermediate", emit, "Write <stem>.k.dump next to each caption");
  app.add_option("--stats-corpus", corpus_dir, "Recompute salience statistics from this directory")
      ->check(CLI::ExistingDirectory);
  app.add_option("--format", format_text, "canonical-json or flat-csv")
      ->check(CLI::IsMember({"canonical-json", "flat-csv"}));
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  app.add_option("inputs", inputs, "Motion files")->required();
  CLI11_PARSE(app, argc, argv);

  PipelineConfig config;
  const auto format = parse_motion_format(format_text);
  try {
    if (!config_path.empty()) config = load_config_file(config_path);
    if (*seed_opt) config.seed = seed;
    if (no_noise) config.noise.enabled = false;
    if (*captions_opt) config.captions_per_motion = captions;
    if (emit) config.emit_intermediate = true;
    if (*out_opt) config.output_dir = out_dir;
    config.noise.seed = config.seed;
    if (!corpus_dir.empty()) {
      config.salience = salience_from_corpus(collect_corpus_motioncodes(corpus_dir, format, config));
      std::cerr << "salience: " << config.salience.rare_set.size() << " rare combinations from " << corpus_dir
                << "\n";
    }
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::optional<TemplateLibrary> custom;
  try {
    if (!config.textgen.templates.empty()) custom = TemplateLibrary::load_file(config.textgen.templates);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  RunReport report;
  try {
    report = run_pipeline(config, inputs, format, custom ? *custom : TemplateLibrary::builtin());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  for (const auto& r : report.inputs)
    if (!r.ok) std::cerr << r.path << ": " << r.error << "\n";
  return report.exit_code();
}
