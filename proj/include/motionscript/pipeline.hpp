#pragma once

#include "motionscript/aggregate.hpp"
#include "motionscript/config.hpp"
#include "motionscript/motion_io.hpp"
#include "motionscript/motioncode.hpp"
#include "motionscript/posecode.hpp"
#include "motionscript/textgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace motionscript {

/// Everything computed for one caption, kept for inspection and dumps.
struct PipelineStages {
  MotionSequence normalized;
  std::vector<std::string> warnings;
  std::vector<PosecodeTimeline> timelines;
  std::vector<Motioncode> motioncodes;
  std::vector<Motioncode> selected;
  std::vector<AggregatedMotion> aggregated;
  std::vector<PoseInjection> injections;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t input_index, std::uint64_t caption_index);

/// Start/end pose descriptions for each aggregated motion, drawn with the
/// configured probabilities and chosen by weighted set cover.
std::vector<PoseInjection> plan_injections(std::span<const AggregatedMotion> items,
                                           std::span<const PosecodeTimeline> timelines, const PipelineConfig& config,
                                           const SkeletonSpec& skeleton, Rng& rng);

/// Runs every stage on one (raw or normalized) sequence. The seed drives the
/// posecode noise, rule application, injection and template choice.
CaptionDocument caption_sequence(const MotionSequence& seq, const PipelineConfig& config, std::uint64_t seed,
                                 const TemplateLibrary& templates = TemplateLibrary::builtin(),
                                 PipelineStages* stages = nullptr);

/// Stable JSON rendering of the stages and the rendered caption.
std::string intermediate_json(const PipelineStages& stages, const CaptionDocument& doc);

/// Motioncodes of every readable file in a directory, for corpus salience.
std::vector<Motioncode> collect_corpus_motioncodes(const std::string& dir, MotionFormat format,
                                                   const PipelineConfig& config);

struct InputReport {
  std::string path;
  bool ok = false;
  std::string error;
  std::vector<std::string> outputs;
};

struct RunReport {
  std::vector<InputReport> inputs;
  std::size_t failures() const;
  int exit_code() const { return failures() == 0 ? 0 : 1; }
  std::string to_json() const;
};

/// Captions every input into config.output_dir (`<stem>.k.txt`, optional
/// `<stem>.k.dump`) and writes report.json. Failing inputs are reported and
/// do not stop the others.
RunReport run_pipeline(const PipelineConfig& config, const std::vector<std::string>& inputs, MotionFormat format,
                       const TemplateLibrary& templates = TemplateLibrary::builtin());

}  // namespace motionscript
