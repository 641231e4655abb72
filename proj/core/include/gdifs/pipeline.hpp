#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdifs/config.hpp"
#include "gdifs/gifs.hpp"
#include "gdifs/graph.hpp"
#include "gdifs/reduce.hpp"
#include "gdifs/serialize.hpp"

namespace gdifs {

// Everything a run produced: the summary document, the artifact filenames
// (relative to the output directory), and in-memory handles so callers can
// inspect intermediate objects without re-reading the files.
struct PipelineResult {
    json summary;
    std::vector<std::string> files;
    std::optional<LabeledDigraph> neighbor;
    std::optional<LabeledDigraph> overlap;
    std::optional<GifsSystem> raw;
    std::optional<GifsSystem> reduced;
    std::optional<ReductionReport> report;
    json dimension; // dimension report, or null if the stage did not run
};

// The stage chain this config's input supports, in execution order:
//   similitude maps   -> nbr overlap gifs reduce dim render
//   imported graph    ->     overlap gifs reduce dim
//   weighted / matrix ->                        dim
std::vector<std::string> available_stages(const PipelineConfig& config);

// Runs the requested stages, which must form an unbroken prefix of
// available_stages(config); an empty request means the whole chain.
// Artifacts are written under `out_dir` (config option or the GDIFS_OUT_DIR
// environment variable when empty) with content-addressed names plus a
// stable "-latest" alias. Failures are rethrown with the stage name.
PipelineResult run_pipeline(const PipelineConfig& config,
                            std::vector<std::string> stages = {},
                            std::string out_dir = {});

} // namespace gdifs
