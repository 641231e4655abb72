#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gdifs/dimension.hpp"
#include "gdifs/graph.hpp"
#include "gdifs/serialize.hpp"
#include "gdifs/similitude.hpp"

namespace gdifs {

// Tunables shared by the pipeline stages. Every knob has the same default
// the underlying module uses, so an empty options table changes nothing.
struct PipelineOptions {
    int max_vertices = 10000;            // neighbor-graph vertex budget
    std::size_t max_equations = std::size_t(1) << 20;
    std::size_t state_budget = std::size_t(1) << 18;
    double prune_slack = 1e-6;
    double spectral_tolerance = 1e-9;
    int render_depth = 6;
    std::string out_dir;                 // empty: use GDIFS_OUT_DIR or "."
};

// A parsed run configuration. Exactly one of the four inputs is set:
//   ifs            — similitudes over an explicit number field,
//   overlap_graph  — an imported overlap graph (skips the geometry stages),
//   weighted       — attractor equations with per-term contraction ratios,
//   matrix         — a bare incidence matrix with a common ratio.
struct PipelineConfig {
    std::string name = "run";
    std::optional<IfsSpec> ifs;
    std::optional<LabeledDigraph> overlap_graph;
    std::optional<WeightedGifs> weighted;
    std::optional<IncidenceMatrix> matrix;
    double matrix_ratio = 0.0;           // contraction ratio paired with `matrix`
    std::vector<int> ordering;           // 1-based permutation already applied to `ifs`
    std::vector<std::pair<Similitude, Similitude>> identifications;
    PipelineOptions options;
};

// Builds a config from an already-parsed document. `default_name` is used
// when the document has no "name" key. Collects every violation and throws
// a single ValidationError naming each offending field.
PipelineConfig config_from_json(const json& doc, const std::string& default_name);

// Reads a config file. ".toml" files go through the TOML-subset reader and
// are normalized to the JSON document model first; everything else is JSON.
PipelineConfig parse_config(const std::string& path);

} // namespace gdifs
