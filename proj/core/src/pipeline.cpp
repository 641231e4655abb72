#include "gdifs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "gdifs/dimension.hpp"
#include "gdifs/errors.hpp"
#include "gdifs/render.hpp"

namespace gdifs {

namespace {

std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// Wraps a stage body so every failure names the stage that raised it while
// keeping the error category (and therefore the CLI exit code).
template <typename Fn>
auto with_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + stage + ": " + e.what());
    } catch (const BudgetError& e) {
        throw BudgetError("stage " + stage + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("stage " + stage + ": " + e.what());
    } catch (const Error& e) {
        throw Error("stage " + stage + ": " + e.what());
    }
}

class ArtifactWriter {
public:
    ArtifactWriter(std::string dir, std::string name)
        : dir_(std::move(dir)), name_(std::move(name)) {}

    // Writes <name>-<artifact>-<hash>.<ext> plus the -latest alias and
    // returns the content-addressed filename.
    std::string write(const std::string& artifact, const std::string& ext,
                      const std::string& content) {
        const std::string primary = name_ + "-" + artifact + "-" + fnv1a64(content) + "." + ext;
        const std::string alias = name_ + "-" + artifact + "-latest." + ext;
        save_text(join(primary), content);
        save_text(join(alias), content);
        files.push_back(primary);
        return primary;
    }

    void write_alias_only(const std::string& filename, const std::string& content) {
        save_text(join(filename), content);
        files.push_back(filename);
    }

    std::vector<std::string> files;

private:
    std::string join(const std::string& leaf) const {
        return (std::filesystem::path(dir_) / leaf).string();
    }

    std::string dir_;
    std::string name_;
};

int find_vertex(const LabeledDigraph& g, const Similitude& s) {
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (g.vertices[v] == s) return static_cast<int>(v);
    return -1;
}

json graph_counts(const LabeledDigraph& g) {
    return json{{"vertices", g.vertex_count()},
                {"proper_vertices", g.vertex_count() - 1},
                {"edges", g.edges.size()}};
}

IncidenceMatrix weighted_multiplicity(const WeightedGifs& w) {
    const int n = static_cast<int>(w.equations.size());
    IncidenceMatrix m = IncidenceMatrix::zero(n);
    for (int k = 0; k < n; ++k)
        for (const WeightedTerm& t : w.equations[k]) {
            if (t.target < 1 || t.target > n)
                throw ValidationError("weighted equation " + std::to_string(k + 1) +
                                      " targets attractor " + std::to_string(t.target) +
                                      " outside 1.." + std::to_string(n));
            m.entries[k][t.target - 1] += 1;
        }
    return m;
}

json dimension_report_for_matrix(const IncidenceMatrix& m, double ratio,
                                 std::optional<double> beta_override) {
    json rep;
    rep["matrix"] = to_json(m);
    Polynomial cp = char_poly(m);
    rep["char_poly"] = to_json(cp);
    const double rho = spectral_radius(m);
    rep["spectral_radius"] = rho;
    if (beta_override) {
        rep["beta"] = *beta_override;
    } else if (ratio > 0.0 && ratio < 1.0) {
        rep["beta"] = std::log(rho) / -std::log(ratio);
    } else {
        rep["beta"] = nullptr;
    }
    auto factor = factor_containing(cp, rho);
    rep["perron_factor"] = factor ? to_json(*factor) : json(nullptr);
    return rep;
}

} // namespace

std::vector<std::string> available_stages(const PipelineConfig& config) {
    if (config.ifs) return {"nbr", "overlap", "gifs", "reduce", "dim", "render"};
    if (config.overlap_graph) return {"overlap", "gifs", "reduce", "dim"};
    return {"dim"};
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            std::vector<std::string> stages, std::string out_dir) {
    const std::vector<std::string> avail = available_stages(config);
    if (stages.empty()) {
        stages = avail;
    } else {
        // Validate and normalize: the request must be an unbroken prefix of
        // the available chain (order and duplicates in the request are
        // forgiven; gaps and unavailable stages are not).
        std::vector<std::string> requested;
        for (const std::string& s : stages) {
            auto it = std::find(avail.begin(), avail.end(), s);
            if (it == avail.end()) {
                static const char* all[] = {"nbr", "overlap", "gifs", "reduce", "dim", "render"};
                const bool known = std::any_of(std::begin(all), std::end(all),
                                               [&](const char* a) { return s == a; });
                if (!known) throw ValidationError("unknown stage '" + s + "'");
                std::string chain;
                for (const auto& a : avail) chain += (chain.empty() ? "" : " -> ") + a;
                throw ValidationError("stage '" + s + "' is not available for this input (available: " + chain + ")");
            }
            if (std::find(requested.begin(), requested.end(), s) == requested.end())
                requested.push_back(s);
        }
        std::sort(requested.begin(), requested.end(), [&](const std::string& a, const std::string& b) {
            return std::find(avail.begin(), avail.end(), a) < std::find(avail.begin(), avail.end(), b);
        });
        for (std::size_t k = 0; k < requested.size(); ++k)
            if (requested[k] != avail[k])
                throw ValidationError("stages must form an unbroken prefix of the chain starting at '" +
                                      avail[0] + "' (missing '" + avail[k] + "')");
        stages = std::move(requested);
    }

    if (out_dir.empty()) out_dir = config.options.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("GDIFS_OUT_DIR");
        if (env && *env) out_dir = env;
    }
    if (out_dir.empty()) out_dir = ".";
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

    const auto wants = [&stages](const char* s) {
        return std::find(stages.begin(), stages.end(), s) != stages.end();
    };

    PipelineResult result;
    ArtifactWriter artifacts(out_dir, config.name);
    json summary;
    summary["name"] = config.name;
    summary["stages"] = stages;

    if (wants("nbr")) {
        with_stage("nbr", [&] {
            BuildOptions opts;
            opts.max_vertices = config.options.max_vertices;
            opts.prune_slack = config.options.prune_slack;
            result.neighbor = build_neighbor_graph(*config.ifs, opts);
            artifacts.write("neighbor", "json", to_json(*result.neighbor).dump(2) + "\n");
            artifacts.write("neighbor", "dot", render_dot(*result.neighbor));
            summary["neighbor"] = graph_counts(*result.neighbor);
        });
    }

    if (wants("overlap")) {
        with_stage("overlap", [&] {
            LabeledDigraph og;
            if (config.overlap_graph) {
                og = *config.overlap_graph;
            } else {
                og = extract_overlap_graph(*result.neighbor);
            }
            json counts = graph_counts(og);
            if (!config.identifications.empty()) {
                counts["vertices_before_identifications"] = og.vertex_count();
                std::vector<std::pair<int, int>> pairs;
                for (const auto& [lhs, rhs] : config.identifications) {
                    const int a = find_vertex(og, lhs);
                    const int b = find_vertex(og, rhs);
                    if (a < 0 || b < 0)
                        throw ValidationError("identification similitude " +
                                              (a < 0 ? lhs : rhs).to_string() +
                                              " is not a vertex of the overlap graph");
                    pairs.emplace_back(a, b);
                }
                og = quotient_vertices(og, pairs);
                counts = graph_counts(og);
                counts["identifications_applied"] = config.identifications.size();
            }
            result.overlap = std::move(og);
            artifacts.write("overlap", "json", to_json(*result.overlap).dump(2) + "\n");
            artifacts.write("overlap", "dot", render_dot(*result.overlap));
            summary["overlap"] = counts;
        });
    }

    if (wants("gifs")) {
        with_stage("gifs", [&] {
            GifsOptions opts;
            opts.max_equations = config.options.max_equations;
            GifsSystem system = build_gifs(*result.overlap, opts);
            if (config.ifs) {
                system.ifs = config.ifs;
                system.ratio = config.ifs->ratio;
            }
            std::vector<std::string> violations = validate_gifs(system);
            if (!violations.empty()) {
                std::string msg = "built system failed validation:";
                for (const auto& v : violations) msg += "\n  - " + v;
                throw ValidationError(msg);
            }
            result.raw = std::move(system);
            artifacts.write("gifs", "json", to_json(*result.raw).dump(2) + "\n");
            summary["gifs"] = json{{"attractors", result.raw->size()},
                                   {"map_count", result.raw->map_count},
                                   {"removed_maps", result.raw->removed_maps},
                                   {"validation_violations", 0}};
        });
    }

    if (wants("reduce")) {
        with_stage("reduce", [&] {
            ReduceOptions opts;
            opts.state_budget = config.options.state_budget;
            opts.spectral_tolerance = config.options.spectral_tolerance;
            auto [reduced, report] = reduce_system(*result.raw, opts);
            result.reduced = std::move(reduced);
            result.report = std::move(report);
            artifacts.write("reduced", "json", to_json(*result.reduced).dump(2) + "\n");
            artifacts.write("reduction-report", "json", to_json(*result.report).dump(2) + "\n");
            summary["reduce"] = json{{"before", result.report->before},
                                     {"after", result.report->after},
                                     {"component_of_first", result.report->component_of_first},
                                     {"degenerate_flagged", result.report->degenerate_flagged},
                                     {"rho_star", result.report->rho_star}};
        });
    }

    if (wants("dim")) {
        with_stage("dim", [&] {
            json rep;
            if (config.weighted) {
                const double beta = hausdorff_dim(*config.weighted);
                rep = dimension_report_for_matrix(weighted_multiplicity(*config.weighted), 0.0, beta);
            } else if (config.matrix) {
                rep = dimension_report_for_matrix(*config.matrix, config.matrix_ratio, std::nullopt);
            } else {
                const GifsSystem& sys = result.reduced ? *result.reduced : *result.raw;
                rep = dimension_report_for_matrix(incidence_matrix(sys), sys.ratio, std::nullopt);
                rep["source"] = result.reduced ? "reduced" : "raw";
            }
            result.dimension = rep;
            artifacts.write("dimension", "json", rep.dump(2) + "\n");
            summary["dimension"] = rep;
        });
    }

    if (wants("render")) {
        with_stage("render", [&] {
            const GifsSystem& sys = result.reduced ? *result.reduced : *result.raw;
            const int depth = config.options.render_depth;
            std::vector<Piece> pieces = expand_pieces(sys, 1, depth);
            artifacts.write("pieces", "svg", render_svg(pieces, sys));
            PointCloud cloud = point_cloud(sys, 1, depth);
            artifacts.write("cloud", "csv", cloud_to_csv(cloud));
            summary["render"] = json{{"depth", depth},
                                     {"pieces", pieces.size()},
                                     {"points", cloud.points.size()}};
        });
    }

    summary["files"] = artifacts.files;
    artifacts.write_alias_only(config.name + "-summary.json", summary.dump(2) + "\n");
    result.summary = std::move(summary);
    result.files = artifacts.files;
    return result;
}

} // namespace gdifs
