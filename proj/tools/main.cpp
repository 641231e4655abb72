#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gdifs/config.hpp"
#include "gdifs/errors.hpp"
#include "gdifs/pipeline.hpp"
#include "gdifs/similitude.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string stages;       // comma-separated, pipeline verb only
    int max_vertices = 0;     // 0: keep config value
    int depth = -1;           // <0: keep config value
    bool reverse_order = false;
};

std::vector<std::string> split_stages(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    for (char c : csv) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else if (c != ' ') {
            item += c;
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

void print_run(const gdifs::PipelineResult& result, const std::string& out_dir) {
    const gdifs::json& s = result.summary;
    if (s.contains("neighbor"))
        std::printf("nbr:      %d vertices (%d proper), %d edges\n",
                    s["neighbor"]["vertices"].get<int>(),
                    s["neighbor"]["proper_vertices"].get<int>(),
                    s["neighbor"]["edges"].get<int>());
    if (s.contains("overlap"))
        std::printf("overlap:  %d vertices (%d proper), %d edges\n",
                    s["overlap"]["vertices"].get<int>(),
                    s["overlap"]["proper_vertices"].get<int>(),
                    s["overlap"]["edges"].get<int>());
    if (s.contains("gifs"))
        std::printf("gifs:     %d attractors over %d maps\n",
                    s["gifs"]["attractors"].get<int>(),
                    s["gifs"]["map_count"].get<int>());
    if (s.contains("reduce"))
        std::printf("reduce:   %d -> %d attractors, %d flagged degenerate, rho* = %.6f\n",
                    s["reduce"]["before"].get<int>(),
                    s["reduce"]["after"].get<int>(),
                    s["reduce"]["degenerate_flagged"].get<int>(),
                    s["reduce"]["rho_star"].get<double>());
    if (s.contains("dimension")) {
        std::printf("dim:      spectral radius %.9f", s["dimension"]["spectral_radius"].get<double>());
        if (s["dimension"]["beta"].is_number())
            std::printf(", dimension %.9f", s["dimension"]["beta"].get<double>());
        std::printf("\n");
    }
    if (s.contains("render"))
        std::printf("render:   %zu pieces, %zu points at depth %d\n",
                    s["render"]["pieces"].get<std::size_t>(),
                    s["render"]["points"].get<std::size_t>(),
                    s["render"]["depth"].get<int>());
    std::printf("wrote %zu files to %s\n", result.files.size(), out_dir.empty() ? "." : out_dir.c_str());
}

int run_verb(const std::string& verb, const CliOptions& cli) {
    gdifs::PipelineConfig config = gdifs::parse_config(cli.config_path);
    if (cli.max_vertices > 0) config.options.max_vertices = cli.max_vertices;
    if (cli.depth >= 0) config.options.render_depth = cli.depth;
    if (cli.reverse_order) {
        if (!config.ifs)
            throw gdifs::ValidationError("--reverse-order needs a config with similitude maps");
        std::vector<gdifs::Similitude> maps(config.ifs->maps.rbegin(), config.ifs->maps.rend());
        config.ifs = gdifs::make_ifs(config.ifs->field, std::move(maps));
    }

    std::vector<std::string> stages;
    if (verb == "pipeline") {
        stages = split_stages(cli.stages);
    } else {
        const std::vector<std::string> avail = gdifs::available_stages(config);
        auto it = std::find(avail.begin(), avail.end(), verb);
        if (it == avail.end()) {
            stages = {verb}; // run_pipeline reports why this stage is unavailable
        } else {
            stages.assign(avail.begin(), it + 1);
        }
    }

    gdifs::PipelineResult result = gdifs::run_pipeline(config, stages, cli.out_dir);
    std::string shown = cli.out_dir;
    if (shown.empty()) shown = config.options.out_dir;
    if (shown.empty()) {
        const char* env = std::getenv("GDIFS_OUT_DIR");
        if (env && *env) shown = env;
    }
    print_run(result, shown);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gdifs: turn overlapping self-similar maps into graph-directed systems,\n"
                 "reduce them, and compute Hausdorff dimensions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    CliOptions cli;
    std::string chosen;

    const struct {
        const char* name;
        const char* help;
    } verbs[] = {
        {"nbr", "build the neighbor graph"},
        {"overlap", "extract the overlap graph (and apply identifications)"},
        {"gifs", "expand the graph-directed system"},
        {"reduce", "merge, prune and drop degenerate attractors"},
        {"dim", "compute the incidence matrix, spectral radius and dimension"},
        {"render", "write SVG pieces and a CSV point cloud"},
        {"pipeline", "run a stage chain (default: everything the input supports)"},
    };

    for (const auto& v : verbs) {
        CLI::App* sub = app.add_subcommand(v.name, v.help);
        sub->add_option("-c,--config", cli.config_path, "config file (.json or .toml)")
            ->required();
        sub->add_option("-o,--out-dir", cli.out_dir,
                        "output directory (default: config, then $GDIFS_OUT_DIR, then .)");
        sub->add_option("--max-vertices", cli.max_vertices,
                        "override the neighbor-graph vertex budget");
        sub->add_option("--depth", cli.depth, "override the render depth");
        sub->add_flag("--reverse-order", cli.reverse_order,
                      "reverse the map order before any stage");
        if (std::string(v.name) == "pipeline")
            sub->add_option("--stages", cli.stages,
                            "comma-separated stage prefix, e.g. nbr,overlap,gifs");
        sub->callback([&chosen, name = std::string(v.name)] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
        return run_verb(chosen, cli);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const gdifs::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const gdifs::BudgetError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const gdifs::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
