#include "gdifs/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdifs/errors.hpp"
#include "gdifs/toml_lite.hpp"

namespace gdifs {

namespace {

const char* kKnownKeys[] = {"name",          "field",    "maps",
                            "ordering",      "symmetry_identifications",
                            "overlap_graph", "weighted_gifs",
                            "matrix",        "options"};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys)
        if (key == k) return true;
    return false;
}

class Violations {
public:
    void add(const std::string& path, const std::string& what) {
        items_.push_back(path + ": " + what);
    }
    bool empty() const { return items_.empty(); }
    [[noreturn]] void raise() const {
        std::ostringstream os;
        os << "invalid config (" << items_.size()
           << (items_.size() == 1 ? " problem)" : " problems)");
        for (const auto& item : items_) os << "\n  - " << item;
        throw ValidationError(os.str());
    }

private:
    std::vector<std::string> items_;
};

void parse_options(const json& j, PipelineOptions& opts, Violations& bad) {
    if (!j.is_object()) {
        bad.add("options", "expected a table");
        return;
    }
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "max_vertices") {
                opts.max_vertices = value.get<int>();
                if (opts.max_vertices < 1) bad.add("options.max_vertices", "must be positive");
            } else if (key == "max_equations") {
                opts.max_equations = value.get<std::size_t>();
                if (opts.max_equations < 1) bad.add("options.max_equations", "must be positive");
            } else if (key == "state_budget") {
                opts.state_budget = value.get<std::size_t>();
                if (opts.state_budget < 1) bad.add("options.state_budget", "must be positive");
            } else if (key == "prune_slack") {
                opts.prune_slack = value.get<double>();
                if (opts.prune_slack < 0) bad.add("options.prune_slack", "must be non-negative");
            } else if (key == "spectral_tolerance") {
                opts.spectral_tolerance = value.get<double>();
                if (opts.spectral_tolerance <= 0) bad.add("options.spectral_tolerance", "must be positive");
            } else if (key == "render_depth") {
                opts.render_depth = value.get<int>();
                if (opts.render_depth < 0) bad.add("options.render_depth", "must be non-negative");
            } else if (key == "out_dir") {
                opts.out_dir = value.get<std::string>();
            } else {
                bad.add("options." + key, "unknown option");
            }
        } catch (const json::exception&) {
            bad.add("options." + key, "wrong type");
        }
    }
}

WeightedGifs weighted_from_json(const json& j) {
    if (!j.is_object() || !j.contains("equations"))
        throw ValidationError("expected a table with an 'equations' array");
    const json& eqs = j.at("equations");
    if (!eqs.is_array() || eqs.empty())
        throw ValidationError("'equations' must be a non-empty array");
    WeightedGifs w;
    for (const auto& eq : eqs) {
        if (!eq.is_array() || eq.empty())
            throw ValidationError("each equation is a non-empty array of [map, target, ratio] terms");
        std::vector<WeightedTerm> terms;
        for (const auto& t : eq) {
            if (!t.is_array() || t.size() != 3)
                throw ValidationError("each term is [map, target, ratio]");
            WeightedTerm term;
            term.map = t.at(0).get<int>();
            term.target = t.at(1).get<int>();
            term.ratio = t.at(2).get<double>();
            terms.push_back(term);
        }
        w.equations.push_back(std::move(terms));
    }
    return w;
}

} // namespace

PipelineConfig config_from_json(const json& doc, const std::string& default_name) {
    if (!doc.is_object()) throw ValidationError("invalid config (1 problem)\n  - top level: expected a table");

    PipelineConfig config;
    config.name = default_name;
    Violations bad;

    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!known_key(key)) bad.add(key, "unknown key");
    }

    if (doc.contains("name")) {
        if (doc.at("name").is_string() && !doc.at("name").get<std::string>().empty())
            config.name = doc.at("name").get<std::string>();
        else
            bad.add("name", "must be a non-empty string");
    }

    const bool has_maps = doc.contains("maps");
    const bool has_graph = doc.contains("overlap_graph");
    const bool has_weighted = doc.contains("weighted_gifs");
    const bool has_matrix = doc.contains("matrix");
    const int input_count = int(has_maps) + int(has_graph) + int(has_weighted) + int(has_matrix);
    if (input_count != 1) {
        std::string present;
        for (const char* k : {"maps", "overlap_graph", "weighted_gifs", "matrix"})
            if (doc.contains(k)) present += std::string(present.empty() ? "" : ", ") + k;
        if (input_count == 0)
            bad.add("input", "exactly one of maps, overlap_graph, weighted_gifs, matrix is required (none given)");
        else
            bad.add("input", "exactly one of maps, overlap_graph, weighted_gifs, matrix is allowed (got: " + present + ")");
    }

    if (doc.contains("field") && !has_maps)
        bad.add("field", "only meaningful together with 'maps'");
    if (has_maps && !doc.contains("field"))
        bad.add("field", "required when 'maps' is given");

    // Ordering permutation (applied to the maps below).
    std::vector<int> ordering;
    if (doc.contains("ordering")) {
        if (!has_maps) bad.add("ordering", "only meaningful together with 'maps'");
        const json& oj = doc.at("ordering");
        if (!oj.is_array()) {
            bad.add("ordering", "must be an array of 1-based map indices");
        } else {
            bool ok = true;
            for (const auto& v : oj) {
                if (!v.is_number_integer()) {
                    ok = false;
                    break;
                }
                ordering.push_back(v.get<int>());
            }
            std::vector<int> sorted = ordering;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t k = 0; ok && k < sorted.size(); ++k) ok = sorted[k] == int(k) + 1;
            if (!ok) {
                bad.add("ordering", "must be a permutation of 1..map_count");
                ordering.clear();
            }
        }
    }

    if (has_maps && doc.contains("field") && input_count == 1) {
        try {
            json sub = json::object();
            sub["field"] = doc.at("field");
            const json& mj = doc.at("maps");
            if (!mj.is_array() || mj.empty()) throw ValidationError("must be a non-empty array");
            if (!ordering.empty() && ordering.size() != mj.size())
                throw ValidationError("'ordering' length does not match the number of maps");
            json permuted = json::array();
            if (ordering.empty()) {
                permuted = mj;
            } else {
                for (int idx : ordering) permuted.push_back(mj.at(std::size_t(idx - 1)));
            }
            sub["maps"] = std::move(permuted);
            config.ifs = ifs_from_json(sub);
            config.ordering = ordering;
        } catch (const Error& e) {
            bad.add("maps", e.what());
        } catch (const json::exception& e) {
            bad.add("maps", e.what());
        }
    }

    if (doc.contains("symmetry_identifications")) {
        if (!config.ifs) {
            bad.add("symmetry_identifications", "only meaningful together with 'maps'");
        } else {
            const json& ids = doc.at("symmetry_identifications");
            if (!ids.is_array()) {
                bad.add("symmetry_identifications", "must be an array of similitude pairs");
            } else {
                for (std::size_t k = 0; k < ids.size(); ++k) {
                    try {
                        const json& pair = ids.at(k);
                        if (!pair.is_array() || pair.size() != 2)
                            throw ValidationError("expected a pair of similitudes");
                        config.identifications.emplace_back(
                            similitude_from_json(pair.at(0), config.ifs->field),
                            similitude_from_json(pair.at(1), config.ifs->field));
                    } catch (const Error& e) {
                        bad.add("symmetry_identifications[" + std::to_string(k) + "]", e.what());
                    } catch (const json::exception& e) {
                        bad.add("symmetry_identifications[" + std::to_string(k) + "]", e.what());
                    }
                }
            }
        }
    }

    if (has_graph && input_count == 1) {
        try {
            config.overlap_graph = graph_from_json(doc.at("overlap_graph"));
        } catch (const Error& e) {
            bad.add("overlap_graph", e.what());
        } catch (const json::exception& e) {
            bad.add("overlap_graph", e.what());
        }
    }

    if (has_weighted && input_count == 1) {
        try {
            config.weighted = weighted_from_json(doc.at("weighted_gifs"));
        } catch (const Error& e) {
            bad.add("weighted_gifs", e.what());
        } catch (const json::exception& e) {
            bad.add("weighted_gifs", e.what());
        }
    }

    if (has_matrix && input_count == 1) {
        try {
            const json& mj = doc.at("matrix");
            if (!mj.is_object() || !mj.contains("entries") || !mj.contains("ratio"))
                throw ValidationError("expected a table with 'entries' and 'ratio'");
            config.matrix = incidence_from_json(mj.at("entries"));
            config.matrix_ratio = mj.at("ratio").get<double>();
            if (!(config.matrix_ratio > 0.0 && config.matrix_ratio < 1.0))
                throw ValidationError("'ratio' must lie strictly between 0 and 1");
        } catch (const Error& e) {
            bad.add("matrix", e.what());
        } catch (const json::exception& e) {
            bad.add("matrix", e.what());
        }
    }

    if (doc.contains("options")) parse_options(doc.at("options"), config.options, bad);

    if (!bad.empty()) bad.raise();
    return config;
}

PipelineConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const std::filesystem::path p(path);
    json doc;
    if (p.extension() == ".toml") {
        doc = parse_toml_lite(text);
    } else {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    std::string stem = p.stem().string();
    if (stem.empty()) stem = "run";
    return config_from_json(doc, stem);
}

} // namespace gdifs
