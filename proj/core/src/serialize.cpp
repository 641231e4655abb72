#include "gdifs/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int require_int(const json& j, const char* what) {
    if (!j.is_number_integer())
        throw ValidationError(std::string("expected an integer for ") + what);
    return j.get<int>();
}

} // namespace

json to_json(const FieldDescriptor& desc) {
    return json{{"min_poly", desc.min_poly},
                {"root_hint", {desc.root_hint.real(), desc.root_hint.imag()}},
                {"embed_precision", desc.embed_precision}};
}

FieldDescriptor field_descriptor_from_json(const json& j) {
    FieldDescriptor desc;
    if (!j.is_object() || !j.contains("min_poly") || !j.contains("root_hint"))
        throw ValidationError("field: need min_poly and root_hint");
    desc.min_poly = j.at("min_poly").get<std::vector<long long>>();
    const auto& hint = j.at("root_hint");
    if (!hint.is_array() || hint.size() != 2)
        throw ValidationError("field.root_hint: expected [re, im]");
    desc.root_hint = {hint[0].get<double>(), hint[1].get<double>()};
    if (j.contains("embed_precision"))
        desc.embed_precision = j.at("embed_precision").get<double>();
    return desc;
}

json to_json(const FieldElement& e) {
    json arr = json::array();
    for (const auto& c : e.coeffs()) arr.push_back(rational_to_string(c));
    return arr;
}

FieldElement field_element_from_json(const json& j,
                                     const std::shared_ptr<const Field>& field) {
    if (!j.is_array())
        throw ValidationError("field element: expected an array of rationals");
    std::vector<mpq_class> coeffs;
    for (const auto& c : j) {
        if (c.is_string())
            coeffs.push_back(parse_rational(c.get<std::string>()));
        else if (c.is_number_integer())
            coeffs.push_back(mpq_class(static_cast<long>(c.get<long long>())));
        else
            throw ValidationError(
                "field element: coefficients are strings or integers");
    }
    return field->element(std::move(coeffs));
}

json to_json(const Similitude& s) {
    return json{{"a", to_json(s.a)}, {"b", to_json(s.b)}};
}

Similitude similitude_from_json(const json& j,
                                const std::shared_ptr<const Field>& field) {
    if (!j.is_object() || !j.contains("a") || !j.contains("b"))
        throw ValidationError("similitude: need coefficient arrays a and b");
    return Similitude{field_element_from_json(j.at("a"), field),
                      field_element_from_json(j.at("b"), field)};
}

json to_json(const IfsSpec& ifs) {
    json maps = json::array();
    for (const auto& f : ifs.maps) maps.push_back(to_json(f));
    return json{{"field", to_json(ifs.field->descriptor())},
                {"maps", std::move(maps)},
                {"ratio", ifs.ratio}};
}

IfsSpec ifs_from_json(const json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("maps"))
        throw ValidationError("ifs: need field and maps");
    auto field = Field::create(field_descriptor_from_json(j.at("field")));
    std::vector<Similitude> maps;
    for (const auto& m : j.at("maps")) maps.push_back(similitude_from_json(m, field));
    return make_ifs(field, std::move(maps));
}

json to_json(const LabeledDigraph& graph) {
    if (graph.vertices.empty())
        throw ValidationError("cannot serialize a graph without vertices");
    json verts = json::array();
    for (const auto& v : graph.vertices) verts.push_back(to_json(v));
    json edges = json::array();
    for (const Edge& e : graph.edges) edges.push_back({e.src, e.dst, e.i, e.j});
    return json{
        {"field", to_json(graph.vertices[0].a.field()->descriptor())},
        {"label_count", graph.label_count},
        {"vertices", std::move(verts)},
        {"edges", std::move(edges)}};
}

LabeledDigraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("field"))
        throw ValidationError("graph: need a field descriptor");
    return graph_from_json(j, Field::create(field_descriptor_from_json(j.at("field"))));
}

LabeledDigraph graph_from_json(const json& j,
                               const std::shared_ptr<const Field>& field) {
    if (!j.is_object() || !j.contains("label_count") || !j.contains("vertices") ||
        !j.contains("edges"))
        throw ValidationError("graph: need label_count, vertices and edges");
    LabeledDigraph g;
    g.label_count = require_int(j.at("label_count"), "graph.label_count");
    for (const auto& v : j.at("vertices"))
        g.vertices.push_back(similitude_from_json(v, field));
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 4)
            throw ValidationError("graph.edges: expected [src, dst, i, j]");
        Edge edge{require_int(e[0], "edge.src"), require_int(e[1], "edge.dst"),
                  require_int(e[2], "edge.i"), require_int(e[3], "edge.j")};
        if (edge.src < 0 || edge.src >= g.vertex_count() || edge.dst < 0 ||
            edge.dst >= g.vertex_count())
            throw ValidationError("graph.edges: vertex index out of range");
        if (edge.i < 1 || edge.i > g.label_count)
            throw ValidationError("graph.edges: label i out of range");
        if (edge.j < 0 || edge.j > g.label_count)
            throw ValidationError("graph.edges: label j out of range");
        g.edges.push_back(edge);
    }
    if (g.vertices.empty() || !g.vertices[0].is_identity())
        throw ValidationError("graph: vertex 0 must be the identity");
    return g;
}

json to_json(const GifsSystem& system) {
    json equations = json::array();
    for (const auto& eq : system.equations) {
        json terms = json::array();
        for (const Term& t : eq) terms.push_back({t.map, t.target});
        equations.push_back(std::move(terms));
    }
    json out{{"map_count", system.map_count},
             {"ratio", system.ratio},
             {"removed_maps", system.removed_maps},
             {"equations", std::move(equations)},
             {"sets", system.sets},
             {"graph", to_json(system.graph)}};
    out["ifs"] = system.ifs ? to_json(*system.ifs) : json(nullptr);
    return out;
}

GifsSystem gifs_from_json(const json& j) {
    if (!j.is_object() || !j.contains("equations") || !j.contains("sets") ||
        !j.contains("graph"))
        throw ValidationError("gifs: need equations, sets and graph");
    GifsSystem system;
    system.map_count = require_int(j.at("map_count"), "gifs.map_count");
    system.ratio = j.value("ratio", 0.0);
    if (j.contains("removed_maps"))
        system.removed_maps = j.at("removed_maps").get<std::vector<int>>();
    if (j.contains("ifs") && !j.at("ifs").is_null()) {
        system.ifs = ifs_from_json(j.at("ifs"));
        system.graph = graph_from_json(j.at("graph"), system.ifs->field);
    } else {
        system.graph = graph_from_json(j.at("graph"));
    }
    for (const auto& eq : j.at("equations")) {
        std::vector<Term> terms;
        for (const auto& t : eq) {
            if (!t.is_array() || t.size() != 2)
                throw ValidationError("gifs.equations: expected [map, target]");
            terms.push_back(
                Term{require_int(t[0], "term.map"), require_int(t[1], "term.target")});
        }
        system.equations.push_back(std::move(terms));
    }
    system.sets = j.at("sets").get<std::vector<OverlapSet>>();
    if (system.sets.size() != system.equations.size())
        throw ValidationError("gifs: sets and equations disagree in length");
    return system;
}

json to_json(const ReductionReport& report) {
    json degenerate = json::array();
    for (const auto& [index, reason] : report.degenerate)
        degenerate.push_back({{"attractor", index}, {"reason", reason}});
    return json{{"before", report.before},
                {"after", report.after},
                {"component_of_first", report.component_of_first},
                {"after_restrict", report.after_restrict},
                {"after_merge", report.after_merge},
                {"after_prune", report.after_prune},
                {"degenerate_flagged", report.degenerate_flagged},
                {"rho_star", report.rho_star},
                {"merged_classes", report.merged_classes},
                {"removed", report.removed},
                {"degenerate", std::move(degenerate)},
                {"notes", report.notes}};
}

json to_json(const IncidenceMatrix& m) {
    json rows = json::array();
    for (const auto& row : m.entries) {
        json r = json::array();
        for (const auto& entry : row) r.push_back(rational_to_string(entry));
        rows.push_back(std::move(r));
    }
    return rows;
}

IncidenceMatrix incidence_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("matrix: expected an array of rows");
    IncidenceMatrix m;
    for (const auto& row : j) {
        if (!row.is_array()) throw ValidationError("matrix: expected rows as arrays");
        std::vector<mpq_class> r;
        for (const auto& entry : row) {
            if (entry.is_string())
                r.push_back(parse_rational(entry.get<std::string>()));
            else if (entry.is_number_integer())
                r.push_back(mpq_class(static_cast<long>(entry.get<long long>())));
            else
                throw ValidationError("matrix: entries are strings or integers");
        }
        m.entries.push_back(std::move(r));
    }
    const std::size_t n = m.entries.size();
    for (const auto& row : m.entries)
        if (row.size() != n) throw ValidationError("matrix: not square");
    return m;
}

json to_json(const Polynomial& p) {
    json arr = json::array();
    for (const auto& c : p) arr.push_back(rational_to_string(c));
    return arr;
}

json to_json(const PointCloud& cloud) {
    json pts = json::array();
    for (const auto& p : cloud.points)
        pts.push_back({fmt17(p.z.real()), fmt17(p.z.imag()), p.type});
    return json{{"points", std::move(pts)}};
}

std::string cloud_to_csv(const PointCloud& cloud) {
    std::string out = "re,im,type\n";
    for (const auto& p : cloud.points)
        out += fmt17(p.z.real()) + "," + fmt17(p.z.imag()) + "," +
               std::to_string(p.type) + "\n";
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

} // namespace gdifs
