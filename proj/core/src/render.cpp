#include "gdifs/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

std::string fmt(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::complex<double> default_seed(const IfsSpec& ifs) {
    const std::complex<double> a = ifs.maps.at(0).a.embed();
    const std::complex<double> b = ifs.maps.at(0).b.embed();
    return b / (1.0 - a);
}

const IfsSpec& require_ifs(const GifsSystem& system) {
    if (!system.ifs)
        throw ValidationError("rendering needs the IFS maps, but the system was "
                              "built from an imported overlap graph");
    return *system.ifs;
}

// One expansion step: piece composed with map i of the ifs.
Piece child_piece(const Piece& p, const IfsSpec& ifs, int map, int type) {
    const std::complex<double> fa = ifs.maps[map - 1].a.embed();
    const std::complex<double> fb = ifs.maps[map - 1].b.embed();
    return Piece{p.a * fa, p.a * fb + p.b, type, p.depth + 1};
}

// Deterministic small sample of attractor `type`: seed images of the first
// prefixes in breadth-first equation order.
std::vector<std::complex<double>> sample_attractor(const GifsSystem& system,
                                                   int type, std::size_t count) {
    const IfsSpec& ifs = require_ifs(system);
    const std::complex<double> seed = default_seed(ifs);
    std::vector<std::complex<double>> out;
    std::deque<Piece> queue{Piece{{1.0, 0.0}, {0.0, 0.0}, type, 0}};
    while (!queue.empty() && out.size() < count) {
        const Piece p = queue.front();
        queue.pop_front();
        out.push_back(p.apply(seed));
        if (p.depth < 16)
            for (const Term& t : system.equations[p.type - 1])
                queue.push_back(child_piece(p, ifs, t.map, t.target));
    }
    return out;
}

// Andrew monotone chain; collinear points are kept off the hull.
std::vector<std::complex<double>> convex_hull(std::vector<std::complex<double>> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const int n = static_cast<int>(pts.size());
    if (n < 3) return pts;
    auto cross = [](const std::complex<double>& o, const std::complex<double>& a,
                    const std::complex<double>& b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<std::complex<double>> hull(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

struct Box {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void include(const std::complex<double>& z) {
        min_x = std::min(min_x, z.real());
        max_x = std::max(max_x, z.real());
        min_y = std::min(min_y, z.imag());
        max_y = std::max(max_y, z.imag());
    }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

std::string svg_open(const Box& box) {
    const double pad = 0.05 * std::max({box.width(), box.height(), 1e-9});
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    out += fmt(box.min_x - pad) + " " + fmt(-box.max_y - pad) + " " +
           fmt(box.width() + 2 * pad) + " " + fmt(box.height() + 2 * pad) + "\">\n";
    out += "<rect x=\"" + fmt(box.min_x - pad) + "\" y=\"" + fmt(-box.max_y - pad) +
           "\" width=\"" + fmt(box.width() + 2 * pad) + "\" height=\"" +
           fmt(box.height() + 2 * pad) + "\" fill=\"white\"/>\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

// Directed part: for every p in `from`, the squared distance to the nearest
// point of `to`, maximized. A uniform grid over `to` prunes candidates; the
// scanned superset always contains the true nearest point, so the value is
// the one the full quadratic scan produces.
double directed_sq(const std::vector<TaggedPoint>& from,
                   const std::vector<TaggedPoint>& to) {
    const int nq = static_cast<int>(to.size());
    Box box;
    for (const auto& q : to) box.include(q.z);
    int nx = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(nq))), 1, 1024);
    int ny = nx;
    if (!(box.width() > 0)) nx = 1;
    if (!(box.height() > 0)) ny = 1;
    const double cw = nx > 1 ? box.width() / nx : 0.0;
    const double ch = ny > 1 ? box.height() / ny : 0.0;
    double min_cell = std::numeric_limits<double>::infinity();
    if (nx > 1) min_cell = std::min(min_cell, cw);
    if (ny > 1) min_cell = std::min(min_cell, ch);

    std::vector<std::vector<int>> cells(static_cast<std::size_t>(nx) * ny);
    auto cell_x = [&](double x) {
        if (nx == 1) return 0;
        return std::clamp(static_cast<int>((x - box.min_x) / cw), 0, nx - 1);
    };
    auto cell_y = [&](double y) {
        if (ny == 1) return 0;
        return std::clamp(static_cast<int>((y - box.min_y) / ch), 0, ny - 1);
    };
    for (int i = 0; i < nq; ++i)
        cells[static_cast<std::size_t>(cell_y(to[i].z.imag())) * nx +
              cell_x(to[i].z.real())]
            .push_back(i);

    double worst = 0.0;
    for (const auto& p : from) {
        const double px = p.z.real(), py = p.z.imag();
        const int cx = cell_x(px), cy = cell_y(py);
        double best = std::numeric_limits<double>::infinity();
        const int max_ring = nx + ny;
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (best < std::numeric_limits<double>::infinity()) {
                const double lower = (ring - 1) * min_cell;
                if (lower > 0 && lower * lower > best) break;
            }
            for (int dy = -ring; dy <= ring; ++dy) {
                const int y = cy + dy;
                if (y < 0 || y >= ny) continue;
                const int step = (std::abs(dy) == ring) ? 1 : 2 * ring;
                for (int dx = -ring; dx <= ring; dx += std::max(step, 1)) {
                    const int x = cx + dx;
                    if (x < 0 || x >= nx) continue;
                    for (int qi : cells[static_cast<std::size_t>(y) * nx + x]) {
                        const double ddx = px - to[qi].z.real();
                        const double ddy = py - to[qi].z.imag();
                        const double sq = ddx * ddx + ddy * ddy;
                        if (sq < best) best = sq;
                    }
                }
                if (ring == 0) break;
            }
        }
        if (best > worst) worst = best;
    }
    return worst;
}

} // namespace

std::vector<Piece> expand_pieces(const GifsSystem& system, int k, int depth) {
    if (k < 1 || k > system.size())
        throw ValidationError("expand_pieces: attractor index out of range");
    if (depth < 0) throw ValidationError("expand_pieces: negative depth");
    const IfsSpec& ifs = require_ifs(system);
    std::vector<Piece> level{Piece{{1.0, 0.0}, {0.0, 0.0}, k, 0}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Piece> next;
        next.reserve(level.size() * ifs.maps.size());
        for (const Piece& p : level)
            for (const Term& t : system.equations[p.type - 1])
                next.push_back(child_piece(p, ifs, t.map, t.target));
        level = std::move(next);
    }
    return level;
}

std::vector<Piece> expand_pieces(const IfsSpec& ifs, int depth) {
    if (depth < 0) throw ValidationError("expand_pieces: negative depth");
    std::vector<Piece> level{Piece{{1.0, 0.0}, {0.0, 0.0}, 1, 0}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Piece> next;
        next.reserve(level.size() * ifs.maps.size());
        for (const Piece& p : level)
            for (int i = 1; i <= ifs.map_count(); ++i)
                next.push_back(child_piece(p, ifs, i, 1));
        level = std::move(next);
    }
    return level;
}

PointCloud point_cloud(const GifsSystem& system, int k, int depth,
                       std::vector<std::complex<double>> seeds) {
    const IfsSpec& ifs = require_ifs(system);
    if (seeds.empty()) seeds.push_back(default_seed(ifs));
    PointCloud cloud;
    for (const Piece& p : expand_pieces(system, k, depth))
        for (const auto& s : seeds) cloud.points.push_back({p.apply(s), p.type});
    return cloud;
}

PointCloud point_cloud(const IfsSpec& ifs, int depth,
                       std::vector<std::complex<double>> seeds) {
    if (seeds.empty()) seeds.push_back(default_seed(ifs));
    PointCloud cloud;
    for (const Piece& p : expand_pieces(ifs, depth))
        for (const auto& s : seeds) cloud.points.push_back({p.apply(s), p.type});
    return cloud;
}

double hausdorff_distance(const PointCloud& p, const PointCloud& q) {
    if (p.points.empty() || q.points.empty())
        throw ValidationError("hausdorff_distance: empty cloud");
    return std::sqrt(std::max(directed_sq(p.points, q.points),
                              directed_sq(q.points, p.points)));
}

const std::vector<std::string>& default_palette() {
    static const std::vector<std::string> palette{
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
        "#8c6d31", "#843c39", "#7b4173", "#3182bd"};
    return palette;
}

std::string render_svg(const std::vector<Piece>& pieces, const GifsSystem& system,
                       const std::vector<std::string>& palette) {
    if (palette.empty()) throw ValidationError("render_svg: empty palette");
    // 32-point deeper samples per attractor type, hulled per piece.
    std::vector<std::vector<std::complex<double>>> samples(system.size() + 1);
    std::vector<std::string> body;
    Box box;
    bool any = false;
    for (const Piece& p : pieces) {
        auto& sample = samples[p.type];
        if (sample.empty()) sample = sample_attractor(system, p.type, 32);
        std::vector<std::complex<double>> pts;
        pts.reserve(sample.size());
        for (const auto& s : sample) pts.push_back(p.apply(s));
        const auto hull = convex_hull(std::move(pts));
        for (const auto& z : hull) box.include(z);
        if (hull.empty()) continue;
        any = true;
        const std::string& color =
            palette[static_cast<std::size_t>(p.type - 1) % palette.size()];
        if (hull.size() >= 3) {
            std::string poly = "<polygon points=\"";
            for (std::size_t i = 0; i < hull.size(); ++i) {
                if (i) poly += " ";
                poly += fmt(hull[i].real()) + "," + fmt(-hull[i].imag());
            }
            poly += "\" fill=\"" + color + "\" fill-opacity=\"0.85\" stroke=\"" +
                    color + "\" stroke-width=\"0.001\"/>\n";
            body.push_back(std::move(poly));
        } else {
            body.push_back("<circle cx=\"" + fmt(hull[0].real()) + "\" cy=\"" +
                           fmt(-hull[0].imag()) + "\" r=\"0.002\" fill=\"" + color +
                           "\"/>\n");
        }
    }
    if (!any) box.include({0.0, 0.0});
    std::string out = svg_open(box);
    for (const auto& line : body) out += line;
    out += "</svg>\n";
    return out;
}

std::string render_svg(const PointCloud& cloud,
                       const std::vector<std::string>& palette) {
    if (palette.empty()) throw ValidationError("render_svg: empty palette");
    Box box;
    for (const auto& p : cloud.points) box.include(p.z);
    if (cloud.points.empty()) box.include({0.0, 0.0});
    const double r = 0.004 * std::max({box.width(), box.height(), 1e-9});
    std::string out = svg_open(box);
    for (const auto& p : cloud.points) {
        const std::string& color =
            palette[static_cast<std::size_t>(std::max(p.type - 1, 0)) %
                    palette.size()];
        out += "<circle cx=\"" + fmt(p.z.real()) + "\" cy=\"" + fmt(-p.z.imag()) +
               "\" r=\"" + fmt(r) + "\" fill=\"" + color + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void emit_svg(const std::vector<Piece>& pieces, const GifsSystem& system,
              const std::string& path, const std::vector<std::string>& palette) {
    write_file(path, render_svg(pieces, system, palette));
}

void emit_svg(const PointCloud& cloud, const std::string& path,
              const std::vector<std::string>& palette) {
    write_file(path, render_svg(cloud, palette));
}

std::string render_dot(const LabeledDigraph& graph) {
    std::string out = "digraph overlap {\n  rankdir=LR;\n";
    for (int v = 0; v < graph.vertex_count(); ++v) {
        out += "  v" + std::to_string(v);
        if (v == 0)
            out += " [label=\"id\" shape=doublecircle];\n";
        else
            out += " [label=\"h" + std::to_string(v) + "\" tooltip=\"" +
                   graph.vertices[v].to_string() + "\"];\n";
    }
    for (const Edge& e : graph.edges)
        out += "  v" + std::to_string(e.src) + " -> v" + std::to_string(e.dst) +
               " [label=\"(" + std::to_string(e.i) + "," + std::to_string(e.j) +
               ")\"];\n";
    out += "}\n";
    return out;
}

void emit_dot(const LabeledDigraph& graph, const std::string& path) {
    write_file(path, render_dot(graph));
}

} // namespace gdifs
