#include "gdifs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "gdifs/errors.hpp"

namespace gdifs {

std::vector<std::vector<int>> LabeledDigraph::successors_by_label() const {
    std::vector<std::vector<int>> succ(
        static_cast<std::size_t>(vertex_count()) * static_cast<std::size_t>(label_count));
    for (const Edge& e : edges) {
        if (e.i < 1 || e.i > label_count) continue;
        auto& lst = succ[static_cast<std::size_t>(e.src) * label_count + (e.i - 1)];
        if (lst.empty() || lst.back() != e.dst) lst.push_back(e.dst);
    }
    for (auto& lst : succ) {
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    }
    return succ;
}

LabeledDigraph build_neighbor_graph(const IfsSpec& ifs, const BuildOptions& opts) {
    if (opts.max_vertices < 1)
        throw ValidationError("max_vertices must be >= 1");
    const int m = ifs.map_count();
    const double R = ifs.bounding_radius();
    const double bound = 2.0 * R + opts.prune_slack * R;

    std::vector<Similitude> inverses;
    inverses.reserve(m);
    for (const auto& f : ifs.maps) inverses.push_back(invert(f));

    std::vector<Similitude> verts{Similitude::identity(ifs.field)};
    std::unordered_map<Similitude, int, SimilitudeHash> index;
    index.emplace(verts[0], 0);
    std::vector<Edge> edges;

    for (int head = 0; head < static_cast<int>(verts.size()); ++head) {
        const Similitude h = verts[head]; // copy: verts may reallocate
        for (int i = 1; i <= m; ++i) {
            for (int j = 1; j <= m; ++j) {
                if (head == 0 && i == j) continue;
                const Similitude hp =
                    compose(inverses[i - 1], compose(h, ifs.maps[j - 1]));
                if (std::abs(hp.evaluate({0, 0})) > bound) continue;
                auto it = index.find(hp);
                int dst;
                if (it == index.end()) {
                    dst = static_cast<int>(verts.size());
                    if (dst >= opts.max_vertices)
                        throw FiniteTypeBudgetExceeded(
                            "neighbor graph exceeded max_vertices = " +
                            std::to_string(opts.max_vertices) +
                            "; the IFS may not be of finite type");
                    verts.push_back(hp);
                    index.emplace(hp, dst);
                } else {
                    dst = it->second;
                }
                edges.push_back(Edge{head, dst, i, j});
            }
        }
    }

    // Iterated sink deletion: drop non-identity vertices with no outgoing edge
    // into the surviving set, until stable.
    const int n = static_cast<int>(verts.size());
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 1; v < n; ++v) {
            if (!alive[v]) continue;
            bool has_out = false;
            for (const Edge& e : edges) {
                if (e.src == v && alive[e.dst]) {
                    has_out = true;
                    break;
                }
            }
            if (!has_out) {
                alive[v] = 0;
                changed = true;
            }
        }
    }

    std::vector<int> remap(n, -1);
    LabeledDigraph g;
    g.label_count = m;
    for (int v = 0; v < n; ++v) {
        if (alive[v]) {
            remap[v] = g.vertex_count();
            g.vertices.push_back(verts[v]);
        }
    }
    for (const Edge& e : edges) {
        if (alive[e.src] && alive[e.dst])
            g.edges.push_back(Edge{remap[e.src], remap[e.dst], e.i, e.j});
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.i, a.j, a.dst) < std::tie(b.src, b.i, b.j, b.dst);
    });
    return g;
}

LabeledDigraph extract_overlap_graph(const LabeledDigraph& nbr) {
    const int n = nbr.vertex_count();
    // Reverse-BFS from the identity over reversed edges finds every vertex
    // with a path of length >= 1 to it.
    std::vector<std::vector<int>> radj(n);
    for (const Edge& e : nbr.edges) radj[e.dst].push_back(e.src);
    std::vector<char> reaches(n, 0);
    std::vector<int> stack(radj[0].begin(), radj[0].end());
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (reaches[v]) continue;
        reaches[v] = 1;
        for (int u : radj[v]) stack.push_back(u);
    }
    reaches[0] = 1; // identity always kept

    std::vector<int> remap(n, -1);
    LabeledDigraph g;
    g.label_count = nbr.label_count;
    for (int v = 0; v < n; ++v) {
        if (reaches[v]) {
            remap[v] = g.vertex_count();
            g.vertices.push_back(nbr.vertices[v]);
        }
    }
    for (const Edge& e : nbr.edges) {
        if (reaches[e.src] && reaches[e.dst])
            g.edges.push_back(Edge{remap[e.src], remap[e.dst], e.i, e.j});
    }
    return g;
}

BoolMatrix reachability_closure(const BoolMatrix& adj) {
    const std::size_t n = adj.size();
    auto mul = [n](const BoolMatrix& a, const BoolMatrix& b) {
        BoolMatrix c(n, std::vector<std::uint8_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (a[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (b[k][j]) c[i][j] = 1;
        return c;
    };
    BoolMatrix N = adj, B = adj;
    std::size_t steps = 0;
    for (std::size_t p = 1; p < n; p <<= 1) ++steps;
    for (std::size_t s = 0; s < steps; ++s) {
        BoolMatrix BN = mul(B, N);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                N[i][j] = static_cast<std::uint8_t>(N[i][j] | BN[i][j]);
        B = mul(B, B);
    }
    return N;
}

LabeledDigraph quotient_vertices(const LabeledDigraph& g,
                                 const std::vector<std::pair<int, int>>& identify) {
    const int n = g.vertex_count();
    std::vector<int> rep(n);
    for (int v = 0; v < n; ++v) rep[v] = v;
    auto find = [&rep](int v) {
        while (rep[v] != v) v = rep[v] = rep[rep[v]];
        return v;
    };
    for (const auto& [a, b] : identify) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw ValidationError("quotient pair references a vertex out of range");
        const int ra = find(a), rb = find(b);
        rep[std::max(ra, rb)] = std::min(ra, rb);
    }
    for (int v = 1; v < n; ++v)
        if (find(v) == 0)
            throw InvalidQuotient("quotient would merge the identity with vertex " +
                                  std::to_string(v));

    std::vector<int> remap(n, -1);
    LabeledDigraph out;
    out.label_count = g.label_count;
    for (int v = 0; v < n; ++v) {
        if (find(v) == v) {
            remap[v] = out.vertex_count();
            out.vertices.push_back(g.vertices[v]);
        }
    }
    for (const Edge& e : g.edges)
        out.edges.push_back(Edge{remap[find(e.src)], remap[find(e.dst)], e.i, e.j});
    std::sort(out.edges.begin(), out.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.i, a.j, a.dst) < std::tie(b.src, b.i, b.j, b.dst);
    });
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

} // namespace gdifs
