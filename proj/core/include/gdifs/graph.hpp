#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gdifs/similitude.hpp"

namespace gdifs {

// Directed edge src -> dst with label pair (i, j):
// dst = canonical(f_i^(-1) o src o f_j). Labels are 1-based map indices. For
// edges out of vertices other than the identity only the first label matters
// downstream; imported graphs may carry j = 0 there.
struct Edge {
    int src = 0;
    int dst = 0;
    int i = 0;
    int j = 0;

    auto operator<=>(const Edge&) const = default;
};

// Vertices are canonical similitudes (neighbor maps), vertex 0 the identity.
// Specializes to the neighbor graph and the overlap graph.
struct LabeledDigraph {
    std::vector<Similitude> vertices;
    std::vector<Edge> edges; // sorted by (src, i, j, dst)
    int label_count = 0;     // m

    int vertex_count() const { return static_cast<int>(vertices.size()); }

    // successors_by_label()[v * label_count + (i-1)] = sorted target list.
    std::vector<std::vector<int>> successors_by_label() const;
};

struct BuildOptions {
    int max_vertices = 10000;
    // Slack added to the 2R candidate bound, as a fraction of R.
    double prune_slack = 1e-6;
};

// Frontier expansion from the identity (skipping i == j on the first step),
// numeric candidate filter |h(0)| <= 2R + slack·R, then iterated sink deletion
// (identity exempt). Deterministic: vertices numbered in BFS discovery order,
// edges sorted.
LabeledDigraph build_neighbor_graph(const IfsSpec& ifs, const BuildOptions& opts = {});

// Induced subgraph on vertices with a directed path of length >= 1 to the
// identity, plus the identity itself; labels unchanged, vertex order preserved.
LabeledDigraph extract_overlap_graph(const LabeledDigraph& nbr);

// Square boolean matrix, row-major.
using BoolMatrix = std::vector<std::vector<std::uint8_t>>;

// Transitive closure: entry (k,l) = 1 iff a directed path of length >= 1
// exists from k to l. Computed by the doubling scheme
//   B = N = M; repeat ceil(log2 n) times: N = min(B·N + N, 1); B = min(B·B, 1)
// which covers every path length in [1, 2^ceil(log2 n)] ⊇ [1, n].
BoolMatrix reachability_closure(const BoolMatrix& adj);

// Merge the vertex classes induced by the given index pairs (smallest index
// becomes the representative), drop duplicate parallel edges, renumber densely
// preserving order. Throws InvalidQuotient if a class would merge the identity
// with a non-identity vertex.
LabeledDigraph quotient_vertices(const LabeledDigraph& g,
                                 const std::vector<std::pair<int, int>>& identify);

} // namespace gdifs
