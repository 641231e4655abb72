#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gdifs/graph.hpp"

namespace gdifs {

// One right-hand-side term f_map(B_target) of a set equation.
// map is the 1-based IFS label, target the 1-based attractor index.
struct Term {
    int map = 0;
    int target = 0;

    auto operator<=>(const Term&) const = default;
};

// Sorted, duplicate-free set of overlap-graph vertex indices. Each attractor
// B_k is the closure of A minus the overlap images h(A), h ranging over the
// set; the set itself is the canonical name used for dedup.
using OverlapSet = std::vector<int>;

// Graph-directed system B_k = union of f_map(B_target) over equations[k-1].
// Attractor 1 is the full attractor A (its overlap set is empty).
struct GifsSystem {
    int map_count = 0;
    std::vector<std::vector<Term>> equations; // equations[k-1], labels ascending
    std::vector<OverlapSet> sets;             // sets[k-1]
    LabeledDigraph graph;                     // overlap graph the system came from
    std::optional<IfsSpec> ifs;               // present when built from an IFS
    double ratio = 0.0;                       // shared contraction ratio (0 if unknown)
    std::vector<int> removed_maps;            // original labels dropped as complete overlaps

    int size() const { return static_cast<int>(equations.size()); }
};

struct GifsOptions {
    // Cap on the number of attractor names the recursion may create.
    std::size_t max_equations = std::size_t{1} << 20;
};

// Result of the initialization step on an overlap graph with m labels.
struct GifsInit {
    // S_1..S_m exactly as read off the identity edges (before removal/dedup).
    std::vector<OverlapSet> raw_sets;
    // 1-based labels i whose S_i contained the identity (complete overlap).
    std::vector<int> removed_maps;
    // Distinct sets in naming order; named_sets[0] is the empty set of B_1.
    std::vector<OverlapSet> named_sets;
    // B_1's equation over the deduped names, removed labels omitted.
    std::vector<Term> first_equation;
};

// Reads S_i = { s : identity -> s with labels (i, j), j < i } for i = 1..m,
// flags complete-overlap labels, merges duplicate sets to the smallest index
// and emits the first equation.
GifsInit init_overlap_sets(const LabeledDigraph& og);

// Appends equation k (which must be the next unbuilt one, with sets[k-1]
// known): for each label i the set S_ik = S_i ∪ { s : t ->(i) s, t ∈ S_k } is
// computed; terms whose set contains the identity are dropped, already-seen
// sets reuse their name, and new sets get fresh names in ascending label
// order. Throws BudgetExceeded when a fresh name would pass the cap.
void expand_equation(GifsSystem& system, int k, const GifsOptions& opts = {});

// Runs initialization and the expansion loop to completion. When a label is
// removed as a complete overlap the build restarts on the graph with that
// label's edges deleted (both label positions) and higher labels shifted
// down; removed original labels are recorded on the result. Deterministic.
GifsSystem build_gifs(const LabeledDigraph& og, const GifsOptions& opts = {});

// Self-consistency audit: recomputes every S_ik from the stored graph and
// confirms each term's target set, each dropped label, S_1 = ∅ and that no
// two stored sets coincide. Returns human-readable violations (empty on
// success).
std::vector<std::string> validate_gifs(const GifsSystem& system);

} // namespace gdifs
