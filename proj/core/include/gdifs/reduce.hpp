#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gdifs/gifs.hpp"

namespace gdifs {

// What a reduction pass did: stage counts, identified classes, removed
// attractors (indices valid at the moment of removal, 1-based), degenerate
// flags with the spectral reason, and the final Perron root.
struct ReductionReport {
    int before = 0;
    int after = 0;
    // Size of B_1's strongly connected component in the input system (the
    // irreducible block the dimension ultimately comes from).
    int component_of_first = 0;
    int after_restrict = 0;
    int after_merge = 0;
    int after_prune = 0;
    int degenerate_flagged = 0;
    double rho_star = 0.0;
    std::vector<std::vector<int>> merged_classes; // classes of size >= 2
    std::vector<int> removed;
    std::vector<std::pair<int, std::string>> degenerate;
    std::vector<std::string> notes;
};

struct ReduceOptions {
    // Cap on determinized subset states per language-inclusion query.
    std::size_t state_budget = std::size_t{1} << 18;
    // Relative gap below the maximal Perron root that counts as degenerate.
    double spectral_tolerance = 1e-9;
};

// Keeps exactly the attractors reachable from B_1 through equation targets,
// reindexed densely in the original order. Equations of retained attractors
// are unchanged.
GifsSystem restrict_reachable(const GifsSystem& system);

// Coarsest-fixpoint identification of attractors with equal equations
// (partition refinement as in automaton minimization); representatives are
// the smallest class members.
std::pair<GifsSystem, ReductionReport> merge_identical(const GifsSystem& system);

// Decides L_s ⊆ ⋃_{t∈T} L_t over the overlap graph og, where L_v is the
// language of edge-label words on paths from v to the identity, read with the
// identity's absorbing self-loops on every label. Exact subset construction;
// throws StateBudgetExceeded past the cap.
bool language_included(const LabeledDigraph& og, int s, const std::vector<int>& T,
                       std::size_t state_budget = std::size_t{1} << 18);

// Removes overlap vertices whose language is covered by the rest of their
// set (the covered part of the overlap region is already accounted for),
// then dedups equal sets and merges identical equations, iterating to a
// fixpoint. Budget-exceeded queries skip that set and are recorded.
std::pair<GifsSystem, ReductionReport>
prune_redundant_vertices(const GifsSystem& system, const LabeledDigraph& og,
                         const ReduceOptions& opts = {});

// Flags attractors that cannot reach any strongly connected component whose
// Perron root attains the system maximum: their dimension is strictly
// smaller, so they are lower-dimensional ("superficial") parts.
ReductionReport flag_degenerate(const GifsSystem& system,
                                const ReduceOptions& opts = {});

// Removes the given attractors (1-based) and every term targeting them.
GifsSystem drop_attractors(const GifsSystem& system, const std::vector<int>& flagged);

// Full heuristic chain: restrict_reachable, merge_identical,
// prune_redundant_vertices, then flag/drop/merge iterated to a fixpoint.
// The report is the aggregate over all stages; reaching a fixpoint is
// certified, minimality is not.
std::pair<GifsSystem, ReductionReport> reduce_system(const GifsSystem& system,
                                                     const ReduceOptions& opts = {});

} // namespace gdifs
