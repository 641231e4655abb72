#include "gdifs/gifs.hpp"

#include <algorithm>
#include <map>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

OverlapSet sorted_unique(OverlapSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool contains_identity(const OverlapSet& s) {
    return std::binary_search(s.begin(), s.end(), 0);
}

// Union of S_i with the label-i successors of every vertex of S_k.
OverlapSet step_set(const OverlapSet& s_init, const OverlapSet& s_k,
                    const std::vector<std::vector<int>>& succ, int m, int i) {
    OverlapSet out = s_init;
    for (int t : s_k) {
        const auto& lst = succ[static_cast<std::size_t>(t) * m + (i - 1)];
        out.insert(out.end(), lst.begin(), lst.end());
    }
    return sorted_unique(std::move(out));
}

// Drops every edge using label `rm` in either position and shifts higher
// labels down, producing the overlap graph of the IFS without map rm.
LabeledDigraph remove_label(const LabeledDigraph& g, int rm) {
    LabeledDigraph out;
    out.vertices = g.vertices;
    out.label_count = g.label_count - 1;
    for (const Edge& e : g.edges) {
        if (e.i == rm || e.j == rm) continue;
        Edge n = e;
        if (n.i > rm) --n.i;
        if (n.j > rm) --n.j;
        out.edges.push_back(n);
    }
    return out;
}

} // namespace

GifsInit init_overlap_sets(const LabeledDigraph& og) {
    const int m = og.label_count;
    if (m < 1) throw ValidationError("overlap graph has no labels");
    GifsInit init;
    init.raw_sets.assign(m, {});
    for (const Edge& e : og.edges)
        if (e.src == 0 && e.j < e.i) init.raw_sets[e.i - 1].push_back(e.dst);
    for (auto& s : init.raw_sets) s = sorted_unique(std::move(s));

    for (int i = 1; i <= m; ++i)
        if (contains_identity(init.raw_sets[i - 1])) init.removed_maps.push_back(i);

    std::map<OverlapSet, int> name;
    for (int i = 1; i <= m; ++i) {
        if (contains_identity(init.raw_sets[i - 1])) continue;
        auto [it, fresh] =
            name.emplace(init.raw_sets[i - 1], static_cast<int>(init.named_sets.size()));
        if (fresh) init.named_sets.push_back(init.raw_sets[i - 1]);
        init.first_equation.push_back(Term{i, it->second + 1});
    }
    return init;
}

void expand_equation(GifsSystem& system, int k, const GifsOptions& opts) {
    if (k != static_cast<int>(system.equations.size()) + 1 ||
        k > static_cast<int>(system.sets.size()))
        throw ValidationError("expand_equation: equation " + std::to_string(k) +
                              " is not the next unbuilt one");
    const int m = system.map_count;
    const auto succ = system.graph.successors_by_label();

    // Initial sets S_1..S_m are re-read from the graph; they are what the
    // recursion reuses at every step.
    std::vector<OverlapSet> s_init(m);
    for (const Edge& e : system.graph.edges)
        if (e.src == 0 && e.j < e.i) s_init[e.i - 1].push_back(e.dst);
    for (auto& s : s_init) s = sorted_unique(std::move(s));

    std::map<OverlapSet, int> name;
    for (int l = 0; l < static_cast<int>(system.sets.size()); ++l)
        name.emplace(system.sets[l], l);

    const OverlapSet s_k = system.sets[k - 1];
    std::vector<Term> eq;
    for (int i = 1; i <= m; ++i) {
        OverlapSet sik = step_set(s_init[i - 1], s_k, succ, m, i);
        if (contains_identity(sik)) continue; // empty piece
        auto it = name.find(sik);
        int target;
        if (it == name.end()) {
            if (system.sets.size() + 1 > opts.max_equations)
                throw BudgetExceeded("recursion needs more than " +
                                     std::to_string(opts.max_equations) +
                                     " attractor names");
            target = static_cast<int>(system.sets.size()) + 1;
            system.sets.push_back(sik);
            name.emplace(std::move(sik), target - 1);
        } else {
            target = it->second + 1;
        }
        eq.push_back(Term{i, target});
    }
    system.equations.push_back(std::move(eq));
}

GifsSystem build_gifs(const LabeledDigraph& og, const GifsOptions& opts) {
    LabeledDigraph graph = og;
    std::vector<int> removed; // original 1-based labels, ascending
    GifsInit init;
    for (;;) {
        init = init_overlap_sets(graph);
        if (init.removed_maps.empty()) break;
        // A complete overlap means f_i(A) equals an earlier piece: the map is
        // dropped from the IFS and the construction restarts without it.
        int rm = init.removed_maps.front();
        int original = rm;
        for (int r : removed)
            if (r <= original) ++original;
        removed.insert(std::lower_bound(removed.begin(), removed.end(), original),
                       original);
        if (graph.label_count <= 2)
            throw ValidationError(
                "complete overlap would leave fewer than two maps");
        graph = remove_label(graph, rm);
    }

    GifsSystem system;
    system.map_count = graph.label_count;
    system.graph = std::move(graph);
    system.removed_maps = std::move(removed);
    system.sets = init.named_sets;
    if (system.sets.empty() || !system.sets[0].empty())
        throw ValidationError("initialization did not produce S_1 = empty set");
    for (int k = 1; k <= static_cast<int>(system.sets.size()); ++k)
        expand_equation(system, k, opts);
    return system;
}

std::vector<std::string> validate_gifs(const GifsSystem& system) {
    std::vector<std::string> violations;
    const int n = system.size();
    const int m = system.map_count;
    if (n == 0) {
        violations.push_back("system has no equations");
        return violations;
    }
    if (static_cast<int>(system.sets.size()) != n)
        violations.push_back("sets/equations length mismatch");
    if (!system.sets.empty() && !system.sets[0].empty())
        violations.push_back("S_1 is not empty");
    for (int a = 0; a < static_cast<int>(system.sets.size()); ++a)
        for (int b = a + 1; b < static_cast<int>(system.sets.size()); ++b)
            if (system.sets[a] == system.sets[b])
                violations.push_back("duplicate overlap sets at attractors " +
                                     std::to_string(a + 1) + " and " +
                                     std::to_string(b + 1));

    const auto succ = system.graph.successors_by_label();
    std::vector<OverlapSet> s_init(m);
    for (const Edge& e : system.graph.edges)
        if (e.src == 0 && e.j < e.i) s_init[e.i - 1].push_back(e.dst);
    for (auto& s : s_init) s = sorted_unique(std::move(s));

    for (int k = 1; k <= n; ++k) {
        const auto& eq = system.equations[k - 1];
        for (std::size_t idx = 0; idx < eq.size(); ++idx) {
            const Term& term = eq[idx];
            if (idx > 0 && eq[idx - 1].map >= term.map)
                violations.push_back("equation " + std::to_string(k) +
                                     ": labels not strictly increasing at label " +
                                     std::to_string(term.map));
            if (term.map < 1 || term.map > m || term.target < 1 || term.target > n) {
                violations.push_back("equation " + std::to_string(k) +
                                     ": term out of range (label " +
                                     std::to_string(term.map) + ")");
                continue;
            }
        }
        std::size_t idx = 0;
        for (int i = 1; i <= m; ++i) {
            OverlapSet sik =
                step_set(s_init[i - 1], system.sets[k - 1], succ, m, i);
            const bool dropped = contains_identity(sik);
            const bool stored = idx < eq.size() && eq[idx].map == i;
            if (stored && dropped)
                violations.push_back("equation " + std::to_string(k) + ", label " +
                                     std::to_string(i) +
                                     ": term present but its set covers the identity");
            else if (!stored && !dropped)
                violations.push_back("equation " + std::to_string(k) + ", label " +
                                     std::to_string(i) + ": term missing");
            else if (stored && system.sets[eq[idx].target - 1] != sik)
                violations.push_back("equation " + std::to_string(k) + ", label " +
                                     std::to_string(i) + ": target B_" +
                                     std::to_string(eq[idx].target) +
                                     " does not carry the recomputed set");
            if (stored) ++idx;
        }
    }
    return violations;
}

} // namespace gdifs
