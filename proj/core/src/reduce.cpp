#include "gdifs/reduce.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <set>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

GifsSystem reindex(const GifsSystem& system, const std::vector<int>& keep) {
    std::vector<int> dense(system.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) dense[keep[i]] = static_cast<int>(i);
    GifsSystem out;
    out.map_count = system.map_count;
    out.graph = system.graph;
    out.ifs = system.ifs;
    out.ratio = system.ratio;
    out.removed_maps = system.removed_maps;
    for (int v : keep) {
        std::vector<Term> eq;
        for (const Term& t : system.equations[v])
            eq.push_back(Term{t.map, dense[t.target - 1] + 1});
        out.equations.push_back(std::move(eq));
        out.sets.push_back(system.sets[v]);
    }
    return out;
}

// Tarjan's algorithm, iterative. Components come out children-first (reverse
// topological order of the component DAG).
struct SccResult {
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of;
};

SccResult scc_decompose(const std::vector<std::vector<Term>>& equations) {
    const int n = static_cast<int>(equations.size());
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v)
        for (const Term& t : equations[v]) adj[v].push_back(t.target - 1);

    SccResult res;
    res.comp_of.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    int counter = 0;
    std::vector<std::pair<int, std::size_t>> work;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        work.push_back({root, 0});
        while (!work.empty()) {
            auto& [v, pi] = work.back();
            if (pi == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (pi < adj[v].size()) {
                const int w = adj[v][pi];
                ++pi;
                if (index[w] == -1) {
                    work.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<int> comp;
                for (;;) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    res.comp_of[w] = static_cast<int>(res.comps.size());
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                res.comps.push_back(std::move(comp));
            }
            const int done = v;
            work.pop_back();
            if (!work.empty())
                low[work.back().first] = std::min(low[work.back().first], low[done]);
        }
    }
    return res;
}

// Perron root of the multiplicity matrix restricted to one component, by
// power iteration on M + I (the shift handles periodic components).
double component_perron(const std::vector<std::vector<Term>>& equations,
                        const std::vector<int>& comp) {
    const int n = static_cast<int>(comp.size());
    std::vector<int> pos(equations.size(), -1);
    for (int i = 0; i < n; ++i) pos[comp[i]] = i;
    std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (const Term& t : equations[comp[i]])
            if (pos[t.target - 1] != -1) mat[i][pos[t.target - 1]] += 1.0;

    std::vector<double> x(n, 1.0), y(n);
    double rho = 0.0;
    for (int it = 0; it < 5000; ++it) {
        double norm = 0.0;
        for (int a = 0; a < n; ++a) {
            double acc = x[a];
            for (int b = 0; b < n; ++b) acc += mat[a][b] * x[b];
            y[a] = acc;
            norm = std::max(norm, std::abs(acc));
        }
        if (norm == 0.0) return 0.0;
        for (int a = 0; a < n; ++a) y[a] /= norm;
        const double estimate = norm - 1.0;
        x.swap(y);
        if (it > 3 && std::abs(estimate - rho) < 1e-13 * std::max(1.0, rho)) {
            rho = estimate;
            break;
        }
        rho = estimate;
    }
    return rho;
}

struct SpectralFlags {
    std::vector<int> flagged; // 0-based
    double rho_star = 0.0;
    std::vector<double> best_reachable; // per attractor
    std::vector<double> own_root;       // per attractor (its component's root)
};

SpectralFlags spectral_flags(const std::vector<std::vector<Term>>& equations,
                             double tolerance) {
    SpectralFlags out;
    const int n = static_cast<int>(equations.size());
    if (n == 0) return out;
    const SccResult sc = scc_decompose(equations);
    const int nc = static_cast<int>(sc.comps.size());
    std::vector<double> rho(nc);
    for (int c = 0; c < nc; ++c) rho[c] = component_perron(equations, sc.comps[c]);

    std::vector<std::set<int>> cadj(nc);
    for (int v = 0; v < n; ++v)
        for (const Term& t : equations[v])
            if (sc.comp_of[v] != sc.comp_of[t.target - 1])
                cadj[sc.comp_of[v]].insert(sc.comp_of[t.target - 1]);

    // Components are numbered children-first, so successors are ready.
    std::vector<double> best(nc);
    for (int c = 0; c < nc; ++c) {
        double b = rho[c];
        for (int d : cadj[c]) b = std::max(b, best[d]);
        best[c] = b;
    }
    out.rho_star = *std::max_element(best.begin(), best.end());
    out.best_reachable.resize(n);
    out.own_root.resize(n);
    for (int v = 0; v < n; ++v) {
        out.best_reachable[v] = best[sc.comp_of[v]];
        out.own_root[v] = rho[sc.comp_of[v]];
        if (best[sc.comp_of[v]] <
            out.rho_star - tolerance * std::max(1.0, out.rho_star))
            out.flagged.push_back(v);
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

// Shared by prune_redundant_vertices: dedup equal overlap sets (smallest index
// wins) and merge identical equations among the alive attractors, repeated
// until stable. Mutates eqs/sets/alive in place; appends removal records.
void dedup_and_merge(std::vector<std::vector<Term>>& eqs,
                     std::vector<OverlapSet>& sets, std::vector<char>& alive,
                     ReductionReport& report) {
    const int n = static_cast<int>(eqs.size());
    bool changed = true;
    while (changed) {
        changed = false;

        std::map<OverlapSet, int> seen;
        std::vector<int> remap(n, -1);
        bool any_dup = false;
        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            auto [it, fresh] = seen.emplace(sets[v], v);
            if (!fresh) {
                remap[v] = it->second;
                alive[v] = 0;
                report.removed.push_back(v + 1);
                any_dup = true;
            }
        }
        if (any_dup) {
            changed = true;
            for (int v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                for (Term& t : eqs[v])
                    if (remap[t.target - 1] != -1) t.target = remap[t.target - 1] + 1;
            }
        }

        std::vector<int> idxs;
        for (int v = 0; v < n; ++v)
            if (alive[v]) idxs.push_back(v);
        std::map<int, int> cls;
        for (int v : idxs) cls[v] = 0;
        for (;;) {
            std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> sig;
            std::map<int, int> ncls;
            for (int v : idxs) {
                std::vector<std::pair<int, int>> s;
                for (const Term& t : eqs[v]) s.push_back({t.map, cls[t.target - 1]});
                std::sort(s.begin(), s.end());
                auto [it, fresh] = sig.emplace(
                    std::make_pair(cls[v], std::move(s)), static_cast<int>(sig.size()));
                ncls[v] = it->second;
            }
            if (ncls == cls) break;
            cls = std::move(ncls);
        }
        std::map<int, int> rep;
        for (int v : idxs) rep.emplace(cls[v], v);
        bool any_merge = false;
        std::vector<int> remap2(n, -1);
        for (int v : idxs) {
            remap2[v] = rep[cls[v]];
            if (remap2[v] != v) {
                alive[v] = 0;
                report.removed.push_back(v + 1);
                any_merge = true;
            }
        }
        if (any_merge) {
            changed = true;
            std::map<int, std::vector<int>> classes;
            for (int v : idxs) classes[remap2[v]].push_back(v);
            for (auto& [r, members] : classes)
                if (members.size() >= 2) {
                    for (int& mbr : members) ++mbr;
                    report.merged_classes.push_back(members);
                }
            for (int v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                for (Term& t : eqs[v])
                    if (remap2[t.target - 1] != -1 && remap2[t.target - 1] != t.target - 1)
                        t.target = remap2[t.target - 1] + 1;
            }
        }
    }
}

} // namespace

GifsSystem restrict_reachable(const GifsSystem& system) {
    const int n = system.size();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const Term& t : system.equations[v]) {
            if (!seen[t.target - 1]) {
                seen[t.target - 1] = 1;
                stack.push_back(t.target - 1);
            }
        }
    }
    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
        if (seen[v]) keep.push_back(v);
    return reindex(system, keep);
}

std::pair<GifsSystem, ReductionReport> merge_identical(const GifsSystem& system) {
    const int n = system.size();
    ReductionReport report;
    report.before = n;
    std::vector<int> cls(n, 0);
    for (;;) {
        std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> sig;
        std::vector<int> ncls(n);
        for (int v = 0; v < n; ++v) {
            std::vector<std::pair<int, int>> s;
            for (const Term& t : system.equations[v])
                s.push_back({t.map, cls[t.target - 1]});
            std::sort(s.begin(), s.end());
            auto [it, fresh] = sig.emplace(std::make_pair(cls[v], std::move(s)),
                                           static_cast<int>(sig.size()));
            ncls[v] = it->second;
        }
        if (ncls == cls) break;
        cls = std::move(ncls);
    }
    std::map<int, int> rep;
    for (int v = 0; v < n; ++v) rep.emplace(cls[v], v);
    std::map<int, std::vector<int>> classes;
    for (int v = 0; v < n; ++v) classes[rep[cls[v]]].push_back(v);
    std::vector<int> keep;
    for (auto& [r, members] : classes) {
        keep.push_back(r);
        if (members.size() >= 2) {
            std::vector<int> one_based = members;
            for (int& v : one_based) ++v;
            report.merged_classes.push_back(std::move(one_based));
            for (int v : members)
                if (v != r) report.removed.push_back(v + 1);
        }
    }
    std::sort(keep.begin(), keep.end());

    // Rewrite through representatives before densifying.
    std::vector<int> to_rep(n);
    for (int v = 0; v < n; ++v) to_rep[v] = rep[cls[v]];
    GifsSystem rewritten = system;
    for (auto& eq : rewritten.equations)
        for (Term& t : eq) t.target = to_rep[t.target - 1] + 1;
    GifsSystem out = reindex(rewritten, keep);
    report.after = out.size();
    return {std::move(out), std::move(report)};
}

bool language_included(const LabeledDigraph& og, int s, const std::vector<int>& T,
                       std::size_t state_budget) {
    const int n = og.vertex_count();
    const int m = og.label_count;
    if (s < 0 || s >= n) throw ValidationError("language_included: vertex out of range");
    for (int t : T)
        if (t < 0 || t >= n)
            throw ValidationError("language_included: target vertex out of range");
    const int words = (n + 63) / 64;
    auto set_bit = [](std::vector<std::uint64_t>& bits, int v) {
        bits[v >> 6] |= std::uint64_t{1} << (v & 63);
    };

    // trans[v][i-1] = successor mask; identity gets a self-loop on every label
    // (the address convention: reaching the identity is absorbing-final).
    std::vector<std::vector<std::vector<std::uint64_t>>> trans(
        n, std::vector<std::vector<std::uint64_t>>(
               m, std::vector<std::uint64_t>(words, 0)));
    for (const Edge& e : og.edges)
        if (e.i >= 1 && e.i <= m) set_bit(trans[e.src][e.i - 1], e.dst);
    for (int i = 0; i < m; ++i) set_bit(trans[0][i], 0);

    // Product state: [left NFA vertex, right determinized subset].
    std::vector<std::uint64_t> start(static_cast<std::size_t>(words) + 1, 0);
    start[0] = static_cast<std::uint64_t>(s);
    for (int t : T) start[1 + (t >> 6)] |= std::uint64_t{1} << (t & 63);

    std::set<std::vector<std::uint64_t>> seen{start};
    std::deque<std::vector<std::uint64_t>> queue{start};
    std::vector<std::uint64_t> d2(words);
    while (!queue.empty()) {
        const std::vector<std::uint64_t> st = std::move(queue.front());
        queue.pop_front();
        const int q = static_cast<int>(st[0]);
        if (q == 0) {
            if (!(st[1] & 1)) return false; // left accepts, right does not
            continue; // both absorbed at the identity: no failure beyond here
        }
        for (int i = 0; i < m; ++i) {
            std::fill(d2.begin(), d2.end(), 0);
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = st[1 + w];
                while (bits) {
                    const int v = (w << 6) + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    for (int ww = 0; ww < words; ++ww) d2[ww] |= trans[v][i][ww];
                }
            }
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = trans[q][i][w];
                while (bits) {
                    const int q2 = (w << 6) + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    std::vector<std::uint64_t> nxt(static_cast<std::size_t>(words) + 1);
                    nxt[0] = static_cast<std::uint64_t>(q2);
                    std::copy(d2.begin(), d2.end(), nxt.begin() + 1);
                    if (seen.insert(nxt).second) {
                        if (seen.size() > state_budget)
                            throw StateBudgetExceeded(
                                "language inclusion exceeded " +
                                std::to_string(state_budget) + " product states");
                        queue.push_back(std::move(nxt));
                    }
                }
            }
        }
    }
    return true;
}

std::pair<GifsSystem, ReductionReport>
prune_redundant_vertices(const GifsSystem& system, const LabeledDigraph& og,
                         const ReduceOptions& opts) {
    const int n = system.size();
    ReductionReport report;
    report.before = n;
    std::vector<std::vector<Term>> eqs = system.equations;
    std::vector<OverlapSet> sets = system.sets;
    std::vector<char> alive(n, 1);

    dedup_and_merge(eqs, sets, alive, report);
    for (;;) {
        bool any_prune = false;
        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            const OverlapSet current = sets[v];
            if (current.size() < 2) continue;
            for (int s : current) {
                std::vector<int> rest;
                for (int t : current)
                    if (t != s) rest.push_back(t);
                bool included;
                try {
                    included = language_included(og, s, rest, opts.state_budget);
                } catch (const StateBudgetExceeded&) {
                    report.notes.push_back(
                        "pruning skipped for attractor " + std::to_string(v + 1) +
                        ": language inclusion exceeded the state budget");
                    break;
                }
                if (included) {
                    sets[v].erase(std::find(sets[v].begin(), sets[v].end(), s));
                    any_prune = true;
                    break;
                }
            }
        }
        if (!any_prune) break;
        dedup_and_merge(eqs, sets, alive, report);
    }

    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
        if (alive[v]) keep.push_back(v);
    GifsSystem pruned = system;
    pruned.equations = std::move(eqs);
    pruned.sets = std::move(sets);
    GifsSystem out = reindex(pruned, keep);
    report.after = out.size();
    return {std::move(out), std::move(report)};
}

ReductionReport flag_degenerate(const GifsSystem& system, const ReduceOptions& opts) {
    ReductionReport report;
    report.before = report.after = system.size();
    const SpectralFlags fl = spectral_flags(system.equations, opts.spectral_tolerance);
    report.rho_star = fl.rho_star;
    for (int v : fl.flagged)
        report.degenerate.push_back(
            {v + 1, "forward-reachable Perron root " +
                        format_double(fl.best_reachable[v]) +
                        " is below the system maximum " + format_double(fl.rho_star) +
                        " (own component root " + format_double(fl.own_root[v]) + ")"});
    report.degenerate_flagged = static_cast<int>(fl.flagged.size());
    return report;
}

GifsSystem drop_attractors(const GifsSystem& system, const std::vector<int>& flagged) {
    const int n = system.size();
    std::vector<char> dead(n, 0);
    for (int f : flagged) {
        if (f < 1 || f > n)
            throw ValidationError("drop_attractors: index out of range");
        dead[f - 1] = 1;
    }
    if (n > 0 && dead[0])
        throw ValidationError("drop_attractors: cannot drop attractor 1");
    GifsSystem stripped = system;
    for (auto& eq : stripped.equations) {
        std::vector<Term> kept;
        for (const Term& t : eq)
            if (!dead[t.target - 1]) kept.push_back(t);
        eq = std::move(kept);
    }
    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
        if (!dead[v]) keep.push_back(v);
    return reindex(stripped, keep);
}

std::pair<GifsSystem, ReductionReport> reduce_system(const GifsSystem& system,
                                                     const ReduceOptions& opts) {
    ReductionReport report;
    report.before = system.size();
    {
        const SccResult sc = scc_decompose(system.equations);
        if (!sc.comps.empty())
            report.component_of_first =
                static_cast<int>(sc.comps[sc.comp_of[0]].size());
    }

    GifsSystem current = restrict_reachable(system);
    report.after_restrict = current.size();
    report.notes.push_back("restrict_reachable: " + std::to_string(report.before) +
                           " -> " + std::to_string(report.after_restrict));

    auto [merged, merge_report] = merge_identical(current);
    current = std::move(merged);
    report.after_merge = current.size();
    report.merged_classes = std::move(merge_report.merged_classes);
    report.removed = std::move(merge_report.removed);
    report.notes.push_back("merge_identical: " + std::to_string(report.after_restrict) +
                           " -> " + std::to_string(report.after_merge));

    auto [pruned, prune_report] = prune_redundant_vertices(current, current.graph, opts);
    current = std::move(pruned);
    report.after_prune = current.size();
    for (auto& cls : prune_report.merged_classes)
        report.merged_classes.push_back(std::move(cls));
    for (int v : prune_report.removed) report.removed.push_back(v);
    for (auto& note : prune_report.notes) report.notes.push_back(std::move(note));
    report.notes.push_back("prune_redundant_vertices: " +
                           std::to_string(report.after_merge) + " -> " +
                           std::to_string(report.after_prune));

    for (;;) {
        const ReductionReport flags = flag_degenerate(current, opts);
        report.rho_star = flags.rho_star;
        if (flags.degenerate.empty()) break;
        report.degenerate_flagged += flags.degenerate_flagged;
        std::vector<int> indices;
        for (const auto& [idx, reason] : flags.degenerate) {
            indices.push_back(idx);
            report.degenerate.push_back({idx, reason});
            report.removed.push_back(idx);
        }
        current = drop_attractors(current, indices);
        auto [remerged, remerge_report] = merge_identical(current);
        current = std::move(remerged);
        for (auto& cls : remerge_report.merged_classes)
            report.merged_classes.push_back(std::move(cls));
        for (int v : remerge_report.removed) report.removed.push_back(v);
        report.notes.push_back("drop degenerate + merge: -> " +
                               std::to_string(current.size()));
    }

    report.after = current.size();
    return {std::move(current), std::move(report)};
}

} // namespace gdifs
