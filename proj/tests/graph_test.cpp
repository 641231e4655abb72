#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "gdifs/errors.hpp"
#include "gdifs/graph.hpp"

using namespace gdifs;

namespace {

std::shared_ptr<const Field> rational_line() {
    FieldDescriptor d;
    d.min_poly = {0, 1}; // x: the degree-one field, lambda = 0
    d.root_hint = {0.0, 0.0};
    return Field::create(d);
}

std::shared_ptr<const Field> gaussian_field() {
    FieldDescriptor d;
    d.min_poly = {1, 0, 1};
    d.root_hint = {0.0, 1.0};
    return Field::create(d);
}

IfsSpec interval_ifs() {
    auto f = rational_line();
    const FieldElement half = f->from_rational(mpq_class(1, 2));
    return make_ifs(f, {{half, f->zero()}, {half, half}});
}

Similitude translation(const std::shared_ptr<const Field>& f, int num, int den = 1) {
    return Similitude{f->one(), f->from_rational(mpq_class(num, den))};
}

// Independent oracle: sum of boolean matrix powers M + M^2 + ... + M^n.
BoolMatrix closure_by_power_sum(const BoolMatrix& m) {
    const std::size_t n = m.size();
    BoolMatrix acc(n, std::vector<std::uint8_t>(n, 0));
    BoolMatrix p = m;
    for (std::size_t step = 0; step < n; ++step) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (p[r][c]) acc[r][c] = 1;
        BoolMatrix q(n, std::vector<std::uint8_t>(n, 0));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k)
                if (p[r][k])
                    for (std::size_t c = 0; c < n; ++c)
                        if (m[k][c]) q[r][c] = 1;
        p = std::move(q);
    }
    return acc;
}

} // namespace

TEST_CASE("interval neighbor graph has two translation neighbors") {
    const LabeledDigraph g = build_neighbor_graph(interval_ifs());
    REQUIRE(g.vertex_count() == 3);
    REQUIRE(g.label_count == 2);
    CHECK(g.vertices[0].is_identity());
    CHECK(std::abs(g.vertices[1].evaluate(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(g.vertices[2].evaluate(0.0) + 1.0) < 1e-12);
    REQUIRE(g.edges.size() == 4);
    // Self-loops carry the overlap forward: +1 regenerates under (2,1), -1 under (1,2).
    CHECK(std::count(g.edges.begin(), g.edges.end(), Edge{1, 1, 2, 1}) == 1);
    CHECK(std::count(g.edges.begin(), g.edges.end(), Edge{2, 2, 1, 2}) == 1);
    CHECK(std::count(g.edges.begin(), g.edges.end(), Edge{0, 1, 1, 2}) == 1);
    CHECK(std::count(g.edges.begin(), g.edges.end(), Edge{0, 2, 2, 1}) == 1);

    // Edges are sorted by (src, i, j, dst).
    CHECK(std::is_sorted(g.edges.begin(), g.edges.end(),
                         [](const Edge& a, const Edge& b) {
                             return std::tie(a.src, a.i, a.j, a.dst) <
                                    std::tie(b.src, b.i, b.j, b.dst);
                         }));
}

TEST_CASE("touching neighbors never reach the identity, so the overlap graph is trivial") {
    const LabeledDigraph g = build_neighbor_graph(interval_ifs());
    const LabeledDigraph og = extract_overlap_graph(g);
    CHECK(og.vertex_count() == 1);
    CHECK(og.edges.empty());
    CHECK(og.label_count == 2);
}

TEST_CASE("overlap extraction keeps exactly the vertices that reach the identity") {
    auto f = rational_line();
    LabeledDigraph g;
    g.label_count = 2;
    g.vertices = {Similitude::identity(f), translation(f, 1), translation(f, 2),
                  translation(f, 3)};
    // 2 -> 1 -> id, while 3 only loops on itself.
    g.edges = {{1, 0, 1, 0}, {2, 1, 1, 0}, {3, 3, 2, 0}};
    const LabeledDigraph og = extract_overlap_graph(g);
    REQUIRE(og.vertex_count() == 3);
    CHECK(og.vertices[0].is_identity());
    CHECK(std::abs(og.vertices[1].evaluate(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(og.vertices[2].evaluate(0.0) - 2.0) < 1e-12);
    REQUIRE(og.edges.size() == 2);
    CHECK(og.edges[0] == Edge{1, 0, 1, 0});
    CHECK(og.edges[1] == Edge{2, 1, 1, 0});
}

TEST_CASE("vertex budget is enforced") {
    auto f = gaussian_field();
    const FieldElement mi = f->element({mpq_class(0), mpq_class(-1, 2)});
    const FieldElement pi = f->element({mpq_class(0), mpq_class(1, 2)});
    const IfsSpec ifs = make_ifs(
        f, {{mi, f->element({mpq_class(-1), mpq_class(-2)})},
            {pi, f->element({mpq_class(1), mpq_class(-2)})},
            {pi, f->element({mpq_class(-2), mpq_class(1)})},
            {mi, f->element({mpq_class(1), mpq_class(0)})}});
    BuildOptions opts;
    opts.max_vertices = 2;
    CHECK_THROWS_AS(build_neighbor_graph(ifs, opts), FiniteTypeBudgetExceeded);
}

TEST_CASE("transitive closure matches the power-sum oracle on random graphs") {
    std::mt19937 rng(424242);
    for (int iter = 0; iter < 200; ++iter) {
        std::uniform_int_distribution<int> size_dist(1, 64);
        const int n = size_dist(rng);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        BoolMatrix m(n, std::vector<std::uint8_t>(n, 0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                m[r][c] = coin(rng) < 0.06 ? 1 : 0;
        CHECK(reachability_closure(m) == closure_by_power_sum(m));
    }
}

TEST_CASE("vertex quotient merges classes onto the smallest representative") {
    auto f = rational_line();
    LabeledDigraph g;
    g.label_count = 2;
    g.vertices = {Similitude::identity(f), translation(f, 1), translation(f, 2),
                  translation(f, 3)};
    g.edges = {{1, 0, 1, 0}, {2, 3, 1, 0}, {3, 0, 2, 0}};

    // Identify 2 with 3: targets remap, vertex 3 disappears, duplicates drop.
    const LabeledDigraph q = quotient_vertices(g, {{2, 3}});
    REQUIRE(q.vertex_count() == 3);
    CHECK(std::abs(q.vertices[2].evaluate(0.0) - 2.0) < 1e-12);
    REQUIRE(q.edges.size() == 3);
    CHECK(q.edges[0] == Edge{1, 0, 1, 0});
    CHECK(q.edges[1] == Edge{2, 2, 1, 0}); // 2 -> 3 became a self-loop
    CHECK(q.edges[2] == Edge{2, 0, 2, 0});

    CHECK_THROWS_AS(quotient_vertices(g, {{0, 2}}), InvalidQuotient);
}
