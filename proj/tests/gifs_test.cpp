#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>

#include "gdifs/config.hpp"
#include "gdifs/errors.hpp"
#include "gdifs/gifs.hpp"

using namespace gdifs;

namespace {

std::shared_ptr<const Field> rational_line() {
    FieldDescriptor d;
    d.min_poly = {0, 1};
    d.root_hint = {0.0, 0.0};
    return Field::create(d);
}

IfsSpec interval_ifs() {
    auto f = rational_line();
    const FieldElement half = f->from_rational(mpq_class(1, 2));
    return make_ifs(f, {{half, f->zero()}, {half, half}});
}

LabeledDigraph imported_overlap_graph() {
    const std::string path = std::string(GDIFS_CONFIG_DIR) + "/imported_overlap_graph.json";
    return *parse_config(path).overlap_graph;
}

} // namespace

TEST_CASE("an empty overlap graph yields the single self-covering equation") {
    const LabeledDigraph og = extract_overlap_graph(build_neighbor_graph(interval_ifs()));
    const GifsSystem system = build_gifs(og);
    REQUIRE(system.size() == 1);
    CHECK(system.sets[0].empty());
    CHECK(system.equations[0] == std::vector<Term>{{1, 1}, {2, 1}});
    CHECK(system.removed_maps.empty());
    CHECK(validate_gifs(system).empty());
}

TEST_CASE("initialization reads the mirror edges below the diagonal") {
    const LabeledDigraph og = imported_overlap_graph();
    const GifsInit init = init_overlap_sets(og);
    REQUIRE(init.raw_sets.size() == 3);
    CHECK(init.raw_sets[0].empty());          // S_1
    CHECK(init.removed_maps.empty());
    CHECK(!init.named_sets.empty());
    CHECK(init.named_sets[0].empty());
    CHECK(!init.first_equation.empty());
}

TEST_CASE("the imported overlap graph expands to eight equations") {
    const GifsSystem system = build_gifs(imported_overlap_graph());
    REQUIRE(system.size() == 8);
    // Two late attractors are single images of earlier ones.
    CHECK(system.equations[3] == std::vector<Term>{{2, 6}});
    CHECK(system.equations[7] == std::vector<Term>{{2, 7}});
    CHECK(validate_gifs(system).empty());

    SUBCASE("equation labels ascend and sets are canonical") {
        for (const auto& eq : system.equations) {
            REQUIRE(!eq.empty());
            for (std::size_t k = 1; k < eq.size(); ++k) CHECK(eq[k - 1].map < eq[k].map);
        }
        for (const auto& s : system.sets)
            CHECK(std::is_sorted(s.begin(), s.end()));
    }
}

TEST_CASE("the equation budget is enforced") {
    GifsOptions opts;
    opts.max_equations = 4;
    CHECK_THROWS_AS(build_gifs(imported_overlap_graph(), opts), BudgetExceeded);
}

TEST_CASE("expand_equation requires the next unexpanded index") {
    const LabeledDigraph og = imported_overlap_graph();
    GifsSystem system;
    system.map_count = og.label_count;
    system.graph = og;
    system.sets = init_overlap_sets(og).named_sets;
    CHECK_THROWS_AS(expand_equation(system, 3), ValidationError);
    expand_equation(system, 1);
    CHECK(system.equations.size() == 1);
}

TEST_CASE("a complete overlap removes the map and restarts") {
    auto f = rational_line();
    LabeledDigraph og;
    og.label_count = 3;
    og.vertices = {Similitude::identity(f)};
    og.edges = {{0, 0, 2, 1}}; // f_2 coincides with f_1: S_2 covers the identity
    const GifsSystem system = build_gifs(og);
    CHECK(system.removed_maps == std::vector<int>{2});
    CHECK(system.map_count == 2);
    REQUIRE(system.size() == 1);
    CHECK(system.equations[0] == std::vector<Term>{{1, 1}, {2, 1}});

    SUBCASE("removing the last map is rejected") {
        LabeledDigraph tiny;
        tiny.label_count = 2;
        tiny.vertices = {Similitude::identity(f)};
        tiny.edges = {{0, 0, 2, 1}};
        CHECK_THROWS_AS(build_gifs(tiny), ValidationError);
    }
}

TEST_CASE("validation names the equation and label of a planted defect") {
    GifsSystem system = build_gifs(imported_overlap_graph());

    SUBCASE("missing term") {
        system.equations[3].clear();
        const auto violations = validate_gifs(system);
        REQUIRE(!violations.empty());
        bool named = false;
        for (const auto& v : violations)
            if (v.find("equation 4") != std::string::npos) named = true;
        CHECK(named);
    }
    SUBCASE("wrong target") {
        system.equations[7][0].target = 1;
        CHECK(!validate_gifs(system).empty());
    }
    SUBCASE("duplicate sets") {
        system.sets[1] = system.sets[2];
        CHECK(!validate_gifs(system).empty());
    }
}
