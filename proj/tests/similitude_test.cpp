#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "gdifs/errors.hpp"
#include "gdifs/similitude.hpp"

using namespace gdifs;

namespace {

std::shared_ptr<const Field> gaussian_field() {
    FieldDescriptor d;
    d.min_poly = {1, 0, 1};
    d.root_hint = {0.0, 1.0};
    return Field::create(d);
}

FieldElement fe(const std::shared_ptr<const Field>& f, int c0, int c1, int den = 1) {
    return f->element({mpq_class(c0, den), mpq_class(c1, den)});
}

} // namespace

TEST_CASE("composition and inversion agree with the complex embedding") {
    auto f = gaussian_field();
    const Similitude s{fe(f, 0, 1, 2), fe(f, 1, -2)};  // z -> (i/2) z + (1-2i)
    const Similitude t{fe(f, 0, -1, 2), fe(f, -1, 0)}; // z -> (-i/2) z - 1

    const Similitude st = compose(s, t);
    const std::complex<double> z(0.3, -0.7);
    CHECK(std::abs(st.evaluate(z) - s.evaluate(t.evaluate(z))) < 1e-12);

    const Similitude si = invert(s);
    CHECK(compose(s, si) == Similitude::identity(f));
    CHECK(compose(si, s) == Similitude::identity(f));
    CHECK(std::abs(si.evaluate(s.evaluate(z)) - z) < 1e-12);

    CHECK(Similitude::identity(f).is_identity());
    CHECK(!s.is_identity());
    CHECK_THROWS_AS(invert(Similitude{f->zero(), f->one()}), NumericError);
}

TEST_CASE("make_ifs validates multipliers and fills the common ratio") {
    auto f = gaussian_field();
    std::vector<Similitude> maps = {
        {fe(f, 0, -1, 2), fe(f, -1, -2)},
        {fe(f, 0, 1, 2), fe(f, 1, -2)},
    };
    IfsSpec ifs = make_ifs(f, maps);
    CHECK(ifs.map_count() == 2);
    CHECK(ifs.ratio == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ifs.bounding_radius() == doctest::Approx(std::sqrt(5.0) / 0.5).epsilon(1e-9));

    SUBCASE("too few maps") {
        CHECK_THROWS_AS(make_ifs(f, {maps[0]}), ValidationError);
    }
    SUBCASE("expanding multiplier") {
        std::vector<Similitude> bad = maps;
        bad[0].a = fe(f, 0, 2); // |2i| = 2 >= 1
        CHECK_THROWS_AS(make_ifs(f, bad), ValidationError);
    }
    SUBCASE("zero multiplier") {
        std::vector<Similitude> bad = maps;
        bad[0].a = f->zero();
        CHECK_THROWS_AS(make_ifs(f, bad), ValidationError);
    }
    SUBCASE("mixed contraction ratios") {
        std::vector<Similitude> bad = maps;
        bad[0].a = fe(f, 1, 0, 4); // |1/4| != |i/2|
        CHECK_THROWS_AS(make_ifs(f, bad), ValidationError);
    }
}

TEST_CASE("similitude equality and hashing are structural") {
    auto f = gaussian_field();
    const Similitude s{fe(f, 0, 1, 2), fe(f, 1, -2)};
    const Similitude same{fe(f, 0, 1, 2), fe(f, 1, -2)};
    const Similitude other{fe(f, 0, 1, 2), fe(f, 1, -1)};
    CHECK(s == same);
    CHECK(s.hash() == same.hash());
    CHECK(s != other);
    CHECK(!s.to_string().empty());
}
