#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "gdifs/field.hpp"

namespace gdifs {

// Planar similitude z -> a*z + b with exact field coefficients.
// Both IFS maps and neighbor maps are represented this way.
struct Similitude {
    FieldElement a;
    FieldElement b;

    static Similitude identity(const std::shared_ptr<const Field>& f);

    bool is_identity() const { return a.is_one() && b.is_zero(); }

    std::complex<double> evaluate(std::complex<double> z) const {
        return a.embed() * z + b.embed();
    }

    std::string to_string() const;

    bool operator==(const Similitude& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Similitude& o) const { return !(*this == o); }

    std::size_t hash() const;
};

// f o g
Similitude compose(const Similitude& f, const Similitude& g);

// f^(-1); requires a != 0.
Similitude invert(const Similitude& f);

struct SimilitudeHash {
    std::size_t operator()(const Similitude& s) const { return s.hash(); }
};

// An ordered, equal-ratio iterated function system over one field.
struct IfsSpec {
    std::shared_ptr<const Field> field;
    std::vector<Similitude> maps; // f_1..f_m, order significant
    double ratio = 0.0;           // |embed(a)| shared by all maps

    int map_count() const { return static_cast<int>(maps.size()); }

    // Bounding radius of the attractor around the origin.
    double bounding_radius() const;
};

// Validates map count, nonzero multipliers, equal contraction ratios in (0,1);
// fills in ratio. Throws ValidationError listing every violation.
IfsSpec make_ifs(const std::shared_ptr<const Field>& field,
                 std::vector<Similitude> maps);

} // namespace gdifs
