#include "gdifs/similitude.hpp"

#include <cmath>
#include <sstream>

#include "gdifs/errors.hpp"

namespace gdifs {

Similitude Similitude::identity(const std::shared_ptr<const Field>& f) {
    return Similitude{f->one(), f->zero()};
}

std::string Similitude::to_string() const {
    std::ostringstream os;
    os << "z -> (" << a.to_string() << ")·z + (" << b.to_string() << ")";
    return os.str();
}

std::size_t Similitude::hash() const {
    std::size_t h = a.hash();
    h ^= b.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

Similitude compose(const Similitude& f, const Similitude& g) {
    return Similitude{f.a * g.a, f.a * g.b + f.b};
}

Similitude invert(const Similitude& f) {
    const FieldElement ia = f.a.inverse();
    return Similitude{ia, -(ia * f.b)};
}

double IfsSpec::bounding_radius() const {
    double mb = 0.0;
    for (const auto& m : maps) mb = std::max(mb, std::abs(m.b.embed()));
    return mb / (1.0 - ratio);
}

IfsSpec make_ifs(const std::shared_ptr<const Field>& field,
                 std::vector<Similitude> maps) {
    std::vector<std::string> problems;
    if (maps.size() < 2) problems.push_back("an IFS needs at least two maps");
    double r = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].a.is_zero()) {
            problems.push_back("map " + std::to_string(i + 1) + " has multiplier 0");
            continue;
        }
        const double ri = std::abs(maps[i].a.embed());
        if (i == 0) {
            r = ri;
            if (!(ri < 1.0))
                problems.push_back("maps must be contractions; |a_1| = " + std::to_string(ri));
        } else if (std::abs(ri - r) > 1e-12) {
            problems.push_back("map " + std::to_string(i + 1) +
                               " breaks the equal-ratio requirement: |a| = " +
                               std::to_string(ri) + " vs " + std::to_string(r));
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid IFS:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ValidationError(msg);
    }
    IfsSpec spec;
    spec.field = field;
    spec.maps = std::move(maps);
    spec.ratio = r;
    return spec;
}

} // namespace gdifs
