#include "gdifs/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

// Evaluate p and p' at z where p has integer coefficients, constant first.
std::pair<std::complex<double>, std::complex<double>>
horner(const std::vector<mpz_class>& p, std::complex<double> z) {
    std::complex<double> v{0, 0}, d{0, 0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        d = d * z + v;
        v = v * z + it->get_d();
    }
    return {v, d};
}

double poly_scale(const std::vector<mpz_class>& p, std::complex<double> z) {
    double s = 0.0, zp = 1.0;
    const double az = std::max(1.0, std::abs(z));
    for (const auto& c : p) {
        s += std::abs(c.get_d()) * zp;
        zp *= az;
    }
    return std::max(1.0, s);
}

// Durand-Kerner simultaneous iteration; returns all complex roots.
std::vector<std::complex<double>> all_roots(const std::vector<mpz_class>& p) {
    const int d = static_cast<int>(p.size()) - 1;
    std::vector<std::complex<double>> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = p[i].get_d();
    // Initial guesses on a slightly irrational circle.
    std::vector<std::complex<double>> r(d);
    double radius = 0.0;
    for (int i = 0; i < d; ++i) radius = std::max(radius, std::abs(c[i] / c[d]));
    radius = 1.0 + radius;
    for (int i = 0; i < d; ++i)
        r[i] = std::polar(radius, 0.4 + 2.0 * M_PI * i / d);
    for (int it = 0; it < 1000; ++it) {
        double moved = 0.0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> num{0, 0};
            for (int k = d; k >= 0; --k) num = num * r[i] + c[k];
            std::complex<double> den = c[d];
            for (int jj = 0; jj < d; ++jj)
                if (jj != i) den *= (r[i] - r[jj]);
            if (std::abs(den) == 0.0) continue;
            const std::complex<double> delta = num / den;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14 * radius) break;
    }
    return r;
}

} // namespace

std::shared_ptr<const Field> Field::create(const FieldDescriptor& desc) {
    if (desc.min_poly.size() < 2)
        throw ValidationError("min_poly must have degree >= 1");
    if (desc.min_poly.back() != 1)
        throw ValidationError("min_poly must be monic (leading coefficient 1)");
    if (!(desc.embed_precision > 0))
        throw ValidationError("embed_precision must be positive");

    auto f = std::shared_ptr<Field>(new Field());
    f->desc_ = desc;
    f->degree_ = static_cast<int>(desc.min_poly.size()) - 1;
    f->min_poly_.reserve(desc.min_poly.size());
    for (long long c : desc.min_poly)
        f->min_poly_.emplace_back(static_cast<long>(c));

    // Newton refinement from the hint.
    std::complex<double> z = desc.root_hint;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        auto [v, dv] = horner(f->min_poly_, z);
        if (std::abs(v) <= 1e-15 * poly_scale(f->min_poly_, z)) {
            converged = true;
            break;
        }
        if (std::abs(dv) == 0.0) break;
        z -= v / dv;
    }
    if (!converged) {
        // All-roots search; take the root nearest the hint.
        auto roots = all_roots(f->min_poly_);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : roots) {
            const double dist = std::abs(r - desc.root_hint);
            if (dist < best) {
                best = dist;
                z = r;
            }
        }
        auto [v, dv] = horner(f->min_poly_, z);
        (void)dv;
        if (std::abs(v) > desc.embed_precision * poly_scale(f->min_poly_, z))
            throw RootRefinementFailed("root refinement did not converge near hint");
    }
    f->root_ = z;

    // Reduction rows: lambda^(d+k) in the power basis, k = 0..d-2.
    const int d = f->degree_;
    if (d >= 1) {
        std::vector<mpq_class> cur(d); // lambda^d = -(c_0 + ... + c_{d-1} x^{d-1})
        for (int i = 0; i < d; ++i) cur[i] = mpq_class(-f->min_poly_[i]);
        f->power_reduction_.push_back(cur);
        for (int k = 1; k <= d - 2; ++k) {
            std::vector<mpq_class> nxt(d, mpq_class(0));
            for (int i = 0; i + 1 < d; ++i) nxt[i + 1] += cur[i];
            const mpq_class top = cur[d - 1];
            if (top != 0)
                for (int i = 0; i < d; ++i) nxt[i] += top * mpq_class(-f->min_poly_[i]);
            for (auto& q : nxt) q.canonicalize();
            f->power_reduction_.push_back(nxt);
            cur = std::move(nxt);
        }
    }
    return f;
}

bool Field::same_field(const Field& other) const {
    return this == &other || min_poly_ == other.min_poly_;
}

FieldElement Field::element(std::vector<mpq_class> coeffs) const {
    const int d = degree_;
    std::vector<mpq_class> reduced(d, mpq_class(0));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0) continue;
        if (static_cast<int>(k) < d) {
            reduced[k] += coeffs[k];
        } else {
            const std::size_t row = k - static_cast<std::size_t>(d);
            if (row >= power_reduction_.size())
                throw ValidationError("coefficient vector too long to canonicalize");
            for (int i = 0; i < d; ++i) reduced[i] += coeffs[k] * power_reduction_[row][i];
        }
    }
    for (auto& q : reduced) q.canonicalize();
    FieldElement e;
    e.field_ = shared_from_this();
    e.coeffs_ = std::move(reduced);
    return e;
}

FieldElement Field::zero() const { return element({}); }

FieldElement Field::one() const { return element({mpq_class(1)}); }

FieldElement Field::from_rational(const mpq_class& q) const { return element({q}); }

bool FieldElement::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const mpq_class& c) { return c == 0; });
}

bool FieldElement::is_one() const {
    if (coeffs_.empty() || coeffs_[0] != 1) return false;
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(),
                       [](const mpq_class& c) { return c == 0; });
}

std::complex<double> FieldElement::embed() const {
    std::complex<double> v{0, 0};
    const std::complex<double> z = field_->root();
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        v = v * z + it->get_d();
    return v;
}

std::string FieldElement::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        if (!first) os << " + ";
        os << rational_to_string(coeffs_[k]);
        if (k >= 1) os << "·x";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
    if (!a.field() || !b.field() || !a.field()->same_field(*b.field()))
        throw ValidationError("field elements belong to different fields");
}
} // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    std::vector<mpq_class> c(a.coeffs());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs()[i];
    return a.field()->element(std::move(c));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    std::vector<mpq_class> c(a.coeffs());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs()[i];
    return a.field()->element(std::move(c));
}

FieldElement FieldElement::operator-() const {
    std::vector<mpq_class> c(coeffs_);
    for (auto& q : c) q = -q;
    return field_->element(std::move(c));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    const int d = a.field()->degree();
    std::vector<mpq_class> conv(2 * static_cast<std::size_t>(d) - 1, mpq_class(0));
    for (int i = 0; i < d; ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (int j = 0; j < d; ++j) {
            if (b.coeffs()[j] == 0) continue;
            conv[i + j] += a.coeffs()[i] * b.coeffs()[j];
        }
    }
    return a.field()->element(std::move(conv));
}

namespace {

int poly_degree(const std::vector<mpq_class>& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;
}

// In-place A -= Q*B division step; returns quotient.
std::vector<mpq_class> poly_divmod(std::vector<mpq_class>& a,
                                   const std::vector<mpq_class>& b) {
    const int db = poly_degree(b);
    std::vector<mpq_class> q(std::max(0, poly_degree(a) - db) + 1, mpq_class(0));
    while (true) {
        const int da = poly_degree(a);
        if (da < db || da < 0) break;
        mpq_class c = a[da] / b[db];
        c.canonicalize();
        q[da - db] = c;
        for (int i = 0; i <= db; ++i) {
            a[da - db + i] -= c * b[i];
            a[da - db + i].canonicalize();
        }
    }
    return q;
}

} // namespace

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DivisionByZero("division by zero field element");
    // Extended Euclid on (min_poly, this); track s with s*this = r mod min_poly.
    const int d = field_->degree();
    std::vector<mpq_class> r0(field_->min_poly().size());
    for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = mpq_class(field_->min_poly()[i]);
    std::vector<mpq_class> r1(coeffs_);
    std::vector<mpq_class> s0{mpq_class(0)}, s1{mpq_class(1)};
    while (poly_degree(r1) > 0) {
        std::vector<mpq_class> rem(r0);
        const std::vector<mpq_class> q = poly_divmod(rem, r1);
        // s2 = s0 - q*s1
        std::vector<mpq_class> prod(q.size() + s1.size(), mpq_class(0));
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (std::size_t j = 0; j < s1.size(); ++j) {
                if (s1[j] == 0) continue;
                prod[i + j] += q[i] * s1[j];
            }
        }
        std::vector<mpq_class> s2(std::max(s0.size(), prod.size()), mpq_class(0));
        for (std::size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
        for (std::size_t i = 0; i < prod.size(); ++i) s2[i] -= prod[i];
        for (auto& c : s2) c.canonicalize();
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (poly_degree(r1) != 0)
        throw NonInvertible("element is a zero divisor: min_poly is reducible");
    const mpq_class lead = r1[0];
    std::vector<mpq_class> inv(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        inv[i] = s1[i] / lead;
        inv[i].canonicalize();
    }
    (void)d;
    return field_->element(std::move(inv));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return a * b.inverse();
}

bool FieldElement::operator==(const FieldElement& other) const {
    if (!field_ || !other.field_ || !field_->same_field(*other.field_)) return false;
    return coeffs_ == other.coeffs_;
}

std::size_t FieldElement::hash() const {
    std::size_t h = 14695981039346656037ull;
    for (const auto& q : coeffs_) {
        h ^= hash_rational(q);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace gdifs
