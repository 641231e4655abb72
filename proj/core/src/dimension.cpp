#include "gdifs/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "gdifs/errors.hpp"

namespace gdifs {

namespace {

int poly_degree(const Polynomial& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;
}

void poly_trim(Polynomial& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

void poly_add_scaled(Polynomial& into, const Polynomial& p, const mpq_class& c) {
    if (into.size() < p.size()) into.resize(p.size(), mpq_class(0));
    for (std::size_t i = 0; i < p.size(); ++i) into[i] += c * p[i];
}

// Perron root of a nonnegative double matrix by power iteration on M + I.
// Returns nothing when the iteration stalls (pathological reducibility).
std::optional<double> perron_power(const std::vector<std::vector<double>>& m,
                                   int max_iterations = 50000) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 0.0;
    std::vector<double> x(n, 1.0), y(n);
    double estimate = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iterations; ++it) {
        double norm = 0.0;
        for (int a = 0; a < n; ++a) {
            double acc = x[a];
            for (int b = 0; b < n; ++b) acc += m[a][b] * x[b];
            y[a] = acc;
            norm = std::max(norm, std::abs(acc));
        }
        if (norm == 0.0) return 0.0;
        for (int a = 0; a < n; ++a) y[a] /= norm;
        x.swap(y);
        const double next = norm - 1.0;
        if (std::abs(next - estimate) <= 1e-13 * std::max(1.0, next)) {
            if (++stable >= 5) return next;
        } else {
            stable = 0;
        }
        estimate = next;
    }
    return std::nullopt;
}

// All roots of a double-coefficient polynomial by Durand-Kerner iteration.
std::vector<std::complex<double>> all_roots(std::vector<double> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const int d = static_cast<int>(coeffs.size()) - 1;
    std::vector<std::complex<double>> roots;
    if (d < 1) return roots;
    for (auto& c : coeffs) c /= coeffs[d];
    double radius = 0.0;
    for (int i = 0; i < d; ++i) radius = std::max(radius, std::abs(coeffs[i]));
    radius = 1.0 + radius;
    roots.resize(d);
    for (int i = 0; i < d; ++i)
        roots[i] = std::polar(radius, (2.0 * M_PI * i + 0.5) / d);
    for (int it = 0; it < 2000; ++it) {
        double shift = 0.0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> value(coeffs[d], 0.0);
            for (int k = d - 1; k >= 0; --k) value = value * roots[i] + coeffs[k];
            std::complex<double> denom(1.0, 0.0);
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (denom == std::complex<double>(0.0, 0.0)) {
                roots[i] += 1e-8;
                shift = 1.0;
                continue;
            }
            const std::complex<double> delta = value / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-14 * radius) break;
    }
    return roots;
}

std::vector<double> to_double(const Polynomial& p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].get_d();
    return out;
}

mpq_class eval_rational(const Polynomial& p, const mpq_class& x) {
    mpq_class acc(0);
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) acc = acc * x + p[i];
    return acc;
}

// Divides p by (x - root) exactly; p(root) must be zero.
Polynomial deflate_linear(const Polynomial& p, const mpq_class& root) {
    const int d = poly_degree(p);
    Polynomial q(d, mpq_class(0));
    mpq_class carry = p[d];
    for (int i = d - 1; i >= 0; --i) {
        q[i] = carry;
        carry = p[i] + carry * root;
    }
    return q;
}

std::vector<mpz_class> divisors_of(const mpz_class& value) {
    std::vector<mpz_class> out;
    mpz_class v = abs(value);
    if (v == 0) return out;
    for (mpz_class d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            if (d * d != v) out.push_back(v / d);
        }
        if (out.size() > 4096) break; // enough candidates for report purposes
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

IncidenceMatrix IncidenceMatrix::zero(int n) {
    IncidenceMatrix m;
    m.entries.assign(n, std::vector<mpq_class>(n, mpq_class(0)));
    return m;
}

IncidenceMatrix incidence_matrix(const GifsSystem& system) {
    const int n = system.size();
    IncidenceMatrix m = IncidenceMatrix::zero(n);
    for (int k = 0; k < n; ++k)
        for (const Term& t : system.equations[k]) {
            if (t.target < 1 || t.target > n)
                throw ValidationError("incidence_matrix: target out of range");
            m.entries[k][t.target - 1] += 1;
        }
    return m;
}

Polynomial char_poly(const IncidenceMatrix& m) {
    const int n = m.size();
    for (const auto& row : m.entries)
        if (static_cast<int>(row.size()) != n)
            throw ValidationError("char_poly: matrix is not square");
    if (n == 0) return {mpq_class(1)};

    // Similarity reduction to upper Hessenberg form, first-nonzero pivoting.
    auto h = m.entries;
    for (int col = 0; col + 2 < n; ++col) {
        int pivot = -1;
        for (int r = col + 1; r < n; ++r)
            if (h[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot == -1) continue;
        if (pivot != col + 1) {
            std::swap(h[pivot], h[col + 1]);
            for (int r = 0; r < n; ++r) std::swap(h[r][pivot], h[r][col + 1]);
        }
        for (int r = col + 2; r < n; ++r) {
            if (h[r][col] == 0) continue;
            const mpq_class factor = h[r][col] / h[col + 1][col];
            for (int c = 0; c < n; ++c) h[r][c] -= factor * h[col + 1][c];
            for (int rr = 0; rr < n; ++rr) h[rr][col + 1] += factor * h[rr][r];
        }
    }

    // det(xI - H) for upper Hessenberg H by expansion along the last column:
    // p_k = (x - H[k-1][k-1]) p_{k-1}
    //       - sum_i H[i][k-1] * (prod_{j=i..k-2} H[j+1][j]) * p_i.
    std::vector<Polynomial> p(n + 1);
    p[0] = {mpq_class(1)};
    for (int k = 1; k <= n; ++k) {
        Polynomial next(p[k - 1].size() + 1, mpq_class(0));
        for (std::size_t i = 0; i < p[k - 1].size(); ++i) {
            next[i + 1] += p[k - 1][i];
            next[i] -= h[k - 1][k - 1] * p[k - 1][i];
        }
        mpq_class subdiag(1);
        for (int i = k - 2; i >= 0; --i) {
            subdiag *= h[i + 1][i];
            if (subdiag == 0) break;
            if (h[i][k - 1] != 0)
                poly_add_scaled(next, p[i], -h[i][k - 1] * subdiag);
        }
        next.resize(static_cast<std::size_t>(k) + 1, mpq_class(0));
        p[k] = std::move(next);
    }
    for (auto& c : p[n]) c.canonicalize();
    return p[n];
}

std::optional<Polynomial> poly_divide_exact(const Polynomial& p, const Polynomial& d) {
    const int dp = poly_degree(p);
    const int dd = poly_degree(d);
    if (dd < 0) throw DivisionByZero("poly_divide_exact: zero divisor");
    if (dp < dd) return std::nullopt;
    Polynomial rem = p;
    Polynomial quot(dp - dd + 1, mpq_class(0));
    for (int k = dp - dd; k >= 0; --k) {
        const mpq_class c = rem[k + dd] / d[dd];
        quot[k] = c;
        if (c == 0) continue;
        for (int i = 0; i <= dd; ++i) rem[k + i] -= c * d[i];
    }
    if (poly_degree(rem) >= 0) return std::nullopt;
    poly_trim(quot);
    return quot;
}

double spectral_radius(const IncidenceMatrix& m) {
    const int n = m.size();
    if (n == 0) return 0.0;
    std::vector<std::vector<double>> md(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (m.entries[i][j] < 0)
                throw ValidationError("spectral_radius: negative entry");
            md[i][j] = m.entries[i][j].get_d();
        }
    if (auto rho = perron_power(md)) return *rho;

    // Stalled power iteration: isolate roots of the exact polynomial instead.
    const Polynomial cp = char_poly(m);
    const auto roots = all_roots(to_double(cp));
    if (roots.empty())
        throw NonConvergence("spectral_radius: power iteration stalled and the "
                             "characteristic polynomial has no roots");
    double rho = 0.0;
    for (const auto& r : roots) rho = std::max(rho, std::abs(r));
    return rho;
}

std::optional<Polynomial> factor_containing(const Polynomial& p, double root) {
    const int d = poly_degree(p);
    if (d < 1) return std::nullopt;
    Polynomial rest(p.begin(), p.begin() + d + 1);

    std::vector<Polynomial> factors;
    // Rational roots: candidates num/den with num | constant, den | leading,
    // over the integer-scaled polynomial.
    for (;;) {
        const int deg = poly_degree(rest);
        if (deg < 1) break;
        if (rest[0] == 0) {
            factors.push_back({mpq_class(0), mpq_class(1)}); // factor x
            rest.erase(rest.begin());
            continue;
        }
        mpz_class scale(1);
        for (int i = 0; i <= deg; ++i)
            scale = lcm(scale, mpz_class(rest[i].get_den()));
        mpz_class c0 = mpz_class(rest[0].get_num()) *
                       (scale / mpz_class(rest[0].get_den()));
        mpz_class cd = mpz_class(rest[deg].get_num()) *
                       (scale / mpz_class(rest[deg].get_den()));
        bool found = false;
        for (const mpz_class& num : divisors_of(c0)) {
            for (const mpz_class& den : divisors_of(cd)) {
                for (int sign = 1; sign >= -1; sign -= 2) {
                    mpz_class snum = sign < 0 ? mpz_class(-num) : num;
                    mpq_class cand(snum, den);
                    cand.canonicalize();
                    if (eval_rational(rest, cand) == 0) {
                        factors.push_back({-cand, mpq_class(1)});
                        rest = deflate_linear(rest, cand);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }

    // Small monic quadratic factors of a monic integer remainder.
    if (poly_degree(rest) > 2 && rest[poly_degree(rest)] == 1) {
        bool all_integer = true;
        for (const auto& c : rest)
            if (mpz_class(c.get_den()) != 1) all_integer = false;
        if (all_integer) {
            bool progress = true;
            while (progress && poly_degree(rest) > 2) {
                progress = false;
                for (long b = -20; b <= 20 && !progress; ++b) {
                    for (long c = -20; c <= 20 && !progress; ++c) {
                        if (c == 0) continue;
                        const Polynomial quad{mpq_class(c), mpq_class(b), mpq_class(1)};
                        if (auto q = poly_divide_exact(rest, quad)) {
                            factors.push_back(quad);
                            rest = std::move(*q);
                            progress = true;
                        }
                    }
                }
            }
        }
    }
    if (poly_degree(rest) >= 1) factors.push_back(rest);

    for (const auto& f : factors) {
        for (const auto& z : all_roots(to_double(f)))
            if (std::abs(z - std::complex<double>(root, 0.0)) <= 1e-6)
                return f;
    }
    return std::nullopt;
}

double hausdorff_dim(const GifsSystem& system) {
    if (!(system.ratio > 0.0 && system.ratio < 1.0))
        throw ValidationError(
            "hausdorff_dim: the system has no contraction ratio in (0,1)");
    const double sigma = spectral_radius(incidence_matrix(system));
    if (sigma <= 0.0) return 0.0;
    return std::log(sigma) / -std::log(system.ratio);
}

double hausdorff_dim(const WeightedGifs& system) {
    const int n = system.size();
    if (n == 0) throw ValidationError("hausdorff_dim: empty weighted system");
    double max_ratio = 0.0;
    std::size_t max_terms = 1;
    for (const auto& eq : system.equations) {
        max_terms = std::max(max_terms, eq.size());
        for (const WeightedTerm& t : eq) {
            if (!(t.ratio > 0.0 && t.ratio < 1.0))
                throw ValidationError("hausdorff_dim: term ratio outside (0,1)");
            if (t.target < 1 || t.target > n)
                throw ValidationError("hausdorff_dim: target out of range");
            max_ratio = std::max(max_ratio, t.ratio);
        }
    }

    auto rho_at = [&](double beta) {
        std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
        for (int k = 0; k < n; ++k)
            for (const WeightedTerm& t : system.equations[k])
                m[k][t.target - 1] += std::pow(t.ratio, beta);
        if (auto rho = perron_power(m)) return *rho;
        throw NonConvergence("hausdorff_dim: Perron iteration stalled during "
                             "the dimension bisection");
    };

    // Upper bound: twice the similarity dimension of the richest row.
    double hi = 2.0 * std::log(static_cast<double>(max_terms)) /
                    -std::log(max_ratio) +
                1.0;
    double lo = 0.0;
    if (rho_at(lo) < 1.0) return 0.0;
    int doublings = 0;
    while (rho_at(hi) >= 1.0) {
        hi *= 2.0;
        if (++doublings > 60)
            throw NonConvergence(
                "hausdorff_dim: no dimension bound with Perron root below 1");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rho_at(mid) >= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace gdifs
