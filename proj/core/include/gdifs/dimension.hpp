#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "gdifs/gifs.hpp"

namespace gdifs {

// Exact polynomial with rational coefficients, constant term first.
using Polynomial = std::vector<mpq_class>;

// Nonnegative substitution matrix. Entries are term multiplicities for built
// systems; rational entries are admitted for hand-encoded matrices.
struct IncidenceMatrix {
    std::vector<std::vector<mpq_class>> entries; // square, row-major

    int size() const { return static_cast<int>(entries.size()); }

    static IncidenceMatrix zero(int n);
};

// entry (k, l) = number of terms in equation k targeting attractor l.
IncidenceMatrix incidence_matrix(const GifsSystem& system);

// Exact characteristic polynomial det(xI - M), monic, via rational
// Hessenberg reduction and the Hessenberg determinant recurrence.
Polynomial char_poly(const IncidenceMatrix& m);

// Exact division p / d; returns nothing when the remainder is nonzero.
std::optional<Polynomial> poly_divide_exact(const Polynomial& p, const Polynomial& d);

// Perron root by power iteration on M + I (the shift handles periodic
// components); on stalled convergence falls back to root isolation on the
// exact characteristic polynomial. Throws NonConvergence if both fail.
double spectral_radius(const IncidenceMatrix& m);

// Best-effort factor search: strips rational roots and small monic quadratic
// factors, then returns the factor having a root within 1e-6 of `root`
// (nothing when no factor matches). The factor is monic, constant first.
std::optional<Polynomial> factor_containing(const Polynomial& p, double root);

// System of equations with a per-term contraction ratio (Mauldin–Williams
// input for maps of unequal ratios).
struct WeightedTerm {
    int map = 0;
    int target = 0;
    double ratio = 0.0;
};

struct WeightedGifs {
    std::vector<std::vector<WeightedTerm>> equations;

    int size() const { return static_cast<int>(equations.size()); }
};

// Equal-ratio path: log(spectral radius) / -log(ratio).
double hausdorff_dim(const GifsSystem& system);

// General path: the unique beta with Perron root of M(beta) = 1, where
// M(beta) entries are sums of ratio^beta; bisected to 1e-12.
double hausdorff_dim(const WeightedGifs& system);

} // namespace gdifs
