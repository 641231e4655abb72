#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "gdifs/rational.hpp"

namespace gdifs {

// Describes Q(lambda) = Q[x]/(p(x)) together with one designated complex root.
struct FieldDescriptor {
    std::vector<long long> min_poly;      // c_0..c_d, constant first, monic, integer
    std::complex<double> root_hint{0, 0}; // approximation of the designated root
    double embed_precision = 1e-12;
};

class FieldElement;

// Immutable number field. Elements hold a shared_ptr back to their field so
// arithmetic can check compatibility and reach the reduction tables.
class Field : public std::enable_shared_from_this<Field> {
public:
    // Validates the descriptor and refines the root (Newton from the hint,
    // falling back to an all-roots search picking the root nearest the hint).
    static std::shared_ptr<const Field> create(const FieldDescriptor& desc);

    int degree() const { return degree_; }
    const std::vector<mpz_class>& min_poly() const { return min_poly_; }
    std::complex<double> root() const { return root_; }
    const FieldDescriptor& descriptor() const { return desc_; }

    // Element factories. element() canonicalizes: pads/reduces the coefficient
    // vector mod min_poly and normalizes every rational.
    FieldElement element(std::vector<mpq_class> coeffs) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_rational(const mpq_class& q) const;

    bool same_field(const Field& other) const;

private:
    Field() = default;

    FieldDescriptor desc_;
    std::vector<mpz_class> min_poly_;
    int degree_ = 0;
    std::complex<double> root_{0, 0};
    // Row k holds the coefficients of lambda^(degree_+k) in the power basis,
    // for k = 0..degree_-2; used to reduce products.
    std::vector<std::vector<mpq_class>> power_reduction_;

    friend class FieldElement;
    friend FieldElement operator*(const FieldElement&, const FieldElement&);
};

// One element of a fixed field, stored as the unique reduced residue in the
// power basis 1, lambda, ..., lambda^(d-1); structural equality is field
// equality.
class FieldElement {
public:
    FieldElement() = default;

    const std::vector<mpq_class>& coeffs() const { return coeffs_; }
    const std::shared_ptr<const Field>& field() const { return field_; }

    bool is_zero() const;
    bool is_one() const;

    // Numeric image under the designated embedding.
    std::complex<double> embed() const;

    std::string to_string() const; // diagnostic form, e.g. "1/2 + 3/4·x^3"

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
    FieldElement operator-() const;

    // b^(-1) via the extended Euclidean algorithm mod min_poly.
    FieldElement inverse() const;

    bool operator==(const FieldElement& other) const;
    bool operator!=(const FieldElement& other) const { return !(*this == other); }

    std::size_t hash() const;

private:
    friend class Field;
    std::shared_ptr<const Field> field_;
    std::vector<mpq_class> coeffs_;
};

} // namespace gdifs
