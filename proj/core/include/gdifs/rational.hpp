#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "gdifs/errors.hpp"

namespace gdifs {

// Exact rationals are GMP's mpq_class throughout; these helpers pin the
// canonical-form and serialization conventions (positive denominator,
// lowest terms, "p" or "p/q" text form).

// Parse "p", "-p", or "p/q" into a canonical rational.
inline mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw ValidationError("not a rational number: '" + text + "'");
    if (q.get_den() == 0)
        throw ValidationError("zero denominator in rational: '" + text + "'");
    q.canonicalize();
    return q;
}

// "p" when the denominator is 1, else "p/q". Canonicalizes first so callers
// may pass rationals assembled from raw numerator/denominator pairs.
inline std::string rational_to_string(const mpq_class& q) {
    mpq_class canonical = q;
    canonical.canonicalize();
    return canonical.get_str();
}

inline std::size_t hash_rational(const mpq_class& q) {
    // Cheap but stable: fold the limb words of numerator and denominator.
    std::size_t h = 1469598103934665603ull;
    auto fold = [&h](const mpz_class& z) {
        h ^= static_cast<std::size_t>(mpz_sgn(z.get_mpz_t())) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
        const std::size_t n = mpz_size(z.get_mpz_t());
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i)));
            h *= 1099511628211ull;
        }
    };
    fold(q.get_num());
    fold(q.get_den());
    return h;
}

} // namespace gdifs
