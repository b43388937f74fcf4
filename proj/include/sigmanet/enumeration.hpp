#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace sigmanet {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parse "num/den" (or plain integer) into a canonical rational.
Rational parse_rational(const std::string& text);

/// Format as "num/den" with den > 0 and gcd(num, den) = 1.
std::string format_rational(const Rational& q);

/// Canonical continued fraction [m0; m1, ..., ml] of a positive rational:
/// m0 >= 0, middle terms >= 1, and ml >= 2 unless the expansion is the
/// single term [m0] (positive integers, including 1 -> [1]).
struct ContinuedFraction {
    std::vector<BigInt> terms;
};

/// Monic polynomial with rational coefficients, ascending degree order,
/// leading coefficient 1 implicit. Empty coefficient list = the constant 1.
struct MonicPoly {
    std::vector<Rational> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()); }
    bool operator==(const MonicPoly& o) const { return coeffs == o.coeffs; }

    /// Evaluate at a rational point, exactly.
    Rational eval(const Rational& x) const;
    /// Human-readable form like "x^2 - x".
    std::string to_string() const;
};

/// q_n of the Calkin-Wilf sequence, by the binary-run characterization of
/// the tree path (O(bit length) arithmetic steps, never by iterating).
/// n >= 1; throws std::domain_error otherwise.
Rational calkin_wilf(const BigInt& n);

/// Inverse of calkin_wilf. q must be positive.
BigInt calkin_wilf_index(const Rational& q);

/// r_k: r_0 = 0, r_{2n} = q_n, r_{2n-1} = -q_n.
Rational rational_enum(const BigInt& k);

/// Inverse of rational_enum (total on all rationals).
BigInt rational_enum_index(const Rational& r);

/// Canonical continued fraction of a positive rational.
ContinuedFraction cf_canonical(const Rational& q);

/// Value of a continued fraction (terms nonempty, tail terms positive).
Rational cf_value(const ContinuedFraction& cf);

/// u_n: the n-th monic polynomial of the enumeration.
MonicPoly index_to_poly(const BigInt& n);

/// Inverse of index_to_poly. The result can be astronomically large: its
/// bit length equals the sum of the coefficient indices. max_bits guards
/// against materializing something that cannot fit in memory; exceeding it
/// throws std::overflow_error with the predicted size in the message.
BigInt poly_to_index(const MonicPoly& p, unsigned long max_bits = (1ul << 33));

/// Predicted bit length of poly_to_index(p) without materializing it.
BigInt poly_index_bits(const MonicPoly& p);

/// JSON serialization per the interchange format: array of "num/den"
/// strings in ascending degree order, leading 1 implicit.
std::string poly_to_json(const MonicPoly& p);
MonicPoly poly_from_json(const std::string& json_text);

}  // namespace sigmanet
