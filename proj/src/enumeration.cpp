#include "sigmanet/enumeration.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace sigmanet {

namespace {

/// Binary run lengths of n, least-significant run first, with the bit value
/// of the first (LSB) run. n >= 1.
struct Runs {
    bool lsb_is_one;
    std::vector<unsigned long> lengths;
};

Runs bit_runs(const BigInt& n) {
    Runs r;
    const mpz_srcptr z = n.get_mpz_t();
    const unsigned long total = mpz_sizeinbase(z, 2);
    r.lsb_is_one = mpz_tstbit(z, 0) != 0;
    unsigned long pos = 0;
    bool bit = r.lsb_is_one;
    while (pos < total) {
        unsigned long next = bit ? mpz_scan0(z, pos) : mpz_scan1(z, pos);
        if (next >= total)
            next = total;
        r.lengths.push_back(next - pos);
        pos = next;
        bit = !bit;
    }
    return r;
}

/// n from run lengths given most-significant run first; the MSB run is ones.
BigInt runs_to_int(const std::vector<BigInt>& msb_first) {
    BigInt n = 0;
    bool bit = true;
    for (const BigInt& len : msb_first) {
        const unsigned long l = len.get_ui();
        n <<= l;
        if (bit) {
            BigInt ones = (BigInt(1) << l) - 1;
            n |= ones;
        }
        bit = !bit;
    }
    return n;
}

/// Continued fraction terms of q_n (canonical form).
std::vector<BigInt> cf_of_index(const BigInt& n) {
    Runs r = bit_runs(n);
    std::vector<BigInt> terms;
    if (!r.lsb_is_one)
        terms.emplace_back(0);
    for (unsigned long l : r.lengths)
        terms.emplace_back(l);
    // the runs form may end in ...,1; fold to canonical
    if (terms.size() > 1 && terms.back() == 1) {
        terms.pop_back();
        terms.back() += 1;
    }
    return terms;
}

/// Index from canonical continued fraction terms (inverse of cf_of_index).
/// Chooses the representation parity so the most significant run is ones.
/// The result has exactly sum(cf) bits; refuse to build anything absurd.
BigInt index_of_cf(std::vector<BigInt> cf) {
    BigInt bits = 0;
    for (const BigInt& t : cf)
        bits += t;
    if (bits > (1l << 33))
        throw std::overflow_error("Calkin-Wilf index would need about " +
                                  bits.get_str() + " bits");
    std::vector<BigInt> body;
    if (cf[0] == 0)
        body.assign(cf.begin() + 1, cf.end());
    else
        body = cf;
    const bool want_odd = (cf[0] != 0);
    const bool is_odd = body.size() % 2 == 1;
    if (want_odd != is_odd) {
        // switch to the other representation [..., m] <-> [..., m-1, 1]
        body.back() -= 1;
        body.emplace_back(1);
    }
    // body holds run lengths from the LSB; reverse for construction
    std::vector<BigInt> msb_first(body.rbegin(), body.rend());
    return runs_to_int(msb_first);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational: " + text);
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational MonicPoly::eval(const Rational& x) const {
    Rational acc = 1;  // implicit leading coefficient
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

std::string MonicPoly::to_string() const {
    if (coeffs.empty())
        return "1";
    std::ostringstream out;
    auto term = [&](const Rational& c, int pow, bool leading) {
        if (c == 0 && !leading)
            return;
        Rational a = leading ? Rational(1) : c;
        const bool neg = a < 0;
        if (out.tellp() == std::streampos(0))
            out << (neg ? "-" : "");
        else
            out << (neg ? " - " : " + ");
        Rational mag = abs(a);
        const bool unit = (mag == 1);
        if (!unit || pow == 0) {
            if (mag.get_den() == 1)
                out << mag.get_num().get_str();
            else
                out << mag.get_num().get_str() << "/" << mag.get_den().get_str();
        }
        if (pow >= 1) {
            out << "x";
            if (pow >= 2)
                out << "^" << pow;
        }
    };
    term(Rational(1), degree(), true);
    for (int i = degree() - 1; i >= 0; --i)
        term(coeffs[i], i, false);
    return out.str();
}

Rational calkin_wilf(const BigInt& n) {
    if (n < 1)
        throw std::domain_error("calkin_wilf: index must be >= 1");
    ContinuedFraction cf;
    cf.terms = cf_of_index(n);
    return cf_value(cf);
}

BigInt calkin_wilf_index(const Rational& q) {
    if (q <= 0)
        throw std::domain_error("calkin_wilf_index: argument must be positive");
    return index_of_cf(cf_canonical(q).terms);
}

Rational rational_enum(const BigInt& k) {
    if (k < 0)
        throw std::domain_error("rational_enum: index must be >= 0");
    if (k == 0)
        return Rational(0);
    if (k % 2 == 0)
        return calkin_wilf(k / 2);
    return -calkin_wilf((k + 1) / 2);
}

BigInt rational_enum_index(const Rational& r) {
    if (r == 0)
        return 0;
    if (r > 0)
        return 2 * calkin_wilf_index(r);
    return 2 * calkin_wilf_index(-r) - 1;
}

ContinuedFraction cf_canonical(const Rational& q) {
    if (q <= 0)
        throw std::domain_error("cf_canonical: argument must be positive");
    ContinuedFraction cf;
    BigInt num = q.get_num(), den = q.get_den();
    while (den != 0) {
        BigInt quot, rem;
        mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        cf.terms.push_back(quot);
        num = den;
        den = rem;
    }
    if (cf.terms.size() > 1 && cf.terms.back() == 1) {
        cf.terms.pop_back();
        cf.terms.back() += 1;
    }
    return cf;
}

Rational cf_value(const ContinuedFraction& cf) {
    if (cf.terms.empty())
        throw std::domain_error("cf_value: empty continued fraction");
    Rational q(cf.terms.back());
    for (auto it = cf.terms.rbegin() + 1; it != cf.terms.rend(); ++it)
        q = Rational(*it) + 1 / q;
    return q;
}

MonicPoly index_to_poly(const BigInt& n) {
    if (n < 1)
        throw std::domain_error("index_to_poly: index must be >= 1");
    MonicPoly p;
    if (n == 1)
        return p;  // u_1 = 1
    const std::vector<BigInt> cf = cf_of_index(n);
    const size_t l = cf.size();
    if (l == 1) {
        // integer q >= 2: u = r_{q-2} + x
        p.coeffs.push_back(rational_enum(cf[0] - 2));
    } else if (l == 2) {
        p.coeffs.push_back(rational_enum(cf[0]));
        p.coeffs.push_back(rational_enum(cf[1] - 2));
    } else {
        p.coeffs.push_back(rational_enum(cf[0]));
        for (size_t i = 1; i + 1 < l; ++i)
            p.coeffs.push_back(rational_enum(cf[i] - 1));
        p.coeffs.push_back(rational_enum(cf[l - 1] - 2));
    }
    return p;
}

BigInt poly_index_bits(const MonicPoly& p) {
    if (p.degree() == 0)
        return 1;
    BigInt total = 0;
    for (const Rational& c : p.coeffs)
        total += rational_enum_index(c);
    // +1 per middle term, +2 for the last, and the leading-zero term adds 0
    total += p.degree() == 1 ? 2 : BigInt(p.degree());
    return total;
}

BigInt poly_to_index(const MonicPoly& p, unsigned long max_bits) {
    const size_t l = p.coeffs.size();
    if (l == 0)
        return 1;
    const BigInt predicted = poly_index_bits(p);
    if (predicted > max_bits)
        throw std::overflow_error("poly_to_index: index would need about " +
                                  predicted.get_str() + " bits (limit " +
                                  std::to_string(max_bits) + ")");
    std::vector<BigInt> ks;
    ks.reserve(l);
    for (const Rational& c : p.coeffs)
        ks.push_back(rational_enum_index(c));
    std::vector<BigInt> cf;
    if (l == 1) {
        cf.push_back(ks[0] + 2);
    } else if (l == 2) {
        cf.push_back(ks[0]);
        cf.push_back(ks[1] + 2);
    } else {
        cf.push_back(ks[0]);
        for (size_t i = 1; i + 1 < l; ++i)
            cf.push_back(ks[i] + 1);
        cf.push_back(ks[l - 1] + 2);
    }
    return index_of_cf(std::move(cf));
}

std::string poly_to_json(const MonicPoly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Rational& c : p.coeffs)
        arr.push_back(format_rational(c));
    return arr.dump();
}

MonicPoly poly_from_json(const std::string& json_text) {
    const nlohmann::json arr = nlohmann::json::parse(json_text);
    if (!arr.is_array())
        throw std::invalid_argument("polynomial JSON must be an array");
    MonicPoly p;
    for (const auto& el : arr)
        p.coeffs.push_back(parse_rational(el.get<std::string>()));
    return p;
}

}  // namespace sigmanet
