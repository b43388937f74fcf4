#include "sigmanet/enumeration.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <set>

using namespace sigmanet;

namespace {

/// Independent oracle: iterate q_{k+1} = 1 / (2 floor(q_k) - q_k + 1).
std::vector<Rational> cw_by_recurrence(int count) {
    std::vector<Rational> out;
    out.reserve(count + 1);
    out.emplace_back(0);  // unused slot so out[n] = q_n
    Rational q(1);
    out.push_back(q);
    for (int k = 1; k < count; ++k) {
        BigInt fl;
        mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        q = 1 / (2 * Rational(fl) - q + 1);
        out.push_back(q);
    }
    return out;
}

MonicPoly poly_of(std::vector<Rational> coeffs) {
    MonicPoly p;
    p.coeffs = std::move(coeffs);
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("enumeration");

TEST_CASE("calkin_wilf matches the recurrence oracle and has no duplicates") {
    const auto oracle = cw_by_recurrence(10000);
    std::set<std::pair<std::string, std::string>> seen;
    for (int n = 1; n <= 10000; ++n) {
        const Rational q = calkin_wilf(n);
        CHECK(q == oracle[n]);
        CHECK(q > 0);
        CHECK(seen.insert({q.get_num().get_str(), q.get_den().get_str()}).second);
    }
}

TEST_CASE("calkin_wilf small values") {
    CHECK(calkin_wilf(1) == Rational(1));
    CHECK(calkin_wilf(2) == Rational(1, 2));
    CHECK(calkin_wilf(3) == Rational(2));
    CHECK(calkin_wilf(6) == Rational(2, 3));
    CHECK_THROWS_AS(calkin_wilf(0), std::domain_error);
}

TEST_CASE("calkin_wilf_index inverts calkin_wilf") {
    CHECK(calkin_wilf_index(Rational(1)) == 1);
    CHECK(calkin_wilf_index(Rational(2, 3)) == 6);
    CHECK(calkin_wilf(calkin_wilf_index(Rational(355, 113))) == Rational(355, 113));
    for (int n = 1; n <= 3000; ++n)
        CHECK(calkin_wilf_index(calkin_wilf(n)) == n);
    CHECK_THROWS_AS(calkin_wilf_index(Rational(0)), std::domain_error);
    CHECK_THROWS_AS(calkin_wilf_index(Rational(-2, 5)), std::domain_error);
}

TEST_CASE("rational_enum basics and injectivity") {
    CHECK(rational_enum(0) == Rational(0));
    CHECK(rational_enum(2) == Rational(1));
    CHECK(rational_enum(1) == Rational(-1));
    CHECK(rational_enum(4) == Rational(1, 2));
    CHECK(rational_enum(3) == Rational(-1, 2));
    std::set<std::pair<std::string, std::string>> seen;
    int zeros = 0;
    for (int k = 0; k <= 10000; ++k) {
        const Rational r = rational_enum(k);
        if (r == 0)
            ++zeros;
        CHECK(seen.insert({r.get_num().get_str(), r.get_den().get_str()}).second);
        CHECK(rational_enum_index(r) == k);
    }
    CHECK(zeros == 1);
}

TEST_CASE("cf_canonical basics") {
    auto cf = cf_canonical(Rational(1, 2));
    CHECK(cf.terms == std::vector<BigInt>{0, 2});
    cf = cf_canonical(Rational(3, 2));
    CHECK(cf.terms == std::vector<BigInt>{1, 2});
    cf = cf_canonical(Rational(2, 3));
    CHECK(cf.terms == std::vector<BigInt>{0, 1, 2});
    cf = cf_canonical(Rational(1));
    CHECK(cf.terms == std::vector<BigInt>{1});
    CHECK_THROWS_AS(cf_canonical(Rational(-1)), std::domain_error);
}

TEST_CASE("cf_canonical round-trips all canonical forms up to 6 terms of size 10") {
    // exhaustive: first term 0..10, middle terms 1..10, last term 2..10
    std::vector<std::vector<BigInt>> stack;
    long checked = 0;
    for (int len = 1; len <= 6; ++len) {
        std::vector<int> idx(len, 0);
        const auto limits = [&](int pos) -> std::pair<int, int> {
            if (pos == 0)
                return {len == 1 ? 1 : 0, 10};
            if (pos == len - 1)
                return {2, 10};
            return {1, 10};
        };
        std::vector<int> cur(len);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == len) {
                ContinuedFraction cf;
                for (int v : cur)
                    cf.terms.emplace_back(v);
                const Rational val = cf_value(cf);
                const ContinuedFraction back = cf_canonical(val);
                REQUIRE(back.terms == cf.terms);
                ++checked;
                return;
            }
            auto [lo, hi] = limits(pos);
            for (int v = lo; v <= hi; ++v) {
                cur[pos] = v;
                rec(pos + 1);
            }
        };
        rec(0);
    }
    CHECK(checked > 100000);
}

TEST_CASE("index_to_poly reproduces the first eight polynomials") {
    CHECK(index_to_poly(1) == poly_of({}));                                  // 1
    CHECK(index_to_poly(2) == poly_of({Rational(0), Rational(0)}));          // x^2
    CHECK(index_to_poly(3) == poly_of({Rational(0)}));                       // x
    CHECK(index_to_poly(4) == poly_of({Rational(0), Rational(-1)}));         // x^2 - x
    CHECK(index_to_poly(5) == poly_of({Rational(-1), Rational(0)}));         // x^2 - 1
    CHECK(index_to_poly(6) == poly_of({Rational(0), Rational(0), Rational(0)}));  // x^3
    CHECK(index_to_poly(7) == poly_of({Rational(-1)}));                      // x - 1
    CHECK(index_to_poly(8) == poly_of({Rational(0), Rational(1)}));          // x^2 + x
}

TEST_CASE("poly_to_index on the published examples") {
    CHECK(poly_to_index(poly_of({Rational(0)})) == 3);                 // x
    CHECK(poly_to_index(poly_of({Rational(-1), Rational(0)})) == 5);   // x^2 - 1
}

TEST_CASE("index <-> poly round-trip for n <= 10^4") {
    for (int n = 1; n <= 10000; ++n)
        CHECK(poly_to_index(index_to_poly(n)) == n);
}

TEST_CASE("index <-> poly round-trip for random 256-bit indices") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 64; ++trial) {
        BigInt n = 1;
        for (int w = 0; w < 4; ++w) {
            n <<= 64;
            n |= BigInt(static_cast<unsigned long>(rng()));
        }
        CHECK(poly_to_index(index_to_poly(n)) == n);
    }
}

TEST_CASE("poly_to_index guards absurd indices") {
    // x + 10^9: the index of the constant coefficient alone needs ~2*10^9
    // right-steps, i.e. an index of about 2^(2e9)
    MonicPoly p = poly_of({Rational(1000000000)});
    CHECK_THROWS_AS(poly_to_index(p, 1u << 20), std::overflow_error);
}

TEST_CASE("polynomial JSON round-trip and text form") {
    MonicPoly p = poly_of({Rational(0), Rational(-3, 2)});
    const std::string js = poly_to_json(p);
    CHECK(js == R"(["0/1","-3/2"])");
    CHECK(poly_from_json(js) == p);
    CHECK(p.to_string() == "x^2 - 3/2x");
    CHECK(index_to_poly(1).to_string() == "1");
    CHECK(index_to_poly(7).to_string() == "x - 1");
}

TEST_SUITE_END();
