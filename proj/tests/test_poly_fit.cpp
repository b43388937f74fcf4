#include "sigmanet/poly_fit.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigmanet;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Sigma table_sigma() { return Sigma({3.0, 0.5, 53}); }

double grid_sup(const UnivariateFn& g, const SigmaTerm& term, const Sigma& sigma,
                const FitOptions& opts = {}) {
    double sup = 0.0;
    for (double x : verification_grid(opts))
        sup = std::max(sup, std::abs(g(x) - sigma_term_eval(term, sigma, x)));
    return sup;
}

}  // namespace

TEST_SUITE_BEGIN("poly_fit");

TEST_CASE("identity is represented exactly") {
    Sigma sig = table_sigma();
    RationalizedFit fit = fit_polynomial([](double x) { return x; }, 1e-6);
    CHECK(fit.p0 == Rational(1));
    CHECK(fit.degree == 1);
    CHECK(fit.u.coeffs.size() == 1);
    CHECK(fit.u.coeffs[0] == Rational(0));
    CHECK(fit.sup_error < 1e-12);
    SigmaTerm term = sigma_rep(fit, sig);
    CHECK(term.n == 3);  // u = x sits at index 3
    CHECK(grid_sup([](double x) { return x; }, term, sig) < 1e-9);
}

TEST_CASE("zero function uses the p0 = 0 / u = 1 convention") {
    Sigma sig = table_sigma();
    RationalizedFit fit = fit_polynomial([](double) { return 0.0; }, 1e-4);
    CHECK(fit.p0 == 0);
    CHECK(fit.u.degree() == 0);
    SigmaTerm term = sigma_rep(fit, sig);
    CHECK(term.alpha == 0.0);
    CHECK(term.n == 1);
    CHECK(sigma_term_eval(term, sig, 0.37) == 0.0);
}

TEST_CASE("constants are exact") {
    Sigma sig = table_sigma();
    SigmaTerm term = represent_univariate([](double) { return 2.5; }, 1e-6, sig);
    CHECK(term.p0 == Rational(5, 2));
    CHECK(term.n == 1);
    CHECK(std::abs(sigma_term_eval(term, sig, 0.0) - 2.5) < 1e-12);
    CHECK(std::abs(sigma_term_eval(term, sig, 0.9) - 2.5) < 1e-12);
}

TEST_CASE("sin(pi x) at 1e-3 fits within degree 10") {
    auto g = [](double x) { return std::sin(kPi * x); };
    FitOptions opts;
    opts.max_degree = 10;
    // the index is only size-estimated here, never materialized; this test
    // is about the error contract
    opts.max_index_bits = 1'000'000'000'000ul;
    RationalizedFit fit = fit_polynomial(g, 1e-3, opts);
    CHECK(fit.degree <= 10);
    CHECK(fit.sup_error < 1e-3);
}

TEST_CASE("sin(pi x) at 1e-2 keeps the index compact and exceeds 64 bits") {
    Sigma sig = table_sigma();
    auto g = [](double x) { return std::sin(kPi * x); };
    SigmaTerm term = represent_univariate(g, 1e-2, sig);
    CHECK(grid_sup(g, term, sig) < 1e-2);
    const size_t bits = mpz_sizeinbase(term.n.get_mpz_t(), 2);
    CHECK(bits > 64);        // the big-index path is real
    CHECK(bits < 4'000'000); // and still materializable
}

TEST_CASE("abs-shift at 1e-2 fails explicitly with the best achieved error") {
    auto g = [](double x) { return std::abs(x - 0.5); };
    try {
        fit_polynomial(g, 1e-2);
        FAIL("expected FitError");
    } catch (const FitError& e) {
        CHECK(e.best_achieved > 1e-2);
        CHECK(e.best_achieved < 0.1);  // the scan did make progress
    }
}

TEST_CASE("representation identity: u(t) = (sigma_piece - a_n) / b_n") {
    Sigma sig = table_sigma();
    for (int n = 2; n <= 40; ++n) {
        const PieceData& pd = sig.piece(n);
        const MonicPoly u = index_to_poly(n);
        for (int i = 0; i <= 32; ++i) {
            const double t = i / 32.0;
            const double lhs = (sig.piece_exact(n, t) - static_cast<double>(pd.a)) /
                               static_cast<double>(pd.b);
            const double rhs = mpq_get_d(u.eval(Rational(i, 32)).get_mpq_t());
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("rationalization honours its error budget") {
    auto g = [](double x) { return std::sin(kPi * x); };
    RationalizedFit fit = fit_polynomial(g, 1e-2);
    CHECK(std::abs(fit.sup_error - fit.real_error) <= fit.rationalization_budget);
}

TEST_CASE("increasing max_degree never increases the returned error") {
    auto g = [](double x) { return std::sin(kPi * x); };
    double prev = std::numeric_limits<double>::infinity();
    for (int maxdeg : {4, 6, 8, 12}) {
        FitOptions opts;
        opts.max_degree = maxdeg;
        opts.max_index_bits = 200'000'000;
        RationalizedFit fit = fit_polynomial(g, 1e-2, opts);
        CHECK(fit.sup_error <= prev + 1e-15);
        prev = fit.sup_error;
    }
}

TEST_CASE("sigma term JSON round-trip") {
    Sigma sig = table_sigma();
    SigmaTerm term = represent_univariate([](double x) { return std::sin(kPi * x); }, 1e-2, sig);
    const std::string js = sigma_term_to_json(term);
    SigmaTerm back = sigma_term_from_json(js);
    CHECK(back.alpha == term.alpha);
    CHECK(back.gamma == term.gamma);
    CHECK(back.n == term.n);
    CHECK(back.p0 == term.p0);
    CHECK(sigma_term_to_json(back) == js);  // byte-stable
}

TEST_SUITE_END();
