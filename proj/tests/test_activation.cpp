#include "sigmanet/activation.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigmanet;

namespace {

// Published values of sigma for s = 3, lambda = 1/2 at t = 0..49.
const double kTable[50] = {
    0.25941, 0.36008, 0.57848, 0.91514, 0.91514, 0.91514, 0.91514, 0.91198, 0.91105, 0.90650,
    0.91169, 0.92728, 0.95325, 0.93437, 0.92551, 0.91549, 0.92958, 0.94366, 0.95775, 0.95532,
    0.94932, 0.94074, 0.93635, 0.93635, 0.94074, 0.93278, 0.93177, 0.92482, 0.92900, 0.94153,
    0.96241, 0.94506, 0.94003, 0.92771, 0.92905, 0.93842, 0.96385, 0.94692, 0.93923, 0.92999,
    0.94166, 0.95333, 0.96499, 0.95602, 0.94295, 0.93186, 0.93943, 0.95079, 0.96593, 0.95800};

Sigma table_sigma() { return Sigma({3.0, 0.5, 53}); }

}  // namespace

TEST_SUITE_BEGIN("activation");

TEST_CASE("envelope examples") {
    Sigma sig = table_sigma();
    // h(s) = 1 - min(1/2, lambda) since log 1 = 0
    CHECK(sig.envelope_h(3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sig.envelope_h(9.0) == doctest::Approx(1.0 - 0.5 / (1.0 + std::log(7.0))).epsilon(1e-14));
    CHECK(sig.envelope_h(15.0) == doctest::Approx(1.0 - 0.5 / (1.0 + std::log(13.0))).epsilon(1e-14));
    // cross-checks against the published table
    CHECK((1.0 + sig.envelope_h(9.0)) / 2.0 == doctest::Approx(0.91514).epsilon(6e-6));
    CHECK_THROWS_AS(sig.envelope_h(2.0), std::domain_error);
    Sigma small({3.0, 0.1, 53});
    CHECK(small.envelope_h(3.0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("transition function") {
    CHECK(Sigma::transition(0.0, 1.0, -5.0) == 1.0);
    CHECK(Sigma::transition(0.0, 1.0, 7.0) == 0.0);
    CHECK(Sigma::transition(6.0, 7.5, 7.0) ==
          doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-14));
    CHECK(Sigma::transition(2.0, 5.0, 3.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(Sigma::transition(1.0, 1.0, 0.5), std::domain_error);
    // stays strictly inside (0,1) on the open interval
    for (double x = 0.05; x < 1.0; x += 0.05) {
        const double v = Sigma::transition(0.0, 1.0, x);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("piece data worked examples") {
    Sigma sig = table_sigma();
    const PieceData& p1 = sig.piece(1);
    CHECK(static_cast<double>(p1.a) == doctest::Approx(0.5));
    CHECK(static_cast<double>(p1.b) == doctest::Approx(sig.envelope_h(9.0) / 2.0).epsilon(1e-14));

    const PieceData& p2 = sig.piece(2);
    CHECK(p2.B1 == Rational(0));
    CHECK(p2.B2 == Rational(1));
    CHECK(static_cast<double>(p2.a) == doctest::Approx(0.90650).epsilon(5e-6));
    CHECK(static_cast<double>(p2.b) == doctest::Approx(0.04675).epsilon(1e-3));

    const PieceData& p4 = sig.piece(4);  // u_4 = x^2 - x
    CHECK(p4.B1 == Rational(-1));
    CHECK(p4.B2 == Rational(1));

    // M_n strictly increasing
    double prev = 0.0;
    for (int n = 1; n <= 40; ++n) {
        const double M = static_cast<double>(sig.piece(n).M);
        CHECK(M > prev);
        CHECK(M < 1.0);
        prev = M;
    }
}

TEST_CASE("delta selection") {
    Sigma sig = table_sigma();
    CHECK(sig.compute_delta(1, DeltaSide::left) == doctest::Approx(1.5));   // u_1 constant
    CHECK(sig.compute_delta(1, DeltaSide::right) == doctest::Approx(1.5));  // unclamped value is also 1.5
    // u_4' = 2t - 1: sup 3 on [1,2]; eps s/(b C) = (B2-B1) s/(2 C) = 1
    CHECK(sig.compute_delta(4, DeltaSide::left) == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 1; n <= 30; ++n) {
        const double dl = sig.compute_delta(n, DeltaSide::left);
        const double dr = sig.compute_delta(n, DeltaSide::right);
        CHECK(dl > 0.0);
        CHECK(dl <= 1.5);
        CHECK(dr > 0.0);
        CHECK(dr <= 1.5);
    }
}

TEST_CASE("table of published sigma values (s=3, lambda=1/2)") {
    Sigma sig = table_sigma();
    for (int t = 0; t < 50; ++t)
        CHECK(std::abs(sig(static_cast<double>(t)) - kTable[t]) <= 1e-4);
    CHECK(std::abs(sig(0.0) - 0.25941) <= 5e-6);
    CHECK(std::abs(sig(7.0) - 0.91198) <= 5e-6);
    CHECK(std::abs(sig(8.0) - 0.91105) <= 5e-6);
    CHECK(std::abs(sig(9.0) - 0.90650) <= 5e-6);
}

TEST_CASE("sigmoidal limits and monotone tail") {
    Sigma sig = table_sigma();
    CHECK(sig(-1e6) > 0.0);
    CHECK(sig(-1e6) < 1e-5);
    CHECK(sig(-1e300) < 1e-290);
    CHECK(sig(1e9) > 0.95);
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -50.0 + i * (53.0 - 1e-9) / 1000.0;  // up to just below s
        const double v = sig(x);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("sandwich and lambda-closeness on a grid") {
    for (double s : {1.0, 3.0})
        for (double lam : {0.75, 0.5, 0.1}) {
            Sigma sig({s, lam, 53});
            for (int i = 0; i <= 2000; ++i) {
                const double x = s + (100.0 * s - s) * i / 2000.0;
                const double h = sig.envelope_h(x);
                const double v = sig(x);
                CHECK(v > h);
                CHECK(v < 1.0);
                CHECK(v - h <= lam + 1e-12);
            }
        }
}

TEST_CASE("piece-interior bound (1+2M)/3 <= sigma <= (2+M)/3") {
    Sigma sig = table_sigma();
    for (int n = 1; n <= 50; ++n) {
        const double M = static_cast<double>(sig.piece(n).M);
        for (int i = 0; i <= 32; ++i) {
            const double t = i / 32.0;
            const double v = sig.piece_exact(n, t);
            CHECK(v >= (1.0 + 2.0 * M) / 3.0 - 1e-12);
            CHECK(v <= (2.0 + M) / 3.0 + 1e-12);
        }
    }
}

TEST_CASE("junction continuity and first-derivative agreement") {
    Sigma sig = table_sigma();
    const double s = 3.0;
    auto check_junction = [&](double x0) {
        const double left = sig(x0 - 1e-12), right = sig(x0 + 1e-12);
        CHECK(std::abs(left - right) <= 1e-10);
        const double h = 1e-4;
        // one-sided central differences from each side
        const double dl = (3 * sig(x0) - 4 * sig(x0 - h) + sig(x0 - 2 * h)) / (2 * h);
        const double dr = (-3 * sig(x0) + 4 * sig(x0 + h) - sig(x0 + 2 * h)) / (2 * h);
        CHECK(std::abs(dl - dr) <= 200.0 * h * h + 1e-9);
    };
    check_junction(s);
    for (int n = 1; n <= 20; ++n) {
        check_junction(2 * n * s);
        check_junction(2 * n * s + s / 2);
        check_junction((2 * n + 1) * s);
    }
    // all derivatives vanish at s and at the plateau midpoints: the
    // difference quotient itself must go to zero
    CHECK(std::abs((sig(s + 1e-6) - sig(s - 1e-6)) / 2e-6) < 1e-3);
    CHECK(std::abs((sig(6 + 1.5 + 1e-6) - sig(6 + 1.5 - 1e-6)) / 2e-6) < 1e-3);
}

TEST_CASE("midpoint identity sigma(2ns + s/2) = K_n") {
    Sigma sig = table_sigma();
    for (int n = 1; n <= 50; ++n) {
        const double mid = 2.0 * n * 3.0 + 1.5;
        const double K = (sig(2.0 * n * 3.0) + sig((2.0 * n + 1.0) * 3.0)) / 2.0;
        CHECK(sig(mid) == doctest::Approx(K).epsilon(1e-12));
        CHECK(static_cast<double>(sig.piece(n).K) == doctest::Approx(K).epsilon(1e-12));
    }
}

TEST_CASE("piece identity sigma(st + (2n-1)s) = a_n + b_n u_n(t)") {
    Sigma sig = table_sigma();
    for (int n = 1; n <= 50; ++n)
        for (int i = 0; i <= 63; ++i) {
            const double t = i / 63.0;
            const double via_sigma = sig(3.0 * t + (2.0 * n - 1.0) * 3.0);
            const double exact = sig.piece_exact(n, t);
            CHECK(std::abs(via_sigma - exact) <= 1e-12 * std::abs(exact));
        }
    CHECK_THROWS_AS(sig.piece_exact(2, 1.5), std::domain_error);
}

TEST_CASE("local evaluation agrees with absolute coordinates") {
    Sigma sig = table_sigma();
    for (int n = 1; n <= 25; ++n)
        for (double t = -2.0; t <= 3.0; t += 0.11) {
            const double x = 3.0 * (t + 2.0 * n - 1.0);
            CHECK(sig.local(n, t) == doctest::Approx(sig(x)).epsilon(1e-12));
        }
    CHECK_THROWS_AS(sig.local(1, 3.5), std::domain_error);
}

TEST_CASE("local evaluation at an astronomically large piece index") {
    Sigma sig = table_sigma();
    BigInt n = (BigInt(1) << 256) + 12345;
    const double M = static_cast<double>(sig.piece(n).M);
    for (double t : {0.0, 0.25, 0.5, 1.0, 1.5, 2.5}) {
        const double v = sig.local(n, t);
        CHECK(v > M);
        CHECK(v < 1.0);
    }
    // the sandwich (M_n, 1) tightens as n grows
    CHECK(M > 0.99);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Sigma({-1.0, 0.5, 53}), std::invalid_argument);
    CHECK_THROWS_AS(Sigma({3.0, 0.0, 53}), std::invalid_argument);
    CHECK_THROWS_AS(Sigma({3.0, 0.5, 52}), std::invalid_argument);
    CHECK_THROWS_AS(Sigma({3.0, 0.5, 128}), std::invalid_argument);
    CHECK_NOTHROW(Sigma({3.0, 0.5, 64}));
}

TEST_SUITE_END();
