#include "sigmanet/activation.hpp"

#include <cmath>

namespace sigmanet {

namespace {

constexpr long double kLn2 = 0.69314718055994530941723212145817657L;

/// log of a positive big integer, accurate to long-double precision.
long double log_big(const BigInt& n) {
    long exp2;
    const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());  // mant in [0.5, 1)
    return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp2) * kLn2;
}

/// log(2 n s + 1) without converting n to floating point.
long double log_2ns_plus1(const BigInt& n, long double s) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 48) {
        const long double nf = static_cast<long double>(n.get_ui());
        return std::log(2.0L * nf * s + 1.0L);
    }
    // 2ns + 1 = 2ns (1 + 1/(2ns)); the correction underflows for big n
    long double corr = 0.0L;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 80) {
        const long double nf = static_cast<long double>(mpz_get_d(n.get_mpz_t()));
        corr = std::log1p(1.0L / (2.0L * nf * s));
    }
    return std::log(2.0L * s) + log_big(n) + corr;
}

/// beta_{a,b}(x) = beta_hat(b-x) / (beta_hat(b-x) + beta_hat(x-a)),
/// computed through the exponent difference so tiny widths stay finite.
long double beta_ab(long double a, long double b, long double x) {
    if (x <= a)
        return 1.0L;
    if (x >= b)
        return 0.0L;
    const long double E = 1.0L / (b - x) - 1.0L / (x - a);
    if (E > 11000.0L)
        return 0.0L;
    if (E < -11000.0L)
        return 1.0L;
    return 1.0L / (1.0L + std::exp(E));
}

/// Exact sup of |u'| on [lo, hi] for deg(u) <= 3 (endpoints + the critical
/// point of the quadratic derivative); a rigorous coefficient bound
/// sum |d_i| max(|lo|,|hi|)^i otherwise. Both are deterministic.
Rational derivative_sup(const MonicPoly& u, const Rational& lo, const Rational& hi) {
    const int deg = u.degree();
    if (deg == 0)
        return Rational(0);
    std::vector<Rational> d(deg);  // coefficients of u', ascending
    for (int i = 1; i < deg; ++i)
        d[i - 1] = Rational(i) * u.coeffs[i];
    d[deg - 1] = Rational(deg);    // from the implicit leading 1
    auto eval_abs = [&](const Rational& x) {
        Rational acc = 0;
        for (int i = deg - 1; i >= 0; --i)
            acc = acc * x + d[i];
        return Rational(abs(acc));
    };
    if (deg <= 3) {
        Rational best = std::max(eval_abs(lo), eval_abs(hi));
        if (deg == 3 && d[2] != 0) {
            const Rational crit = -d[1] / (2 * d[2]);
            if (crit > lo && crit < hi)
                best = std::max(best, eval_abs(crit));
        }
        return best;
    }
    const Rational m = std::max(abs(lo), abs(hi));
    Rational bound = 0, pw = 1;
    for (int i = 0; i < deg; ++i) {
        bound += abs(d[i]) * pw;
        pw *= m;
    }
    return bound;
}

}  // namespace

Sigma::Sigma(SigmaParams params) : params_(params) {
    if (!(params_.s > 0))
        throw std::invalid_argument("SigmaParams: s must be positive");
    if (!(params_.lambda_mono > 0))
        throw std::invalid_argument("SigmaParams: lambda_mono must be positive");
    if (params_.precision < 53 || params_.precision > 64)
        throw std::invalid_argument("SigmaParams: precision must be in [53, 64]");
    min_half_lambda_ = std::min(0.5L, static_cast<long double>(params_.lambda_mono));
}

long double Sigma::env_h_ld(long double x) const {
    const long double s = params_.s;
    return 1.0L - min_half_lambda_ / (1.0L + std::log(x - s + 1.0L));
}

double Sigma::envelope_h(double x) const {
    if (x <= params_.s - 1.0)
        throw std::domain_error("envelope_h: argument must exceed s - 1");
    return static_cast<double>(env_h_ld(x));
}

double Sigma::transition(double a, double b, double x) {
    if (!(a < b))
        throw std::domain_error("transition: requires a < b");
    return static_cast<double>(beta_ab(a, b, x));
}

long double Sigma::big_M(const BigInt& n) const {
    // M_n = h((2n+1)s) = 1 - min(1/2,lambda)/(1 + log(2ns + 1))
    return 1.0L - min_half_lambda_ / (1.0L + log_2ns_plus1(n, params_.s));
}

const Sigma::Core& Sigma::core(const BigInt& n) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cores_.find(n);
    if (it != cores_.end())
        return it->second;

    Core c;
    c.u = index_to_poly(n);
    c.B1 = 0;
    c.B2 = 1;
    if (c.u.degree() >= 1) {
        c.B1 = c.u.coeffs[0];
        c.B2 = c.u.coeffs[0] + 1;
        for (int i = 1; i < c.u.degree(); ++i) {
            const Rational& r = c.u.coeffs[i];
            c.B1 += (r - abs(r)) / 2;
            c.B2 += (r + abs(r)) / 2;
        }
    }
    c.M = big_M(n);
    if (n == 1) {
        c.a = 0.5L;
        c.b = c.M / 2.0L;  // h(3s) = M_1
    } else {
        const long double b1 = mpq_get_d(c.B1.get_mpq_t());
        const long double b2 = mpq_get_d(c.B2.get_mpq_t());
        c.a = ((1.0L + 2.0L * c.M) * b2 - (2.0L + c.M) * b1) / (3.0L * (b2 - b1));
        c.b = (1.0L - c.M) / (3.0L * (b2 - b1));
    }
    c.u_ld.resize(c.u.degree() + 1);
    for (int i = 0; i < c.u.degree(); ++i)
        c.u_ld[i] = mpq_get_d(c.u.coeffs[i].get_mpq_t());
    c.u_ld[c.u.degree()] = 1.0L;
    Rational u1 = c.u.eval(1);
    c.u_at_1 = mpq_get_d(u1.get_mpq_t());
    return cores_.emplace(n, std::move(c)).first->second;
}

long double Sigma::piece_val(const Core& c, long double t) const {
    long double acc = 0.0L;
    for (auto it = c.u_ld.rbegin(); it != c.u_ld.rend(); ++it)
        acc = acc * t + *it;
    return c.a + c.b * acc;
}

const PieceData& Sigma::piece(const BigInt& n) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = pieces_.find(n);
        if (it != pieces_.end())
            return it->second;
    }
    const Core& cn = core(n);
    const Core& cnext = core(n + 1);
    const long double s = params_.s;

    PieceData pd;
    pd.n = n;
    pd.u = cn.u;
    pd.B1 = cn.B1;
    pd.B2 = cn.B2;
    pd.M = cn.M;
    pd.a = cn.a;
    pd.b = cn.b;
    pd.u_at_1 = cn.u_at_1;
    pd.u_ld = cn.u_ld;
    // K_n = (sigma(2ns) + sigma((2n+1)s)) / 2
    const long double left = cn.a + cn.b * cn.u_at_1;
    const long double right = piece_val(cnext, 0.0L);
    pd.K = (left + right) / 2.0L;

    // delta: bound |u_n'| on [1, 2] (the Table-1-consistent convention)
    const Rational c_left = derivative_sup(cn.u, Rational(1), Rational(2));
    if (c_left == 0) {
        pd.delta = s / 2.0L;
    } else {
        const long double eps = (1.0L - cn.M) / 6.0L;
        const long double C = mpq_get_d(c_left.get_mpq_t());
        pd.delta = std::min(eps * s / (cn.b * C), s / 2.0L);
    }
    // delta-bar: bound |u_{n+1}'| on [-1/2, 0]
    const Rational c_right = derivative_sup(cnext.u, Rational(-1, 2), Rational(0));
    if (c_right == 0) {
        pd.delta_bar = s / 2.0L;
    } else {
        const long double eps = (1.0L - cnext.M) / 6.0L;
        const long double C = mpq_get_d(c_right.get_mpq_t());
        pd.delta_bar = std::min(eps * s / (cnext.b * C), s / 2.0L);
    }
    std::lock_guard<std::mutex> lock(mu_);
    return pieces_.emplace(n, std::move(pd)).first->second;
}

double Sigma::compute_delta(const BigInt& n, DeltaSide side) const {
    if (n < 1)
        throw std::domain_error("compute_delta: n must be >= 1");
    const PieceData& pd = piece(n);
    return static_cast<double>(side == DeltaSide::left ? pd.delta : pd.delta_bar);
}

long double Sigma::tail(long double x) const {
    const long double s = params_.s;
    const Core& c1 = core(1);
    const long double limit = c1.a + c1.b;  // (1 + M_1) / 2
    const long double y = s - x;
    const long double inv = 1.0L / y;
    if (inv == 0.0L || inv < 1e-4500L)
        return 0.0L;
    return -std::expm1(-inv) * limit;
}

/// sigma at local coordinate t in [1, 2] of the transition after piece n.
long double Sigma::transition_ld(const BigInt& n, long double t) const {
    const PieceData& pd = piece(n);
    const long double s = params_.s;
    const long double tau = (t - 1.0L) * s;  // position inside [0, s]
    if (t <= 1.5L) {
        const long double b = beta_ab(0.0L, pd.delta, tau);
        const long double A = piece_val(core(n), t);
        return pd.K - b * (pd.K - A);
    }
    const long double b = beta_ab(s - pd.delta_bar, s, tau);
    const long double A = piece_val(core(n + 1), t - 2.0L);
    return pd.K - (1.0L - b) * (pd.K - A);
}

double Sigma::value(double x) const {
    const long double s = params_.s;
    if (x < s)
        return static_cast<double>(tail(x));
    const long double ratio = static_cast<long double>(x) / s;
    BigInt m;
    mpz_set_d(m.get_mpz_t(), static_cast<double>(std::floor(ratio)));
    if (m < 1)
        m = 1;
    const bool odd = mpz_odd_p(m.get_mpz_t()) != 0;
    BigInt n = m;
    if (odd)
        n += 1;
    n /= 2;
    long double t = ratio - 2.0L * static_cast<long double>(mpz_get_d(n.get_mpz_t())) + 1.0L;
    // clamp boundary fuzz (and the sub-ulp regime of astronomically large x)
    if (odd) {
        t = std::min(std::max(t, 0.0L), 1.0L);
        return static_cast<double>(piece_val(core(n), t));
    }
    t = std::min(std::max(t, 1.0L), 2.0L);
    return static_cast<double>(transition_ld(n, t));
}

double Sigma::piece_exact(const BigInt& n, double t) const {
    if (n < 1)
        throw std::domain_error("piece_exact: n must be >= 1");
    if (t < 0.0 || t > 1.0)
        throw std::domain_error("piece_exact: t must lie in [0, 1]");
    return static_cast<double>(piece_val(core(n), t));
}

long double Sigma::local_ld(const BigInt& n, long double t) const {
    if (t >= 0.0L && t <= 1.0L)
        return piece_val(core(n), t);
    if (t > 1.0L && t < 2.0L)
        return transition_ld(n, t);
    if (t >= 2.0L)
        return piece_val(core(n + 1), t - 2.0L);
    // t < 0: piece n-1 territory (or the tail when n = 1)
    if (n == 1)
        return tail(params_.s * (t + 1.0L));
    if (t >= -1.0L)
        return transition_ld(n - 1, t + 2.0L);
    return piece_val(core(n - 1), t + 2.0L);
}

double Sigma::local(const BigInt& n, double t) const {
    if (n < 1)
        throw std::domain_error("local: n must be >= 1");
    if (t < -2.0 || t > 3.0)
        throw std::domain_error("local: t must lie in [-2, 3]");
    return static_cast<double>(local_ld(n, t));
}

}  // namespace sigmanet
