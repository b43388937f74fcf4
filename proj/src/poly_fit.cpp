#include "sigmanet/poly_fit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>

namespace sigmanet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Stern-Brocot prefix node: a rational candidate with its distance to the
/// walk target and the path length (= bit length of its Calkin-Wilf index).
struct Node {
    Rational value;
    double err;
    int cost;  // 0 for the zero rational
};

/// Candidate simple rationals for a real target (any sign): the zero node
/// plus Stern-Brocot prefixes toward |target| up to path length max_cost.
std::vector<Node> sb_candidates(double target, int max_cost) {
    std::vector<Node> out;
    out.push_back({Rational(0), std::abs(target), 0});
    if (target == 0.0 || !std::isfinite(target))
        return out;
    const bool neg = target < 0;
    const double tgt = std::abs(target);
    BigInt p1 = 0, q1 = 1, p2 = 1, q2 = 0;
    for (int step = 0; step < max_cost; ++step) {
        BigInt pm = p1 + p2, qm = q1 + q2;
        Rational v(pm, qm);
        v.canonicalize();
        const double vd = mpq_get_d(v.get_mpq_t());
        Node node{neg ? Rational(-v) : v, std::abs(vd - tgt), step + 1};
        out.push_back(node);
        if (vd == tgt)
            break;
        if (vd < tgt) {
            p1 = pm;
            q1 = qm;
        } else {
            p2 = pm;
            q2 = qm;
        }
    }
    return out;
}

/// Simplest rational in [lo, hi] (used for p0 anchoring).
std::optional<Rational> simplest_in(double lo, double hi, int max_steps = 4096) {
    if (lo > hi)
        return std::nullopt;
    if (lo <= 0.0 && 0.0 <= hi)
        return Rational(0);
    bool neg = hi < 0;
    if (neg)
        std::swap(lo, hi), lo = -lo, hi = -hi;
    BigInt p1 = 0, q1 = 1, p2 = 1, q2 = 0;
    for (int step = 0; step < max_steps; ++step) {
        BigInt pm = p1 + p2, qm = q1 + q2;
        Rational v(pm, qm);
        v.canonicalize();
        const double vd = mpq_get_d(v.get_mpq_t());
        if (lo <= vd && vd <= hi)
            return neg ? Rational(-v) : v;
        if (vd < lo) {
            p1 = pm;
            q1 = qm;
        } else {
            p2 = pm;
            q2 = qm;
        }
    }
    return std::nullopt;
}

/// Chebyshev nodes of degree deg mapped to [0,1].
std::vector<double> cheb_nodes(int deg) {
    std::vector<double> x(deg + 1);
    for (int k = 0; k <= deg; ++k)
        x[k] = 0.5 * (1.0 - std::cos(kPi * (2 * k + 1) / (2.0 * (deg + 1))));
    return x;
}

/// Monomial coefficients of the interpolant through (x_i, y_i) via Newton's
/// divided differences expanded to the monomial basis (long double).
std::vector<long double> interp_monomial(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    std::vector<long double> dd(y.begin(), y.end());
    for (int j = 1; j < n; ++j)
        for (int i = n - 1; i >= j; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (static_cast<long double>(x[i]) - x[i - j]);
    // expand newton form: c(t) = dd[n-1]; c = c*(t - x[k]) + dd[k]
    std::vector<long double> c(n, 0.0L);
    c[0] = dd[n - 1];
    int deg = 0;
    for (int k = n - 2; k >= 0; --k) {
        for (int i = deg + 1; i >= 1; --i)
            c[i] = c[i - 1] - c[i] * x[k];
        c[0] = dd[k] - c[0] * x[k];
        // careful: the loop above must shift; rewritten below
        ++deg;
    }
    return c;
}

long double poly_eval(const std::vector<long double>& c, long double t) {
    long double acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * t + *it;
    return acc;
}

double sup_err_coeffs(const std::vector<long double>& c, const UnivariateFn& g,
                      const std::vector<double>& grid) {
    double worst = 0.0;
    for (double x : grid)
        worst = std::max(worst, std::abs(static_cast<double>(poly_eval(c, x)) - g(x)));
    return worst;
}

}  // namespace

std::vector<double> verification_grid(const FitOptions& opts) {
    std::vector<double> g;
    g.reserve(opts.grid_size + opts.max_degree + 1);
    for (int i = 0; i < opts.grid_size; ++i)
        g.push_back(static_cast<double>(i) / (opts.grid_size - 1));
    for (double x : cheb_nodes(opts.max_degree))
        g.push_back(x);
    std::sort(g.begin(), g.end());
    return g;
}

RationalizedFit fit_polynomial(const UnivariateFn& g, double tol, const FitOptions& opts) {
    if (!(tol > 0))
        throw std::invalid_argument("fit_polynomial: tol must be positive");
    const std::vector<double> grid = verification_grid(opts);
    for (double x : grid)
        if (!std::isfinite(g(x)))
            throw std::invalid_argument("fit_polynomial: non-finite function value");

    double best_fail = std::numeric_limits<double>::infinity();
    std::optional<RationalizedFit> best;

    // zero polynomial (the paper's p0 = 0, u = 1 convention)
    {
        double sup = 0.0;
        for (double x : grid)
            sup = std::max(sup, std::abs(g(x)));
        if (sup < tol) {
            RationalizedFit fit;
            fit.p0 = 0;
            fit.sup_error = sup;
            fit.real_error = sup;
            best = fit;
        } else {
            best_fail = sup;
        }
    }

    for (int deg = 0; deg <= opts.max_degree; ++deg) {
        // interpolate at Chebyshev nodes
        std::vector<double> xs = cheb_nodes(deg);
        std::vector<double> ys(xs.size());
        for (size_t i = 0; i < xs.size(); ++i)
            ys[i] = g(xs[i]);
        std::vector<long double> c = interp_monomial(xs, ys);
        const double interr = sup_err_coeffs(c, g, grid);
        best_fail = std::min(best_fail, interr);
        if (interr >= 0.85 * tol)
            continue;
        const double lead = static_cast<double>(c[deg]);
        if (deg > 0 && std::abs(lead) < 1e-14)
            continue;  // degenerate leading coefficient; lower degrees cover it
        const double slack = tol - interr;
        if (getenv("FIT_DEBUG")) fprintf(stderr, "[deg %d] interr=%g lead=%g slack=%g\n", deg, interr, lead, slack);

        // p0: a simple rational near the leading coefficient. Its own shift
        // is absorbed into the budget via the x^deg term (sup norm 1).
        std::vector<Rational> p0cands;
        if (deg == 0) {
            // constant fit: p = p0, u = 1
            if (auto r = simplest_in(lead - 0.45 * slack, lead + 0.45 * slack); r && *r != 0)
                p0cands.push_back(*r);
        } else {
            for (const Node& nd : sb_candidates(lead, 40))
                if (nd.cost > 0 && nd.err <= std::max(0.02 * std::abs(lead), 1e-13) &&
                    nd.err < 0.4 * slack)
                    p0cands.push_back(nd.value);
            if (p0cands.size() > 3)
                p0cands.resize(3);
        }
        if (getenv("FIT_DEBUG")) fprintf(stderr, "  p0cands: %zu\n", p0cands.size());
        for (const Rational& p0 : p0cands) {
            const double p0d = mpq_get_d(p0.get_mpq_t());
            const double e0 = std::abs(p0d - lead);
            const double budget = 0.9 * (slack - e0);
            if (budget <= 0)
                continue;
            // candidates per coefficient ratio, with prefix-minimum error by cost
            constexpr int kMaxCost = 60;
            std::vector<std::vector<Node>> cands(deg);
            std::vector<std::array<double, kMaxCost + 1>> pmin(deg);
            for (int j = 0; j < deg; ++j) {
                cands[j] = sb_candidates(static_cast<double>(c[j]) / p0d, kMaxCost);
                for (Node& nd : cands[j])
                    nd.err *= std::abs(p0d);  // absolute coefficient error
                double run = std::numeric_limits<double>::infinity();
                size_t at = 0;
                for (int L = 0; L <= kMaxCost; ++L) {
                    while (at < cands[j].size() && cands[j][at].cost <= L)
                        run = std::min(run, cands[j][at++].err);
                    pmin[j][L] = run;
                }
            }
            // smallest uniform cost cap whose best errors meet the budget
            int cap = -1;
            for (int C = 0; C <= kMaxCost; ++C) {
                double total = 0.0;
                for (int j = 0; j < deg; ++j)
                    total += pmin[j][C];
                if (total <= budget) {
                    cap = C;
                    break;
                }
            }
            if (getenv("FIT_DEBUG")) fprintf(stderr, "  p0=%g cap=%d budget=%g\n", p0d, cap, budget);
            if (cap < 0 && deg > 0)
                continue;
            if (cap < 0)
                cap = 0;
            // slack-aware pass: lower each coefficient to the cheapest cost
            // level whose error still fits the remaining budget
            std::vector<int> level(deg, cap);
            double used = 0.0;
            for (int j = 0; j < deg; ++j)
                used += pmin[j][cap];
            for (int j = 0; j < deg; ++j) {
                const double others = used - pmin[j][cap];
                int L = 0;
                while (L < cap && others + pmin[j][L] > budget)
                    ++L;
                level[j] = L;
                used = others + pmin[j][L];
            }
            // materialize the picks: cheapest node achieving pmin at its level
            std::vector<Rational> rhos(deg);
            for (int j = 0; j < deg; ++j) {
                const Node* pick = nullptr;
                for (const Node& nd : cands[j])
                    if (nd.cost <= level[j] && nd.err <= pmin[j][level[j]] &&
                        (!pick || nd.cost < pick->cost)) {
                        pick = &nd;
                    }
                rhos[j] = pick->value;
            }

            RationalizedFit fit;
            fit.p0 = p0;
            fit.u.coeffs = rhos;
            fit.degree = deg;
            fit.real_error = interr;
            fit.rationalization_budget = slack;
            const BigInt bits = poly_index_bits(fit.u);
            if (getenv("FIT_DEBUG")) fprintf(stderr, "  bits=%s cap=%lu\n", bits.get_str().c_str(), opts.max_index_bits);
            if (bits > static_cast<long>(opts.max_index_bits))
                continue;
            // exact-coefficients verification pass
            std::vector<long double> cc(deg + 1);
            for (int j = 0; j < deg; ++j)
                cc[j] = static_cast<long double>(mpq_get_d(Rational(p0 * rhos[j]).get_mpq_t()));
            cc[deg] = p0d;
            fit.sup_error = sup_err_coeffs(cc, g, grid);
            if (getenv("FIT_DEBUG")) fprintf(stderr, "  sup=%g bits=%s\n", fit.sup_error, poly_index_bits(fit.u).get_str().c_str());
            if (fit.sup_error >= tol) {
                best_fail = std::min(best_fail, fit.sup_error);
                continue;
            }
            if (!best || fit.sup_error < best->sup_error ||
                (fit.sup_error == best->sup_error && poly_index_bits(fit.u) < poly_index_bits(best->u)))
                best = fit;
        }
    }
    if (!best)
        throw FitError("fit_polynomial: tolerance " + format_double(tol) +
                           " unattainable within degree " + std::to_string(opts.max_degree) +
                           " and index budget; best achieved " + format_double(best_fail),
                       best_fail);
    return *best;
}

SigmaTerm sigma_rep(const RationalizedFit& fit, const Sigma& sigma) {
    SigmaTerm term;
    term.p0 = fit.p0;
    if (fit.p0 == 0) {
        term.alpha = 0.0;
        term.n = 1;
        term.gamma = 0.0;
        return term;
    }
    term.n = poly_to_index(fit.u);
    const PieceData& pd = sigma.piece(term.n);
    const long double p0 = mpq_get_d(fit.p0.get_mpq_t());
    term.alpha = static_cast<double>(p0 / pd.b);
    term.gamma = static_cast<double>(p0 * pd.a / pd.b);
    return term;
}

double sigma_term_eval(const SigmaTerm& term, const Sigma& sigma, double x) {
    if (term.alpha == 0.0)
        return mpq_get_d(term.p0.get_mpq_t()) - term.gamma;  // p0 = 0 case: 0
    return term.alpha * sigma.piece_exact(term.n, x) - term.gamma;
}

SigmaTerm represent_univariate(const UnivariateFn& g, double tol, const Sigma& sigma,
                               const FitOptions& opts) {
    RationalizedFit fit = fit_polynomial(g, tol, opts);
    SigmaTerm term = sigma_rep(fit, sigma);
    double sup = 0.0;
    for (double x : verification_grid(opts))
        sup = std::max(sup, std::abs(g(x) - sigma_term_eval(term, sigma, x)));
    if (sup >= tol)
        throw FitError("represent_univariate: sigma-path error " + format_double(sup) +
                           " exceeds tolerance " + format_double(tol),
                       sup);
    return term;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sigma_term_to_json(const SigmaTerm& term) {
    nlohmann::json j;
    j["alpha"] = format_double(term.alpha);
    j["n"] = term.n.get_str();
    j["gamma"] = format_double(term.gamma);
    j["p0"] = format_rational(term.p0);
    return j.dump();
}

SigmaTerm sigma_term_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SigmaTerm term;
    term.alpha = std::strtod(j.at("alpha").get<std::string>().c_str(), nullptr);
    term.n = BigInt(j.at("n").get<std::string>());
    term.gamma = std::strtod(j.at("gamma").get<std::string>().c_str(), nullptr);
    term.p0 = parse_rational(j.at("p0").get<std::string>());
    return term;
}

}  // namespace sigmanet
