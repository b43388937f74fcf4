#include "sigmanet/tlfn.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace sigmanet {

namespace {

/// F(t) = alpha * sigma at piece-n local coordinate t (gamma cancels in
/// differences, so it is omitted).
double term_local(const SigmaTerm& term, const Sigma& sigma, double t) {
    if (term.alpha == 0.0)
        return 0.0;
    return term.alpha * sigma.local(term.n, t);
}

}  // namespace

double modulus_delta(const SigmaTerm& term, double tol, double range_pad, const Sigma& sigma) {
    const double lo = -range_pad, hi = 1.0 + range_pad;
    if (term.alpha == 0.0)
        return hi - lo;  // constant function: any delta works
    const int N = 4096;
    std::vector<double> F(N + 1);
    for (int i = 0; i <= N; ++i)
        F[i] = term_local(term, sigma, lo + (hi - lo) * i / N);
    const double step = (hi - lo) / N;
    auto osc_within = [&](double delta) {
        const int w = std::max(1, static_cast<int>(std::ceil(delta / step)));
        double worst = 0.0;
        for (int i = 0; i + w <= N; ++i) {
            // window max-min
            double mn = F[i], mx = F[i];
            for (int j = i; j <= i + w; ++j) {
                mn = std::min(mn, F[j]);
                mx = std::max(mx, F[j]);
            }
            worst = std::max(worst, mx - mn);
        }
        return worst <= tol;
    };
    double delta = hi - lo;
    if (!osc_within(step))  // even adjacent samples vary too much
        return step / 4.0;
    while (delta > step && !osc_within(delta))
        delta /= 2.0;
    // refine upward by bisection between delta and 2*delta
    double good = delta, bad = std::min(2.0 * delta, hi - lo);
    for (int i = 0; i < 12 && bad - good > step; ++i) {
        const double mid = (good + bad) / 2.0;
        (osc_within(mid) ? good : bad) = mid;
    }
    return good / 2.0;  // conservative
}

std::pair<TlfnModel, BuildReport> build_network(const MultivariateFn& f, int d, double eps,
                                                const SigmaParams& params,
                                                const BuildOptions& opts) {
    if (!(eps > 0))
        throw std::invalid_argument("build_network: eps must be positive");
    if (d < 1)
        throw std::invalid_argument("build_network: d must be >= 1");
    const int P = 2 * d + 1;
    Sigma sigma(params);

    TlfnModel model;
    model.d = d;
    model.a = opts.box_a;
    model.s = opts.box_b - opts.box_a;
    model.lambda_mono = params.lambda_mono;
    if (std::abs(model.s - params.s) > 1e-12)
        throw std::invalid_argument("build_network: params.s must equal b - a");

    BuildReport report;
    report.target_eps = eps;
    report.kst_budget = opts.kst_budget > 0 ? opts.kst_budget : eps / 4.0;
    report.g_fit_budget = opts.g_fit_budget > 0 ? opts.g_fit_budget : eps / (4.0 * P);
    report.grid_per_axis = opts.verify_grid_per_axis;
    report.second_layer_units = 2 * d + 2;
    report.paper_neuron_count = 3 * d + 2;
    report.first_layer_evaluations = d * (2 * d + 2);

    // stage 1: superposition scaffold + outer function
    KstDecomposition decomp = build_decomposition(d, opts.box_a, opts.box_b, opts.kst_resolution);
    model.kst_weights = decomp.weights;
    OuterFunction g = compute_outer(f, decomp, report.kst_budget, opts.kst_max_iterations,
                                    opts.kst_grid_per_axis);
    report.kst_residual = g.achieved_residual;
    report.kst_stagnated = g.stagnated;
    report.kst_iterations = g.iterations;
    report.kst_residual_history = g.residual_history;
    if (g.achieved_residual > report.kst_budget)
        throw BuildError("kst", g.achieved_residual, report.kst_budget);

    // stage 2: one sigma-term for g
    RationalizedFit gfit = [&] {
        try {
            return fit_polynomial([&](double z) { return g.eval(z); }, report.g_fit_budget,
                                  opts.fit);
        } catch (const FitError& e) {
            throw BuildError("g-fit", e.best_achieved, report.g_fit_budget);
        }
    }();
    model.outer = sigma_rep(gfit, sigma);
    report.g_fit_error = gfit.sup_error;

    // stage 3: delta from the modulus of continuity of the outer term,
    // then one sigma-term per phi_p at tolerance delta. The pad covers the
    // largest excursion the phi fits may introduce (delta itself <= 0.25).
    const double per_term = eps / (2.0 * P);
    double delta = modulus_delta(model.outer, per_term, 0.25, sigma);
    delta = std::min(delta, 0.25);
    report.inner_tol = delta;
    model.inner.reserve(P);
    for (int p = 0; p < P; ++p) {
        auto phi01 = [&](double t) { return decomp.phi_eval(p, opts.box_a + model.s * t); };
        try {
            RationalizedFit pfit = fit_polynomial(phi01, delta, opts.fit);
            model.inner.push_back(sigma_rep(pfit, sigma));
            report.phi_fit_errors.push_back(pfit.sup_error);
        } catch (const FitError& e) {
            throw BuildError("phi-fit[" + std::to_string(p) + "]", e.best_achieved, delta);
        }
    }

    // stage 4: the constant unit realizing -(2d+1) gamma_0
    model.const_zeta = 0.0;
    const double sigma0 = sigma(0.0 - model.const_zeta);
    model.const_e = -(P * model.outer.gamma) / sigma0;

    report.measured_sup_error = sup_error(model, sigma, f, opts.verify_grid_per_axis);
    return {std::move(model), report};
}

double evaluate(const TlfnModel& model, const Sigma& sigma, std::span<const double> x) {
    const int d = model.d;
    if (static_cast<int>(x.size()) != d)
        throw std::domain_error("evaluate: dimension mismatch");
    for (double xi : x)
        if (xi < model.a - 1e-12 || xi > model.b() + 1e-12)
            throw std::domain_error("evaluate: point outside the box");
    const int P = 2 * d + 1;
    double total = 0.0;
    for (int p = 0; p < P; ++p) {
        const SigmaTerm& term = model.inner[p];
        // y_p = sum_q lambda_q (alpha_p sigma(x_q - beta_p)) - gamma_p
        double y = -term.gamma;
        for (int q = 0; q < d; ++q) {
            const double t = (x[q] - model.a) / model.s;
            y += model.kst_weights[q] *
                 (term.alpha == 0.0 ? 0.0 : term.alpha * sigma.piece_exact(term.n, std::min(1.0, std::max(0.0, t))));
        }
        // outer unit: sigma(s y - beta_0) at piece n_0 local coordinate y
        const double yc = std::min(3.0, std::max(-2.0, y));
        total += model.outer.alpha * sigma.local(model.outer.n, yc);
    }
    total += model.const_e * sigma(0.0 - model.const_zeta);
    return total;
}

double sup_error(const TlfnModel& model, const Sigma& sigma, const MultivariateFn& f,
                 int grid_per_axis) {
    if (grid_per_axis < 2)
        throw std::invalid_argument("sup_error: grid must be >= 2 per axis");
    const int d = model.d;
    long npts = 1;
    for (int q = 0; q < d; ++q)
        npts *= grid_per_axis;
    std::vector<double> x(d);
    double worst = 0.0;
    for (long idx = 0; idx < npts; ++idx) {
        long rem = idx;
        for (int q = 0; q < d; ++q) {
            x[q] = model.a + model.s * (rem % grid_per_axis) / double(grid_per_axis - 1);
            rem /= grid_per_axis;
        }
        worst = std::max(worst, std::abs(f(x) - evaluate(model, sigma, x)));
    }
    return worst;
}

std::string model_to_json(const TlfnModel& model) {
    nlohmann::json j;
    j["schema_version"] = model.schema_version;
    j["d"] = model.d;
    j["a"] = format_double(model.a);
    j["s"] = format_double(model.s);
    j["lambda_mono"] = format_double(model.lambda_mono);
    j["outer"] = nlohmann::json::parse(sigma_term_to_json(model.outer));
    nlohmann::json inner = nlohmann::json::array();
    for (const SigmaTerm& t : model.inner)
        inner.push_back(nlohmann::json::parse(sigma_term_to_json(t)));
    j["inner"] = inner;
    nlohmann::json w = nlohmann::json::array();
    for (double v : model.kst_weights)
        w.push_back(format_double(v));
    j["kst_weights"] = w;
    nlohmann::json e = nlohmann::json::array();
    for (int p = 0; p < 2 * model.d + 1; ++p)
        e.push_back(format_double(model.outer.alpha));
    j["e"] = e;
    j["constant_unit"] = {{"e", format_double(model.const_e)},
                          {"zeta", format_double(model.const_zeta)}};
    // lossy float mirrors of the exact thresholds; NaN/inf become null
    auto beta_mirror = [&](const SigmaTerm& t) -> nlohmann::json {
        const double nd = mpz_get_d(t.n.get_mpz_t());
        const double beta = model.s - 2.0 * nd * model.s;
        if (!std::isfinite(beta))
            return nullptr;
        return format_double(beta);
    };
    nlohmann::json mirrors = nlohmann::json::array();
    for (const SigmaTerm& t : model.inner)
        mirrors.push_back(beta_mirror(t));
    j["non_authoritative"] = {{"beta_float_mirror", mirrors},
                              {"beta0_float_mirror", beta_mirror(model.outer)}};
    return j.dump(2);
}

TlfnModel model_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    TlfnModel m;
    m.schema_version = j.at("schema_version").get<int>();
    m.d = j.at("d").get<int>();
    m.a = std::strtod(j.at("a").get<std::string>().c_str(), nullptr);
    m.s = std::strtod(j.at("s").get<std::string>().c_str(), nullptr);
    m.lambda_mono = std::strtod(j.at("lambda_mono").get<std::string>().c_str(), nullptr);
    m.outer = sigma_term_from_json(j.at("outer").dump());
    for (const auto& t : j.at("inner"))
        m.inner.push_back(sigma_term_from_json(t.dump()));
    for (const auto& v : j.at("kst_weights"))
        m.kst_weights.push_back(std::strtod(v.get<std::string>().c_str(), nullptr));
    m.const_e = std::strtod(j.at("constant_unit").at("e").get<std::string>().c_str(), nullptr);
    m.const_zeta = std::strtod(j.at("constant_unit").at("zeta").get<std::string>().c_str(), nullptr);
    return m;
}

}  // namespace sigmanet
