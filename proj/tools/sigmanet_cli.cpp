#include "sigmanet/enumeration.hpp"
#include "sigmanet/functions.hpp"
#include "sigmanet/poly_fit.hpp"
#include "sigmanet/tlfn.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <regex>

namespace {

using namespace sigmanet;

/// Parse polynomial text like "x^2 - x", "x^3", "3/2 x + 1". The leading
/// (highest-degree) coefficient must be 1.
MonicPoly parse_poly_text(const std::string& text) {
    // split into signed terms
    std::vector<std::pair<int, std::string>> terms;  // sign, body
    int sign = 1;
    std::string cur;
    for (char ch : text) {
        if (ch == '+' || ch == '-') {
            if (!cur.empty() && cur.find_first_not_of(" \t") != std::string::npos) {
                terms.push_back({sign, cur});
                cur.clear();
                sign = 1;
            }
            if (ch == '-')
                sign = -sign;
        } else {
            cur += ch;
        }
    }
    if (!cur.empty() && cur.find_first_not_of(" \t") != std::string::npos)
        terms.push_back({sign, cur});
    if (terms.empty())
        throw std::invalid_argument("empty polynomial");

    static const std::regex term_re(
        R"(^\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(x(?:\s*\^\s*(\d+))?)?\s*$)");
    std::map<int, Rational> coef;
    for (auto& [sg, body] : terms) {
        std::smatch m;
        if (!std::regex_match(body, m, term_re) || (m[1].str().empty() && m[2].str().empty()))
            throw std::invalid_argument("cannot parse term '" + body + "'");
        Rational c = m[1].str().empty() ? Rational(1) : parse_rational(m[1].str());
        int pow = 0;
        if (!m[2].str().empty())
            pow = m[3].str().empty() ? 1 : std::stoi(m[3].str());
        coef[pow] += sg * c;
    }
    const int deg = coef.rbegin()->first;
    if (coef[deg] != 1)
        throw std::domain_error("polynomial must be monic (leading coefficient 1)");
    MonicPoly p;
    p.coeffs.resize(deg);
    for (auto& [pow, c] : coef)
        if (pow < deg)
            p.coeffs[pow] = c;
    return p;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string model_with_report_json(const TlfnModel& model, const BuildReport& rep) {
    nlohmann::json j = nlohmann::json::parse(model_to_json(model));
    j["report"] = {{"target_eps", format_double(rep.target_eps)},
                   {"kst_budget", format_double(rep.kst_budget)},
                   {"g_fit_budget", format_double(rep.g_fit_budget)},
                   {"inner_tol", format_double(rep.inner_tol)},
                   {"kst_residual", format_double(rep.kst_residual)},
                   {"kst_iterations", rep.kst_iterations},
                   {"kst_stagnated", rep.kst_stagnated},
                   {"g_fit_error", format_double(rep.g_fit_error)},
                   {"measured_sup_error", format_double(rep.measured_sup_error)},
                   {"grid_per_axis", rep.grid_per_axis},
                   {"second_layer_units", rep.second_layer_units},
                   {"paper_neuron_count", rep.paper_neuron_count},
                   {"first_layer_evaluations", rep.first_layer_evaluations}};
    return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"constructive fixed-weight two-hidden-layer approximator"};
    app.require_subcommand(1);

    // ---- sigma-table ----
    auto* tab = app.add_subcommand("sigma-table", "emit t,sigma(t) as CSV");
    double ts = 3.0, tlam = 0.5, t0 = 0.0, t1 = 49.0, tstep = 1.0;
    std::string tout;
    tab->add_option("--s", ts, "interval length s = b - a")->capture_default_str();
    tab->add_option("--lambda", tlam, "monotonicity parameter")->capture_default_str();
    tab->add_option("--t-start", t0, "first argument")->capture_default_str();
    tab->add_option("--t-end", t1, "last argument (inclusive)")->capture_default_str();
    tab->add_option("--step", tstep, "argument step (> 0)")->capture_default_str();
    tab->add_option("--out", tout, "output file (default stdout)");

    // ---- enum ----
    auto* en = app.add_subcommand("enum", "polynomial <-> index bijection");
    std::string en_index, en_poly, en_json;
    en->add_option("--index", en_index, "decimal index for index-to-poly");
    en->add_option("--poly", en_poly, "polynomial text for poly-to-index, e.g. \"x^2 - 1\"");
    en->add_option("--json", en_json, "polynomial JSON coefficient array");

    // ---- fit1d ----
    auto* fit = app.add_subcommand("fit1d", "represent a univariate function as one sigma term");
    std::string f_fn = "identity", f_out;
    double f_eps = 1e-2, f_s = 3.0, f_lam = 0.5;
    int f_prec = 53, f_maxdeg = 24, f_grid = 1024;
    fit->add_option("--function", f_fn, "target selector")->capture_default_str();
    fit->add_option("--eps", f_eps, "tolerance")->capture_default_str();
    fit->add_option("--s", f_s, "interval length")->capture_default_str();
    fit->add_option("--lambda", f_lam, "monotonicity parameter")->capture_default_str();
    fit->add_option("--precision", f_prec, "working precision bits")->capture_default_str();
    fit->add_option("--max-degree", f_maxdeg, "fit degree cap")->capture_default_str();
    fit->add_option("--grid", f_grid, "verification grid size")->capture_default_str();
    fit->add_option("--out", f_out, "output file for the term JSON");

    // ---- build ----
    auto* bld = app.add_subcommand("build", "build the full network for a target function");
    std::string b_fn = "mean2", b_out;
    double b_eps = 0.2, b_a = 0.0, b_b = 1.0, b_lam = 0.5;
    int b_d = 0, b_prec = 53, b_grid = 33;
    bld->add_option("--function", b_fn, "target selector")->capture_default_str();
    bld->add_option("--d", b_d, "dimension (default: the function's own)");
    bld->add_option("--eps", b_eps, "target accuracy")->capture_default_str();
    bld->add_option("--a", b_a, "box lower corner")->capture_default_str();
    bld->add_option("--b", b_b, "box upper corner")->capture_default_str();
    bld->add_option("--lambda", b_lam, "monotonicity parameter")->capture_default_str();
    bld->add_option("--precision", b_prec, "working precision bits")->capture_default_str();
    bld->add_option("--grid", b_grid, "verification grid per axis")->capture_default_str();
    bld->add_option("--out", b_out, "output file for the model JSON");

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "check a stored model against a function");
    std::string v_model, v_fn;
    int v_grid = 33;
    ver->add_option("--model", v_model, "model JSON path")->required();
    ver->add_option("--function", v_fn, "target selector")->required();
    ver->add_option("--grid", v_grid, "grid per axis (>= 2)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (tab->parsed()) {
        if (!(tstep > 0) || t1 < t0) {
            std::cerr << "sigma-table: bad range\n";
            return 2;
        }
        Sigma sigma({ts, tlam, 53});
        std::string csv = "t,sigma\n";
        for (double t = t0; t <= t1 + tstep * 1e-9; t += tstep)
            csv += format_double(t) + "," + format_double(sigma(t)) + "\n";
        write_output(tout, csv);
        return 0;
    }

    if (en->parsed()) {
        const int given = (!en_index.empty()) + (!en_poly.empty()) + (!en_json.empty());
        if (given != 1) {
            std::cerr << "enum: provide exactly one of --index / --poly / --json\n";
            return 2;
        }
        if (!en_index.empty()) {
            BigInt n(en_index);
            MonicPoly p = index_to_poly(n);
            std::cout << p.to_string() << "\n" << poly_to_json(p) << "\n";
            return 0;
        }
        MonicPoly p = en_poly.empty() ? poly_from_json(en_json) : parse_poly_text(en_poly);
        std::cout << poly_to_index(p).get_str() << "\n";
        return 0;
    }

    if (fit->parsed()) {
        TargetFunction fn = resolve_function(f_fn);
        if (fn.d != 1) {
            std::cerr << "fit1d: " << f_fn << " is not univariate\n";
            return 2;
        }
        Sigma sigma({f_s, f_lam, f_prec});
        FitOptions opts;
        opts.max_degree = f_maxdeg;
        opts.grid_size = f_grid;
        try {
            SigmaTerm term = represent_univariate(
                [&](double x) { return fn(std::span<const double>(&x, 1)); }, f_eps, sigma, opts);
            double sup = 0.0;
            for (double x : verification_grid(opts)) {
                const double v = fn(std::span<const double>(&x, 1));
                sup = std::max(sup, std::abs(v - sigma_term_eval(term, sigma, x)));
            }
            write_output(f_out, sigma_term_to_json(term) + "\n");
            std::cout << "fit1d: function=" << f_fn << " sup_error=" << format_double(sup)
                      << " index_bits=" << mpz_sizeinbase(term.n.get_mpz_t(), 2) << "\n";
            return 0;
        } catch (const FitError& e) {
            std::cerr << "fit1d: " << e.what() << "\n";
            return 3;
        }
    }

    if (bld->parsed()) {
        TargetFunction fn = resolve_function(b_fn);
        const int d = b_d > 0 ? b_d : fn.d;
        if (b_d > 0 && fn.d != b_d) {
            std::cerr << "build: function " << b_fn << " has dimension " << fn.d << "\n";
            return 2;
        }
        SigmaParams params{b_b - b_a, b_lam, b_prec};
        BuildOptions opts;
        opts.box_a = b_a;
        opts.box_b = b_b;
        opts.verify_grid_per_axis = b_grid;
        try {
            auto [model, rep] = build_network(fn.fn, d, b_eps, params, opts);
            write_output(b_out, model_with_report_json(model, rep));
            std::cout << "build: function=" << b_fn << " d=" << d
                      << " measured_sup_error=" << format_double(rep.measured_sup_error)
                      << " target=" << format_double(rep.target_eps)
                      << (rep.measured_sup_error <= rep.target_eps ? " (ok)" : " (over)") << "\n";
            return rep.measured_sup_error <= rep.target_eps ? 0 : 3;
        } catch (const BuildError& e) {
            std::cerr << "build: " << e.what() << "\n";
            return 3;
        }
    }

    if (ver->parsed()) {
        if (v_grid < 2) {
            std::cerr << "verify: grid must be >= 2\n";
            return 2;
        }
        std::ifstream in(v_model);
        if (!in) {
            std::cerr << "verify: cannot read " << v_model << "\n";
            return 2;
        }
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const nlohmann::json j = nlohmann::json::parse(text);
        TlfnModel model = model_from_json(text);
        const double declared =
            std::strtod(j.at("report").at("target_eps").get<std::string>().c_str(), nullptr);
        TargetFunction fn = resolve_function(v_fn);
        if (fn.d != model.d) {
            std::cerr << "verify: dimension mismatch\n";
            return 2;
        }
        Sigma sigma({model.s, model.lambda_mono, 53});
        const double measured = sup_error(model, sigma, fn.fn, v_grid);
        std::cout << "verify: measured=" << format_double(measured)
                  << " declared=" << format_double(declared)
                  << (measured <= declared ? " PASS" : " FAIL") << "\n";
        return measured <= declared ? 0 : 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
