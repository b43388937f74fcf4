#include "sigmanet/kst.hpp"

#include "sigmanet/poly_fit.hpp"  // format_double

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigmanet {

namespace {

double lerp_table(const std::vector<double>& v, double t01) {
    const int n = static_cast<int>(v.size());
    if (t01 <= 0.0)
        return v.front();
    if (t01 >= 1.0)
        return v.back();
    const double pos = t01 * (n - 1);
    const int i = std::min(static_cast<int>(pos), n - 2);
    const double w = pos - i;
    return v[i] * (1.0 - w) + v[i + 1] * w;
}

}  // namespace

double KstDecomposition::phi_eval(int p, double x) const {
    const double t = (x - a) / (b - a);
    return std::min(1.0, std::max(0.0, lerp_table(phi[p], t)));
}

double KstDecomposition::inner_arg(int p, std::span<const double> x) const {
    double z = 0.0;
    for (int q = 0; q < d; ++q)
        z += weights[q] * phi_eval(p, x[q]);
    return z;
}

double OuterFunction::eval(double z) const {
    return lerp_table(values, z);
}

KstDecomposition build_decomposition(int d, double a, double b, int resolution) {
    if (d < 1)
        throw std::invalid_argument("build_decomposition: d must be >= 1");
    if (!(a < b))
        throw std::invalid_argument("build_decomposition: requires a < b");
    if (resolution < 2)
        throw std::invalid_argument("build_decomposition: resolution must be >= 2");
    KstDecomposition k;
    k.d = d;
    k.a = a;
    k.b = b;
    k.resolution = resolution;
    k.weights.assign(d, 1.0 / d);
    const int P = 2 * d + 1;
    k.phi.resize(P);
    const double rho_scale = 0.05;
    for (int p = 0; p < P; ++p) {
        const double rho = rho_scale * (p - d) / d;  // zero-sum, distinct, small
        std::vector<double>& tab = k.phi[p];
        tab.resize(resolution);
        for (int i = 0; i < resolution; ++i) {
            const double t = static_cast<double>(i) / (resolution - 1);
            const double w = t * (1.0 - t) * (2.0 * t - 1.0);
            tab[i] = std::min(1.0, std::max(0.0, t + rho * w));
        }
    }
    return k;
}

OuterFunction compute_outer(const MultivariateFn& f, const KstDecomposition& decomp,
                            double target_residual, int max_iterations, int grid_per_axis,
                            int g_resolution) {
    const int d = decomp.d;
    const int P = 2 * d + 1;
    // tensor evaluation grid
    long npts = 1;
    for (int q = 0; q < d; ++q)
        npts *= grid_per_axis;
    std::vector<double> fv(npts);
    std::vector<std::vector<double>> Z(P, std::vector<double>(npts));
    {
        std::vector<double> x(d);
        for (long idx = 0; idx < npts; ++idx) {
            long rem = idx;
            for (int q = 0; q < d; ++q) {
                x[q] = decomp.a + (decomp.b - decomp.a) *
                                      (rem % grid_per_axis) / double(grid_per_axis - 1);
                rem /= grid_per_axis;
            }
            const double v = f(x);
            if (!std::isfinite(v))
                throw std::invalid_argument("compute_outer: non-finite function value");
            fv[idx] = v;
            for (int p = 0; p < P; ++p)
                Z[p][idx] = decomp.inner_arg(p, x);
        }
    }

    OuterFunction g;
    g.values.assign(g_resolution, 0.0);
    const double theta0 = 1.0 / P;

    auto residual = [&](const std::vector<double>& gv) {
        std::vector<double> r(fv);
        for (int p = 0; p < P; ++p)
            for (long i = 0; i < npts; ++i)
                r[i] -= lerp_table(gv, Z[p][i]);
        return r;
    };
    auto sup = [](const std::vector<double>& r) {
        double m = 0.0;
        for (double v : r)
            m = std::max(m, std::abs(v));
        return m;
    };

    std::vector<double> r = residual(g.values);
    double best = sup(r);
    g.residual_history.push_back(best);
    int stall = 0;
    int it = 0;
    for (; it < max_iterations && best > target_residual; ++it) {
        // pull the residual back through the inner maps (linear splatting)
        std::vector<double> num(g_resolution, 0.0), den(g_resolution, 0.0);
        for (int p = 0; p < P; ++p)
            for (long i = 0; i < npts; ++i) {
                const double pos = Z[p][i] * (g_resolution - 1);
                const int i0 = std::min(static_cast<int>(pos), g_resolution - 2);
                const double w = pos - i0;
                num[i0] += r[i] * (1.0 - w);
                den[i0] += 1.0 - w;
                num[i0 + 1] += r[i] * w;
                den[i0 + 1] += w;
            }
        std::vector<double> upd(g_resolution, 0.0);
        // fill sparsely-hit bins from the nearest populated neighbours
        int last = -1;
        for (int i = 0; i < g_resolution; ++i) {
            if (den[i] > 1e-9) {
                upd[i] = num[i] / den[i];
                if (last < 0)
                    for (int j = 0; j < i; ++j)
                        upd[j] = upd[i];
                else
                    for (int j = last + 1; j < i; ++j)
                        upd[j] = upd[last] +
                                 (upd[i] - upd[last]) * (j - last) / double(i - last);
                last = i;
            }
        }
        if (last < 0)
            break;
        for (int j = last + 1; j < g_resolution; ++j)
            upd[j] = upd[last];

        bool improved = false;
        double theta = theta0;
        for (int bt = 0; bt < 20; ++bt) {
            std::vector<double> g2(g.values);
            for (int i = 0; i < g_resolution; ++i)
                g2[i] += theta * upd[i];
            std::vector<double> r2 = residual(g2);
            const double m2 = sup(r2);
            if (m2 < best) {
                g.values.swap(g2);
                r.swap(r2);
                best = m2;
                improved = true;
                break;
            }
            theta *= 0.6;
        }
        g.residual_history.push_back(best);
        if (improved) {
            stall = 0;
        } else if (++stall >= 3) {
            g.stagnated = true;
            ++it;
            break;
        }
    }
    g.iterations = it;
    g.achieved_residual = best;
    if (best > target_residual && !g.stagnated && it >= max_iterations)
        g.stagnated = true;
    return g;
}

double reconstruct(const KstDecomposition& decomp, const OuterFunction& g,
                   std::span<const double> x) {
    if (static_cast<int>(x.size()) != decomp.d)
        throw std::domain_error("reconstruct: dimension mismatch");
    for (double xi : x)
        if (xi < decomp.a || xi > decomp.b)
            throw std::domain_error("reconstruct: point outside the box");
    double out = 0.0;
    for (int p = 0; p < 2 * decomp.d + 1; ++p)
        out += g.eval(decomp.inner_arg(p, x));
    return out;
}

std::string kst_to_json(const KstDecomposition& k) {
    nlohmann::json j;
    j["d"] = k.d;
    j["a"] = format_double(k.a);
    j["b"] = format_double(k.b);
    j["resolution"] = k.resolution;
    nlohmann::json w = nlohmann::json::array();
    for (double v : k.weights)
        w.push_back(format_double(v));
    j["weights"] = w;
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& tab : k.phi) {
        nlohmann::json t = nlohmann::json::array();
        for (double v : tab)
            t.push_back(format_double(v));
        tables.push_back(std::move(t));
    }
    j["phi"] = tables;
    return j.dump();
}

KstDecomposition kst_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    KstDecomposition k;
    k.d = j.at("d").get<int>();
    k.a = std::strtod(j.at("a").get<std::string>().c_str(), nullptr);
    k.b = std::strtod(j.at("b").get<std::string>().c_str(), nullptr);
    k.resolution = j.at("resolution").get<int>();
    for (const auto& v : j.at("weights"))
        k.weights.push_back(std::strtod(v.get<std::string>().c_str(), nullptr));
    for (const auto& tab : j.at("phi")) {
        std::vector<double> t;
        for (const auto& v : tab)
            t.push_back(std::strtod(v.get<std::string>().c_str(), nullptr));
        k.phi.push_back(std::move(t));
    }
    return k;
}

std::string outer_to_json(const OuterFunction& g) {
    nlohmann::json j;
    nlohmann::json vals = nlohmann::json::array();
    for (double v : g.values)
        vals.push_back(format_double(v));
    j["values"] = vals;
    j["achieved_residual"] = format_double(g.achieved_residual);
    j["iterations"] = g.iterations;
    j["stagnated"] = g.stagnated;
    return j.dump();
}

OuterFunction outer_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    OuterFunction g;
    for (const auto& v : j.at("values"))
        g.values.push_back(std::strtod(v.get<std::string>().c_str(), nullptr));
    g.achieved_residual = std::strtod(j.at("achieved_residual").get<std::string>().c_str(), nullptr);
    g.iterations = j.at("iterations").get<int>();
    g.stagnated = j.at("stagnated").get<bool>();
    return g;
}

}  // namespace sigmanet
