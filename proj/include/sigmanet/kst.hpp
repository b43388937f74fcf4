#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sigmanet {

using MultivariateFn = std::function<double(std::span<const double>)>;

/// Superposition scaffold: positive weights summing to 1 and 2d+1
/// nondecreasing continuous inner functions [a,b] -> [0,1], tabulated on a
/// uniform breakpoint grid with linear interpolation.
struct KstDecomposition {
    int d = 1;
    double a = 0.0, b = 1.0;
    std::vector<double> weights;             ///< lambda_q, q = 1..d
    std::vector<std::vector<double>> phi;    ///< 2d+1 tables of `resolution` values
    int resolution = 1 << 14;

    double phi_eval(int p, double x) const;  ///< linear interpolation, clipped to [0,1]
    /// z_p(x) = sum_q lambda_q phi_p(x_q); stays in [0,1].
    double inner_arg(int p, std::span<const double> x) const;
};

/// Tabulated outer function on [0,1].
struct OuterFunction {
    std::vector<double> values;
    double achieved_residual = 0.0;
    int iterations = 0;
    bool stagnated = false;
    std::vector<double> residual_history;  ///< sup residual after each sweep

    double eval(double z) const;  ///< linear interpolation, clamped ends
};

/// Deterministic decomposition for dimension d on [a,b]: equal weights and
/// smooth strictly monotone inner functions t + rho_p t(1-t)(2t-1) with
/// distinct zero-sum perturbations rho_p.
KstDecomposition build_decomposition(int d, double a, double b, int resolution = 1 << 14);

/// Fit g by residual back-substitution: repeatedly average the residual
/// pulled back through the inner maps and add a damped correction, with
/// backtracking so the sup residual never increases. Stops at the target,
/// the iteration budget, or stagnation (flagged).
OuterFunction compute_outer(const MultivariateFn& f, const KstDecomposition& decomp,
                            double target_residual, int max_iterations = 200,
                            int grid_per_axis = 33, int g_resolution = 1025);

/// sum_p g(z_p(x)); x must lie in the box.
double reconstruct(const KstDecomposition& decomp, const OuterFunction& g,
                   std::span<const double> x);

std::string kst_to_json(const KstDecomposition& decomp);
KstDecomposition kst_from_json(const std::string& text);
std::string outer_to_json(const OuterFunction& g);
OuterFunction outer_from_json(const std::string& text);

}  // namespace sigmanet
