#pragma once

#include "sigmanet/kst.hpp"
#include "sigmanet/poly_fit.hpp"

namespace sigmanet {

/// The fixed-weight two-hidden-layer network: d first-layer inputs with
/// coordinate-vector weights, 2d+2 second-layer units, e_1 = ... = e_{2d+1}.
struct TlfnModel {
    int schema_version = 1;
    int d = 1;
    double a = 0.0;  ///< box lower corner ([a,b]^d); s = b - a
    double s = 1.0;
    double lambda_mono = 0.5;
    SigmaTerm outer;                  ///< alpha_0, n_0, gamma_0
    std::vector<SigmaTerm> inner;     ///< 2d+1 terms for the phi_p
    std::vector<double> kst_weights;  ///< lambda_q
    double const_e = 0.0;             ///< unit 2d+2 realizing -(2d+1) gamma_0
    double const_zeta = 0.0;

    double b() const { return a + s; }
};

struct BuildReport {
    double target_eps = 0.0;
    double kst_budget = 0.0;
    double g_fit_budget = 0.0;
    double inner_tol = 0.0;           ///< the delta used for the phi fits
    double kst_residual = 0.0;        ///< achieved
    bool kst_stagnated = false;
    int kst_iterations = 0;
    std::vector<double> kst_residual_history;
    double g_fit_error = 0.0;
    std::vector<double> phi_fit_errors;
    double measured_sup_error = 0.0;  ///< over the verification grid, honest
    int grid_per_axis = 0;
    int second_layer_units = 0;       ///< 2d + 2
    int paper_neuron_count = 0;       ///< 3d + 2
    int first_layer_evaluations = 0;  ///< d (2d + 2) as the formula is written
};

struct BuildOptions {
    double box_a = 0.0;
    double box_b = 1.0;
    int kst_grid_per_axis = 33;
    int kst_max_iterations = 400;
    int kst_resolution = 1 << 14;
    int verify_grid_per_axis = 33;
    double kst_budget = 0.0;    ///< 0 = default eps/4
    double g_fit_budget = 0.0;  ///< 0 = default eps/(4(2d+1))
    FitOptions fit;
};

/// Thrown when a stage misses its budget; names the stage and what it achieved.
class BuildError : public std::runtime_error {
  public:
    BuildError(const std::string& stage_, double achieved_, double budget_)
        : std::runtime_error("build_network: stage '" + stage_ + "' achieved " +
                             std::to_string(achieved_) + " against budget " +
                             std::to_string(budget_)),
          stage(stage_), achieved(achieved_), budget(budget_) {}
    std::string stage;
    double achieved;
    double budget;
};

/// delta such that |x - y| <= delta on [-range_pad, 1 + range_pad] implies
/// |F(x) - F(y)| <= tol for F(t) = alpha sigma(s t - beta); dense sampling
/// with halving refinement, returned conservatively halved.
double modulus_delta(const SigmaTerm& term, double tol, double range_pad, const Sigma& sigma);

std::pair<TlfnModel, BuildReport> build_network(const MultivariateFn& f, int d, double eps,
                                                const SigmaParams& params,
                                                const BuildOptions& opts = {});

/// Network forward pass at x (inside the box); all sigma arguments stay in
/// local piece coordinates.
double evaluate(const TlfnModel& model, const Sigma& sigma, std::span<const double> x);

/// max over the tensor grid of |f - evaluate|.
double sup_error(const TlfnModel& model, const Sigma& sigma, const MultivariateFn& f,
                 int grid_per_axis);

std::string model_to_json(const TlfnModel& model);
TlfnModel model_from_json(const std::string& text);

}  // namespace sigmanet
