#pragma once

#include "sigmanet/activation.hpp"

#include <functional>
#include <optional>

namespace sigmanet {

/// Single-neuron representation alpha * sigma(s x - beta) - gamma of a
/// univariate function; beta = s - 2ns is carried exactly by the piece
/// index n.
struct SigmaTerm {
    double alpha = 0.0;
    BigInt n = 1;
    double gamma = 0.0;
    Rational p0 = 0;
};

struct RationalizedFit {
    Rational p0;          ///< leading coefficient of the fitted polynomial
    MonicPoly u;          ///< p / p0 (u = 1 when p0 = 0)
    double sup_error = 0; ///< measured on the verification grid
    int degree = 0;
    double real_error = 0;              ///< pre-rationalization grid error
    double rationalization_budget = 0;  ///< slack granted to coefficient rounding
};

struct FitOptions {
    int max_degree = 24;
    int grid_size = 1024;                      ///< equispaced verification points
    unsigned long max_index_bits = 4'000'000;  ///< enumeration-index size cap
};

/// Thrown when no admissible fit reaches the tolerance.
class FitError : public std::runtime_error {
  public:
    FitError(const std::string& what, double best)
        : std::runtime_error(what), best_achieved(best) {}
    double best_achieved;
};

using UnivariateFn = std::function<double(double)>;

/// The verification grid: grid_size equispaced points of [0,1] plus the
/// Chebyshev nodes of max_degree (declared so measurements are reproducible).
std::vector<double> verification_grid(const FitOptions& opts);

/// Approximate g on [0,1] by p0 * u(x) with u monic and rational, keeping
/// the enumeration index of u materializable. Chebyshev interpolation over
/// a degree scan; coefficient ratios are rounded to continued-fraction-
/// simple rationals under an error-budget allocation. Throws FitError when
/// the tolerance is unattainable within max_degree / max_index_bits.
RationalizedFit fit_polynomial(const UnivariateFn& g, double tol, const FitOptions& opts = {});

/// alpha = p0 / b_n, gamma = p0 a_n / b_n, n = poly_to_index(u).
SigmaTerm sigma_rep(const RationalizedFit& fit, const Sigma& sigma);

/// Value of the term at x in [0,1] (piece-exact path; no absolute floats).
double sigma_term_eval(const SigmaTerm& term, const Sigma& sigma, double x);

/// fit_polynomial + sigma_rep, with the final grid error re-measured
/// through the sigma path.
SigmaTerm represent_univariate(const UnivariateFn& g, double tol, const Sigma& sigma,
                               const FitOptions& opts = {});

std::string sigma_term_to_json(const SigmaTerm& term);
SigmaTerm sigma_term_from_json(const std::string& text);

/// Shortest round-trip decimal formatting (used everywhere numbers leave
/// the library, so identical runs emit identical bytes).
std::string format_double(double v);

}  // namespace sigmanet
