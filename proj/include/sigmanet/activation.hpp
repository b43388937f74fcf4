#pragma once

#include "sigmanet/enumeration.hpp"

#include <map>
#include <mutex>

namespace sigmanet {

/// Construction parameters of the activation function.
struct SigmaParams {
    double s = 3.0;            ///< interval length b - a
    double lambda_mono = 0.5;  ///< the weak-monotonicity lambda
    int precision = 53;        ///< working mantissa bits, 53..64
};

/// Everything needed to evaluate sigma on and around piece n,
/// i.e. [(2n-1)s, 2ns] plus the transition to the right of it.
struct PieceData {
    BigInt n;
    MonicPoly u;             ///< u_n
    Rational B1, B2;         ///< exact range bounds of u_n on [0,1]
    long double M;           ///< M_n = h((2n+1)s)
    long double a, b;        ///< affine coefficients of the piece
    long double K;           ///< plateau value of the transition [2ns,(2n+1)s]
    long double delta;       ///< left transition width
    long double delta_bar;   ///< right transition width
    long double u_at_1;      ///< u_n(1)
    std::vector<long double> u_ld;  ///< coefficients incl. leading 1, ascending
};

enum class DeltaSide { left, right };

/// The computable sigmoidal activation. Evaluation is pure after
/// construction; the per-piece cache is guarded by a mutex so concurrent
/// readers are safe.
class Sigma {
  public:
    explicit Sigma(SigmaParams params);

    const SigmaParams& params() const { return params_; }

    /// h(x) = 1 - min(1/2, lambda)/(1 + log(x - s + 1)); natural log.
    /// Throws std::domain_error for x <= s - 1.
    double envelope_h(double x) const;

    /// Smooth transition: 1 for x <= a, 0 for x >= b, strictly inside (0,1)
    /// between. Throws std::domain_error unless a < b.
    static double transition(double a, double b, double x);

    /// delta (left) or delta-bar (right) of the transition after piece n.
    double compute_delta(const BigInt& n, DeltaSide side) const;

    /// sigma at an arbitrary real argument.
    double value(double x) const;
    double operator()(double x) const { return value(x); }

    /// a_n + b_n u_n(t) for t in [0,1]; works for arbitrary-precision n.
    /// Throws std::domain_error if t is outside [0,1].
    double piece_exact(const BigInt& n, double t) const;

    /// sigma(s (t + 2n - 1)) for t in [-2, 3], evaluated entirely in local
    /// piece coordinates so astronomically large n never meets a float.
    double local(const BigInt& n, double t) const;

    /// Cached per-piece data (computes u_{n+1}-dependent fields too).
    const PieceData& piece(const BigInt& n) const;

  private:
    struct Core {
        MonicPoly u;
        Rational B1, B2;
        long double M, a, b, u_at_1;
        std::vector<long double> u_ld;
    };

    const Core& core(const BigInt& n) const;
    long double env_h_ld(long double x) const;
    long double big_M(const BigInt& n) const;          ///< h((2n+1)s)
    long double tail(long double x) const;             ///< x < s branch
    long double piece_val(const Core& c, long double t) const;
    long double local_ld(const BigInt& n, long double t) const;
    long double transition_ld(const BigInt& n, long double t) const;

    SigmaParams params_;
    long double min_half_lambda_;
    mutable std::mutex mu_;
    mutable std::map<BigInt, Core> cores_;
    mutable std::map<BigInt, PieceData> pieces_;
};

}  // namespace sigmanet
