#pragma once

#include <string>

namespace impacteq {

// Exogenous primitives of the one-asset CARA-normal market.
//
// The payoff is X ~ N(0,1), the insider observes G = X + Z_I with
// Var(Z_I) = 1/p_I, and noise traders submit demand Z_N with
// Var(Z_N) = 1/p_N.  alpha_I / alpha_U are the CARA risk tolerances of
// the insider and the (representative) uninformed trader, Pi the
// outstanding supply in shares.
struct MarketParams {
    double alpha_I = 1.0; // insider risk tolerance, > 0
    double alpha_U = 1.0; // uninformed risk tolerance, > 0
    double p_I = 1.0;     // private signal precision, >= 0 (0 = no-signal limit)
    double p_N = 1.0;     // noise-demand precision, > 0
    double Pi = 0.0;      // outstanding supply, shares

    // Throws validation_error naming the offending field.
    void validate() const;

    bool operator==(const MarketParams&) const = default;
};

// Reduced parameters that every downstream formula consumes.
//
//   kappa    = alpha_I^2 * p_N     (precision of Z_N / alpha_I)
//   lambda   = alpha_I / (alpha_I + alpha_U)
//   Pi_hat   = Pi / (alpha_I + alpha_U)   (Pareto per-unit-tolerance supply)
//   p_Q0     = -Pi_hat              (price absent private information)
//   beta     = kappa * p_I
//   lambda_I = lambda,  lambda_U = 1 - lambda
//   R        = 1 / (1 + p_I)
struct DerivedParams {
    double kappa = 1.0;
    double lambda = 0.5;
    double Pi_hat = 0.0;
    double p_Q0 = 0.0;
    double beta = 1.0;
    double lambda_I = 0.5;
    double lambda_U = 0.5;
    double R = 0.5;

    // p_I recovered exactly as beta/kappa (kappa > 0 always).
    double p_I() const { return beta / kappa; }

    // Direct construction from the reduced coordinates (kappa, lambda, p_I);
    // used by the phi maps and by tests that sample the reduced space.
    static DerivedParams from_reduced(double kappa, double lambda, double p_I,
                                      double Pi_hat = 0.0);

    bool operator==(const DerivedParams&) const = default;
};

// Computes the reduced parameters.  Rejects invalid inputs.
DerivedParams derive(const MarketParams& params);

namespace detail {
// Shared validation helper: throws unless finite (and > 0 when strict).
void require_finite(double v, const char* field);
void require_positive(double v, const char* field);
void require_non_negative(double v, const char* field);
} // namespace detail

} // namespace impacteq
