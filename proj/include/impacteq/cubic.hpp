#pragma once

#include <array>

#include "impacteq/params.hpp"

namespace impacteq {

// Result of solving the equilibrium cubic
//
//   g(y) = (1+y)^2 (1 - (1-lambda) y / (lambda (1+p_I)))
//          + (kappa p_I / lambda) ((1-lambda) y + 1)
//
// for its unique strictly positive root y_hat.  g(0) > 0 and
// g(y) -> -inf, and g is strictly decreasing at any root, so exactly one
// positive root exists for every valid parameter set.
struct CubicSolution {
    double y_hat = 0.0;   // the unique positive root
    double residual = 0.0; // g(y_hat)
    int iterations = 0;    // refinement steps taken
};

// Expanded (Horner) coefficients of g:  g(y) = c3 y^3 + c2 y^2 + c1 y + c0.
// Exposed so callers can reason about the residual scale.
std::array<double, 4> cubic_coefficients(const DerivedParams& d);

// Evaluates g at y via Horner form of the expanded cubic; the factored
// (1+y)^2 products lose precision for large y.  Requires p_I > 0.
double cubic_residual(double y, const DerivedParams& d);

// Magnitude scale used for residual tolerances at position y:
//   |c3|(1+|y|)^3 + |c2|(1+|y|)^2 + |c1|(1+|y|) + |c0|.
double cubic_residual_scale(double y, const DerivedParams& d);

// Safeguarded Newton with bisection fallback on a bracket [0, y_max],
// y_max = max(10, 3 lambda (1+p_I)(1+kappa p_I)/(1-lambda)) doubled until
// g(y_max) < 0.  Converges to |g(y_hat)| <= 1e-12 * cubic_residual_scale.
//
// p_I = 0 is rejected (validation_error): the no-signal limit is a separate
// equilibrium with its own constructors.  A broken bracket is reported as a
// solver_error distinct from non-convergence.
CubicSolution solve_cubic(const DerivedParams& d);

} // namespace impacteq
