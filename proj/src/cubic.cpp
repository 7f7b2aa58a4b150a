#include "impacteq/cubic.hpp"

#include <cmath>
#include <limits>

#include "impacteq/errors.hpp"

namespace impacteq {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr int kMaxIterations = 200;

void require_signal(const DerivedParams& d) {
    if (!(d.beta > 0.0))
        throw validation_error("p_I",
                               "solve_cubic requires p_I > 0; use the no-signal "
                               "constructors for the p_I = 0 limit");
}

} // namespace

std::array<double, 4> cubic_coefficients(const DerivedParams& d) {
    // g(y) = (1+y)^2 (1 - a y) + b ((1-lambda) y + 1) with
    // a = (1-lambda) R / lambda, b = beta / lambda, expanded by hand:
    const double a = d.lambda_U * d.R / d.lambda_I;
    const double b = d.beta / d.lambda_I;
    const double c3 = -a;
    const double c2 = 1.0 - 2.0 * a;
    const double c1 = 2.0 - a + b * d.lambda_U;
    const double c0 = 1.0 + b;
    return {c0, c1, c2, c3};
}

double cubic_residual(double y, const DerivedParams& d) {
    detail::require_finite(y, "y");
    require_signal(d);
    const auto c = cubic_coefficients(d);
    return ((c[3] * y + c[2]) * y + c[1]) * y + c[0];
}

double cubic_residual_scale(double y, const DerivedParams& d) {
    const auto c = cubic_coefficients(d);
    const double u = 1.0 + std::abs(y);
    return ((std::abs(c[3]) * u + std::abs(c[2])) * u + std::abs(c[1])) * u +
           std::abs(c[0]);
}

CubicSolution solve_cubic(const DerivedParams& d) {
    require_signal(d);
    const auto c = cubic_coefficients(d);
    const auto g = [&c](double y) {
        return ((c[3] * y + c[2]) * y + c[1]) * y + c[0];
    };
    const auto dg = [&c](double y) {
        return (3.0 * c[3] * y + 2.0 * c[2]) * y + c[1];
    };

    const double p_I = d.p_I();
    double lo = 0.0;
    double hi = std::max(10.0, 3.0 * d.lambda * (1.0 + p_I) * (1.0 + d.beta) /
                                   (1.0 - d.lambda));
    if (!std::isfinite(hi))
        throw solver_error("cubic bracket failed: initial y_max is not finite "
                           "(degenerate tolerance ratio)");
    int expansions = 0;
    while (!(g(hi) < 0.0)) { // NaN-proof: g(y_max) must be strictly negative
        hi *= 2.0;
        if (++expansions > 200 || !std::isfinite(hi))
            throw solver_error("cubic bracket expansion failed: g(y_max) never "
                               "turned negative (internal invariant violation)");
    }
    if (!(g(lo) > 0.0))
        throw solver_error("cubic bracket invalid: g(0) <= 0 "
                           "(internal invariant violation)");

    // Safeguarded Newton: keep the sign-change bracket [lo, hi] at all times,
    // bisect whenever the Newton step leaves it.
    double y = 0.5 * (lo + hi);
    double gy = g(y);
    CubicSolution sol;
    for (int it = 1; it <= kMaxIterations; ++it) {
        sol.iterations = it;
        if (std::abs(gy) <= kResidualTol * cubic_residual_scale(y, d)) break;
        if (gy > 0.0)
            lo = y;
        else
            hi = y;

        const double slope = dg(y);
        double next = y - gy / slope;
        if (!(slope != 0.0) || !(next > lo) || !(next < hi))
            next = 0.5 * (lo + hi);
        if (next == y || hi - lo <=
                             4.0 * std::numeric_limits<double>::epsilon() *
                                 (1.0 + std::abs(y)))
            break; // interval exhausted at double precision
        y = next;
        gy = g(y);
    }

    sol.y_hat = y;
    sol.residual = gy;
    if (!(std::abs(gy) <= kResidualTol * cubic_residual_scale(y, d)))
        throw solver_error("cubic solver did not converge to tolerance");
    return sol;
}

} // namespace impacteq
