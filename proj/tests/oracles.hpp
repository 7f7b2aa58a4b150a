#pragma once

// Test-only oracles, kept independent of the production solver paths: the
// cubic is evaluated in its factored (unexpanded) form and rooted by plain
// bisection; nothing here touches impacteq::solve_cubic.

#include <cmath>
#include <stdexcept>

namespace oracle {

// Factored-form evaluation, deliberately different from the production
// Horner evaluation.
inline double cubic_factored(double y, double kappa, double lambda, double p_I) {
    return (1.0 + y) * (1.0 + y) *
               (1.0 - (1.0 - lambda) * y / (lambda * (1.0 + p_I))) +
           (kappa * p_I / lambda) * ((1.0 - lambda) * y + 1.0);
}

// Bisection to ~1e-15 relative on the bracket [0, hi], hi doubled until the
// sign flips.
inline double bisect_root(double kappa, double lambda, double p_I) {
    double lo = 0.0;
    double hi = std::max(10.0, 3.0 * lambda * (1.0 + p_I) * (1.0 + kappa * p_I) /
                                   (1.0 - lambda));
    int guard = 0;
    while (cubic_factored(hi, kappa, lambda, p_I) >= 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("oracle bracket failed");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cubic_factored(mid, kappa, lambda, p_I) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Frozen reference values at kappa = 1, lambda = 1/2, p_I = 1, where the
// cubic reduces to y^3 - 5y - 6 = 0 (computed by bisect_root at 1e-15).
inline constexpr double kYhatUnit = 2.68909532363766;

// Deterministic certainty-equivalent oracle: -alpha log E[exp(-(pi_hat p +
// psi (X - p)))] for X ~ N(m, v), evaluated by composite Simpson over
// m +- 12 sqrt(v) instead of the Gaussian moment generating function.  The
// integrand decays like a Gaussian, so the rule converges far below 1e-10.
inline double ce_by_quadrature(double alpha, double pi_hat, double psi,
                               double price, double m, double v) {
    const double sd = std::sqrt(v);
    const double lo = m - 12.0 * sd, hi = m + 12.0 * sd;
    const int n = 16000; // even
    const double h = (hi - lo) / n;
    // Work with exp(-psi (x - m)) and restore the shift afterwards so the
    // integrand stays in range for large |psi m|.
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + h * i;
        const double u = (x - m) / sd;
        const double f = std::exp(-psi * (x - m) - 0.5 * u * u);
        acc += (i == 0 || i == n) ? f : ((i & 1) ? 4.0 * f : 2.0 * f);
    }
    const double integral = acc * h / (3.0 * std::sqrt(2.0 * 3.14159265358979324) * sd);
    // E[exp(-W)] = exp(-pi_hat p - psi (m - p)) * integral
    return alpha * (pi_hat * price + psi * (m - price)) -
           alpha * std::log(integral);
}

} // namespace oracle
