#include "impacteq/params.hpp"

#include <cmath>

#include "impacteq/errors.hpp"

namespace impacteq {

namespace detail {

void require_finite(double v, const char* field) {
    if (!std::isfinite(v))
        throw validation_error(field, std::string(field) + " must be finite");
}

void require_positive(double v, const char* field) {
    require_finite(v, field);
    if (!(v > 0.0))
        throw validation_error(field, std::string(field) + " must be > 0");
}

void require_non_negative(double v, const char* field) {
    require_finite(v, field);
    if (!(v >= 0.0))
        throw validation_error(field, std::string(field) + " must be >= 0");
}

} // namespace detail

void MarketParams::validate() const {
    detail::require_positive(alpha_I, "alpha_I");
    detail::require_positive(alpha_U, "alpha_U");
    detail::require_non_negative(p_I, "p_I");
    detail::require_positive(p_N, "p_N");
    detail::require_finite(Pi, "Pi");
}

DerivedParams derive(const MarketParams& params) {
    params.validate();
    DerivedParams d;
    d.kappa = params.alpha_I * params.alpha_I * params.p_N;
    if (!std::isfinite(d.kappa) || d.kappa <= 0.0)
        throw validation_error("alpha_I",
                               "alpha_I^2 * p_N overflows or underflows; "
                               "parameters out of range");
    d.lambda = params.alpha_I / (params.alpha_I + params.alpha_U);
    d.Pi_hat = params.Pi / (params.alpha_I + params.alpha_U);
    d.p_Q0 = -d.Pi_hat;
    d.beta = d.kappa * params.p_I;
    d.lambda_I = d.lambda;
    d.lambda_U = 1.0 - d.lambda;
    d.R = 1.0 / (1.0 + params.p_I);
    return d;
}

DerivedParams DerivedParams::from_reduced(double kappa, double lambda, double p_I,
                                          double Pi_hat) {
    detail::require_positive(kappa, "kappa");
    detail::require_finite(lambda, "lambda");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw validation_error("lambda", "lambda must lie in (0, 1)");
    detail::require_non_negative(p_I, "p_I");
    detail::require_finite(Pi_hat, "Pi_hat");
    DerivedParams d;
    d.kappa = kappa;
    d.lambda = lambda;
    d.Pi_hat = Pi_hat;
    d.p_Q0 = -Pi_hat;
    d.beta = kappa * p_I;
    d.lambda_I = lambda;
    d.lambda_U = 1.0 - lambda;
    d.R = 1.0 / (1.0 + p_I);
    return d;
}

} // namespace impacteq
