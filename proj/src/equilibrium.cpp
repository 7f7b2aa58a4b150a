#include "impacteq/equilibrium.hpp"

#include <cmath>
#include <limits>

#include "impacteq/errors.hpp"

namespace impacteq {

namespace {

void require_finite_arg(double v, const char* name) {
    detail::require_finite(v, name);
}

void require_signal_kind(const Equilibrium& eq, const char* op) {
    if (is_no_signal(eq.kind))
        throw validation_error("kind", std::string(op) +
                                           " is undefined for no-signal "
                                           "equilibria (no market signal exists)");
}

void require_positive_signal(const MarketParams& params, const char* op) {
    if (!(params.p_I > 0.0))
        throw validation_error(
            "p_I", std::string(op) +
                       " requires p_I > 0; use solve_no_signal for the limit");
}

} // namespace

const char* kind_name(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::PriceImpact: return "pi";
        case EquilibriumKind::PriceTaking: return "pt";
        case EquilibriumKind::NoSignalPriceImpact: return "ns-pi";
        case EquilibriumKind::NoSignalPriceTaking: return "ns-pt";
    }
    return "?";
}

bool is_no_signal(EquilibriumKind kind) {
    return kind == EquilibriumKind::NoSignalPriceImpact ||
           kind == EquilibriumKind::NoSignalPriceTaking;
}

Equilibrium solve_pi(const MarketParams& params) {
    params.validate();
    require_positive_signal(params, "solve_pi");

    Equilibrium eq;
    eq.kind = EquilibriumKind::PriceImpact;
    eq.params = params;
    eq.derived = derive(params);
    const DerivedParams& d = eq.derived;
    const double p_I = params.p_I;

    const CubicSolution root = solve_cubic(d);
    const double y = root.y_hat;
    eq.y_hat = y;
    eq.cubic_res = root.residual;
    eq.cubic_iterations = root.iterations;

    eq.lambda_sig = (1.0 + y) / (params.alpha_I * p_I);
    const double one_py2 = (1.0 + y) * (1.0 + y);
    eq.p_pub = d.kappa * p_I * p_I / (one_py2 + d.kappa * p_I);
    eq.price_intercept = d.p_Q0;
    eq.price_slope = p_I * y / ((1.0 + p_I) * (1.0 + 2.0 * y));

    eq.insider_g = p_I / (1.0 + y);
    eq.insider_price = -(1.0 + p_I) / (1.0 + y);
    eq.insider_pq0 = -y / (1.0 + y);
    eq.uninformed_h = eq.p_pub;
    eq.uninformed_price = -(1.0 + eq.p_pub);

    eq.impact_M = y / (1.0 + p_I);
    eq.impact_V = d.p_Q0;
    return eq;
}

Equilibrium solve_pt(const MarketParams& params) {
    params.validate();
    require_positive_signal(params, "solve_pt");

    Equilibrium eq;
    eq.kind = EquilibriumKind::PriceTaking;
    eq.params = params;
    eq.derived = derive(params);
    const DerivedParams& d = eq.derived;
    const double p_I = params.p_I;

    eq.lambda_sig = 1.0 / (params.alpha_I * p_I);
    eq.p_pub = d.kappa * p_I * p_I / (1.0 + d.kappa * p_I);
    eq.price_intercept = d.p_Q0;
    eq.price_slope = (params.alpha_I * p_I + params.alpha_U * eq.p_pub) /
                     (params.alpha_I * (1.0 + p_I) +
                      params.alpha_U * (1.0 + eq.p_pub));

    eq.insider_g = p_I;
    eq.insider_price = -(1.0 + p_I);
    eq.insider_pq0 = 0.0;
    eq.uninformed_h = eq.p_pub;
    eq.uninformed_price = -(1.0 + eq.p_pub);

    // Reverse combined demand map: PT agents do not internalize impact, but
    // the equilibrium price is still affine in psi_I - psi_I0 + z/alpha_I.
    eq.impact_M = (params.alpha_I * p_I + params.alpha_U * eq.p_pub) /
                  (params.alpha_U * (p_I - eq.p_pub));
    eq.impact_V = d.p_Q0;
    return eq;
}

Equilibrium solve_no_signal(const MarketParams& params, bool impact) {
    params.validate(); // p_I ignored

    Equilibrium eq;
    eq.kind = impact ? EquilibriumKind::NoSignalPriceImpact
                     : EquilibriumKind::NoSignalPriceTaking;
    eq.params = params;
    eq.derived = derive(params);
    const DerivedParams& d = eq.derived;
    const double lam = d.lambda;
    const double aI = params.alpha_I;

    eq.price_intercept = d.p_Q0;
    if (impact) {
        eq.price_slope = lam / ((1.0 - lam * lam) * aI);
        eq.insider_z = -lam / ((1.0 + lam) * aI);
        eq.uninformed_z = -lam / ((1.0 - lam * lam) * aI);
        eq.y_hat = lam / (1.0 - lam); // the p_I -> 0 limit of the cubic root
    } else {
        eq.price_slope = lam / aI;
        eq.insider_z = -lam / aI;
        eq.uninformed_z = -lam / aI;
        eq.y_hat = std::numeric_limits<double>::quiet_NaN();
    }
    // Both NS flavors share the reverse combined-demand slope lambda/(1-lambda).
    eq.impact_M = lam / (1.0 - lam);
    eq.impact_V = d.p_Q0;
    return eq;
}

double Equilibrium::public_signal(double g, double z) const {
    require_signal_kind(*this, "public_signal");
    require_finite_arg(g, "g");
    require_finite_arg(z, "z");
    return g + lambda_sig * z;
}

double Equilibrium::price(double h_or_z) const {
    require_finite_arg(h_or_z, "h_or_z");
    if (is_no_signal(kind)) return price_intercept + price_slope * h_or_z;
    return price_intercept + price_slope * (h_or_z - price_intercept);
}

double Equilibrium::insider_demand(double g, double z) const {
    require_finite_arg(g, "g");
    require_finite_arg(z, "z");
    if (is_no_signal(kind)) return derived.Pi_hat + insider_z * z;
    const double p = price(public_signal(g, z));
    return insider_g * g + insider_price * p + insider_pq0 * derived.p_Q0;
}

double Equilibrium::uninformed_demand(double h_or_z) const {
    require_finite_arg(h_or_z, "h_or_z");
    if (is_no_signal(kind)) return derived.Pi_hat + uninformed_z * h_or_z;
    return uninformed_h * h_or_z + uninformed_price * price(h_or_z);
}

double Equilibrium::insider_shares(double g, double z) const {
    return params.alpha_I * insider_demand(g, z);
}

double Equilibrium::uninformed_shares(double h_or_z) const {
    return params.alpha_U * uninformed_demand(h_or_z);
}

double Equilibrium::perceived_price(double psi, double psi_I0, double z) const {
    if (is_no_signal(kind))
        throw validation_error("kind",
                               "perceived_price is undefined for no-signal kinds");
    require_finite_arg(psi, "psi");
    require_finite_arg(z, "z");
    if (std::abs(psi_I0 - derived.Pi_hat) >
        1e-12 * (1.0 + std::abs(derived.Pi_hat)))
        throw validation_error(
            "psi_I0", "non-Pareto initial position rejected: psi_I0 must equal "
                      "Pi_hat (the model's endowment normalization)");
    return impact_V + impact_M * (psi - psi_I0 + z / params.alpha_I);
}

ReactivitySlopes slopes(const Equilibrium& eq_pi, const Equilibrium& eq_pt) {
    if (eq_pi.kind != EquilibriumKind::PriceImpact ||
        eq_pt.kind != EquilibriumKind::PriceTaking)
        throw validation_error("kind", "slopes expects (PI, PT) equilibria");
    if (!(eq_pi.params == eq_pt.params))
        throw validation_error("params",
                               "slopes requires equilibria from identical params");

    const DerivedParams& d = eq_pi.derived;
    const double p_I = eq_pi.params.p_I;
    const double y = eq_pi.y_hat;
    ReactivitySlopes s;
    s.m_g_pi = p_I * y / ((1.0 + p_I) * (1.0 + 2.0 * y));
    s.m_g_pt = p_I * (d.kappa * p_I + d.lambda) /
               (1.0 - d.lambda + (1.0 + p_I) * (d.kappa * p_I + d.lambda));
    s.m_chi_pi = y / (1.0 + p_I);
    s.m_chi_pt = (d.lambda + d.kappa * p_I) / (1.0 - d.lambda);
    return s;
}

} // namespace impacteq
