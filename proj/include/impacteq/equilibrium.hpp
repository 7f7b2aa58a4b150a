#pragma once

#include <string>

#include "impacteq/cubic.hpp"
#include "impacteq/params.hpp"

namespace impacteq {

enum class EquilibriumKind {
    PriceImpact,        // insider internalizes impact (PI)
    PriceTaking,        // competitive benchmark (PT)
    NoSignalPriceImpact, // p_I -> 0 limit of PI
    NoSignalPriceTaking, // p_I -> 0 limit of PT
};

const char* kind_name(EquilibriumKind kind); // "pi" | "pt" | "ns-pi" | "ns-pt"
bool is_no_signal(EquilibriumKind kind);

// One solved equilibrium of the scalar market, stored as the explicit affine
// maps of its statement.
//
// PI / PT kinds: the public signal is h = g + lambda_sig * z, the price is
//   p(h) = p_Q0 + price_slope * (h - p_Q0),
// the insider's risk-tolerance-adjusted demand is
//   psi_I = insider_g * g + insider_price * p(h) + insider_pq0 * p_Q0,
// and the uninformed demand is
//   psi_U = uninformed_h * h + uninformed_price * p(h).
//
// No-signal kinds: the state variable is the noise demand z alone,
//   p(z) = p_Q0 + price_slope * z,   psi_i(z) = Pi_hat + {insider,uninformed}_z * z.
//
// The perceived-impact map (exact for PI, the equilibrium-implied reverse
// demand for PT) is p = impact_V + impact_M * (psi - psi_I0 + z/alpha_I).
//
// Demands are in risk-tolerance-adjusted units psi; shares are alpha_i * psi.
struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::PriceTaking;
    MarketParams params;
    DerivedParams derived;

    double lambda_sig = 0.0; // signal noise loading (PI/PT only)
    double p_pub = 0.0;      // public signal precision p_U or p_{U,iota}
    double price_intercept = 0.0; // = p_Q0
    double price_slope = 0.0;

    double insider_g = 0.0;
    double insider_price = 0.0;
    double insider_pq0 = 0.0;
    double uninformed_h = 0.0;
    double uninformed_price = 0.0;
    double insider_z = 0.0;    // NS kinds
    double uninformed_z = 0.0; // NS kinds

    double impact_M = 0.0;
    double impact_V = 0.0;

    double y_hat = 0.0;          // cubic root (PI), limit lambda/(1-lambda) (NS-PI)
    double cubic_res = 0.0;      // solver residual (PI only)
    int cubic_iterations = 0;    // solver iterations (PI only)

    // h = g + lambda_sig * z.  Rejects no-signal kinds.
    double public_signal(double g, double z) const;

    // Price at the kind's state variable: h for PI/PT, z for NS kinds.
    double price(double h_or_z) const;

    // Risk-tolerance-adjusted demands.
    double insider_demand(double g, double z) const;
    double uninformed_demand(double h_or_z) const;

    // Share-denominated positions alpha_i * psi.
    double insider_shares(double g, double z) const;
    double uninformed_shares(double h_or_z) const;

    // Perceived price impact_V + impact_M * (psi - psi_I0 + z/alpha_I).
    // psi_I0 must be the Pareto endowment Pi_hat; NS kinds rejected.
    double perceived_price(double psi, double psi_I0, double z) const;
};

// Constructors for the four equilibria.  solve_pi / solve_pt require p_I > 0.
Equilibrium solve_pi(const MarketParams& params);
Equilibrium solve_pt(const MarketParams& params);
Equilibrium solve_no_signal(const MarketParams& params, bool impact);

// Price-reactivity slopes of the two equilibria with respect to the market
// signal (m_g) and the publicly observable combined demand (m_chi).
struct ReactivitySlopes {
    double m_g_pi = 0.0;
    double m_g_pt = 0.0;
    double m_chi_pi = 0.0;
    double m_chi_pt = 0.0;
};

// Requires both equilibria solved from identical params.
ReactivitySlopes slopes(const Equilibrium& eq_pi, const Equilibrium& eq_pt);

} // namespace impacteq
