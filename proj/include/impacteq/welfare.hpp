#pragma once

#include <vector>

#include "impacteq/equilibrium.hpp"
#include "impacteq/params.hpp"

namespace impacteq {

// Ex-ante certainty equivalents of both traders in both equilibria, plus the
// no-private-information baseline CE_nsn^i = -(alpha_i/2) Pi_hat^2.
struct CEReport {
    double ce_nsn_I = 0.0;
    double ce_nsn_U = 0.0;
    double ce_I_pi = 0.0;
    double ce_U_pi = 0.0;
    double ce_I_pt = 0.0;
    double ce_U_pt = 0.0;
    double diff_I = 0.0; // ce_I_pi - ce_I_pt (sign parameter-dependent)
    double diff_U = 0.0; // ce_U_pi - ce_U_pt (always >= 0)
};

CEReport ce_ex_ante(const MarketParams& params);

// The precision-to-utility maps: the insider's ex-ante CE equals
// CE_nsn + (alpha_I/2) log(1 + phi) with phi = phi_iota (PI) or phi (PT).
struct PhiPair {
    double phi_iota = 0.0;
    double phi = 0.0;
};

PhiPair phi_maps(double p_I, double kappa, double lambda);

// Interim certainty equivalents after the signals realize: the insider
// conditions on (G = g, Z_N = z), the uninformed on H = public_signal(g, z).
// Scalar specialization of the general formulas with P_X = 1 and mu_X as
// given (the base model normalizes mu_X = 0).
struct InterimCE {
    double ce_I = 0.0;
    double ce_U = 0.0;
};

InterimCE ce_interim(const MarketParams& params, EquilibriumKind kind, double g,
                     double z, double mu_X = 0.0);

// One row of a precision sweep (reproduces the CE-vs-precision figures).
struct SweepRow {
    double p_I = 0.0;
    double ce_I_pi = 0.0;
    double ce_I_pt = 0.0;
};

// Grid must be strictly increasing and positive.
std::vector<SweepRow> precision_sweep(const MarketParams& base,
                                      const std::vector<double>& p_I_grid);

enum class RegionSign { PiBetter, PtBetter, TieWithinTol };

const char* region_sign_name(RegionSign s);

struct RegionPoint {
    double alpha_U = 0.0;
    double p_I = 0.0;
    RegionSign sign = RegionSign::PiBetter;
};

// Left-minus-right margins of the displayed PI-vs-PT comparison inequalities
// (positive = PI weakly better).  Algebraically equivalent in sign to the CE
// differences; classify_region uses the insider margin as its fast sign test.
double insider_region_margin(const MarketParams& params);
double uninformed_region_margin(const MarketParams& params);

// Classifies sign(CE_I_pi - CE_I_pt) on the (alpha_U, p_I) grid at fixed
// (alpha_I, p_N).  Uses the direct comparison inequality of the two log
// arguments (equivalent to the CE difference, cheaper and better
// conditioned); |diff| <= 1e-12 (1 + |CE|) classifies as a tie.
std::vector<RegionPoint> classify_region(double alpha_I, double p_N,
                                         const std::vector<double>& alpha_U_grid,
                                         const std::vector<double>& p_I_grid);

// Small-alpha_I asymptotics of the insider's PI-vs-PT utility gap:
//   (CE_I_pi - CE_I_pt)/alpha_I^3  ->  closed_form  as alpha_I -> 0,
//   closed_form = (1/2)(1+p_I)(1+p_I - alpha_U^2 p_I p_N)
//                 / (alpha_U^2 (1 + alpha_U^2 p_N))          [d = 1]
// The numeric limit is a Richardson extrapolation of the exact ratio over
// alpha_I in {1e-2, 10^-2.5, 1e-3}.
struct AsymptoticCheck {
    double numeric_limit = 0.0;
    double closed_form = 0.0;
    double rel_err = 0.0;
};

AsymptoticCheck asymptotic_check(double alpha_U, double p_I, double p_N);

// Ex-ante expected shifts of the insider's demand and of the price caused by
// the private signal (relative to the no-signal equilibria), plus the
// PI-minus-PT expected order difference.  All proportional to Pi_hat.
// ns_price_gap_coeff is the coefficient c in p_ns_pi(z) - p_ns_pt(z)
// = c * z / alpha_I, returned symbolically (c = lambda^3/(1-lambda^2)).
struct DemandShift {
    double pt_shift = 0.0;       // E[psi_I_pt - psi_ns_pt]
    double pi_shift = 0.0;       // E[psi_I_pi - psi_ns_pi]
    double pi_minus_pt = 0.0;    // E[psi_I_pi - psi_I_pt]
    double price_shift_pt = 0.0; // E[p_pt - p_ns_pt]
    double price_shift_pi = 0.0; // E[p_pi - p_ns_pi]
    double ns_price_gap_coeff = 0.0;
};

DemandShift expected_demand_shift(const MarketParams& params);

// Almost-sure p_I -> 0 limits of the four interim certainty equivalents at
// noise realization z.
struct NoSignalInterimLimits {
    double ce_I_pt = 0.0;
    double ce_I_pi = 0.0;
    double ce_U_pt = 0.0;
    double ce_U_pi = 0.0;
};

NoSignalInterimLimits no_signal_interim_limits(const MarketParams& params,
                                               double z);

} // namespace impacteq
