#include "impacteq/welfare.hpp"

#include <cmath>

#include "impacteq/errors.hpp"

namespace impacteq {

namespace {

double sq(double x) { return x * x; }

// Log arguments of the four ex-ante CE displays.
double log_arg_I_pi(const DerivedParams& d, double p_I, double y) {
    return (d.kappa * p_I * (1.0 + p_I) + y * y) /
           (d.kappa * (1.0 + p_I) * (1.0 + 2.0 * y));
}

double log_arg_U_pi(const DerivedParams& d, double p_I, double y) {
    return sq(d.lambda) * (d.kappa * p_I + sq(1.0 + y)) /
           (sq(1.0 - d.lambda) * d.kappa * sq(1.0 + 2.0 * y));
}

double pt_denom(const DerivedParams& d, double p_I) {
    return 1.0 + d.lambda * p_I + d.kappa * p_I * (1.0 + p_I);
}

double log_arg_I_pt(const DerivedParams& d, double p_I) {
    return (sq(1.0 - d.lambda) * d.kappa * p_I +
            (1.0 + p_I) * sq(d.lambda + d.kappa * p_I)) /
           (d.kappa * sq(pt_denom(d, p_I)));
}

double log_arg_U_pt(const DerivedParams& d, double p_I) {
    return sq(d.lambda) * (1.0 + d.kappa * p_I) /
           (d.kappa * sq(pt_denom(d, p_I)));
}

void require_grid(const std::vector<double>& grid, const char* field) {
    if (grid.size() < 2)
        throw validation_error(field, std::string(field) + " needs >= 2 points");
    double prev = 0.0;
    for (double v : grid) {
        detail::require_positive(v, field);
        if (!(v > prev))
            throw validation_error(field,
                                   std::string(field) +
                                       " must be strictly increasing and positive");
        prev = v;
    }
}

} // namespace

CEReport ce_ex_ante(const MarketParams& params) {
    params.validate();
    if (!(params.p_I > 0.0))
        throw validation_error("p_I", "ce_ex_ante requires p_I > 0");
    const DerivedParams d = derive(params);
    const double y = solve_cubic(d).y_hat;
    const double p_I = params.p_I;

    CEReport r;
    r.ce_nsn_I = -0.5 * params.alpha_I * sq(d.Pi_hat);
    r.ce_nsn_U = -0.5 * params.alpha_U * sq(d.Pi_hat);
    r.ce_I_pi = r.ce_nsn_I + 0.5 * params.alpha_I * std::log1p(log_arg_I_pi(d, p_I, y));
    r.ce_U_pi = r.ce_nsn_U + 0.5 * params.alpha_U * std::log1p(log_arg_U_pi(d, p_I, y));
    r.ce_I_pt = r.ce_nsn_I + 0.5 * params.alpha_I * std::log1p(log_arg_I_pt(d, p_I));
    r.ce_U_pt = r.ce_nsn_U + 0.5 * params.alpha_U * std::log1p(log_arg_U_pt(d, p_I));
    r.diff_I = r.ce_I_pi - r.ce_I_pt;
    r.diff_U = r.ce_U_pi - r.ce_U_pt;
    return r;
}

PhiPair phi_maps(double p_I, double kappa, double lambda) {
    detail::require_positive(p_I, "p_I");
    const DerivedParams d = DerivedParams::from_reduced(kappa, lambda, p_I);
    const double y = solve_cubic(d).y_hat;
    return {log_arg_I_pi(d, p_I, y), log_arg_I_pt(d, p_I)};
}

InterimCE ce_interim(const MarketParams& params, EquilibriumKind kind, double g,
                     double z, double mu_X) {
    params.validate();
    detail::require_finite(g, "g");
    detail::require_finite(z, "z");
    detail::require_finite(mu_X, "mu_X");
    if (is_no_signal(kind))
        throw validation_error("kind",
                               "ce_interim is for PI/PT kinds; use "
                               "no_signal_interim_limits for the p_I = 0 limit");
    if (!(params.p_I > 0.0))
        throw validation_error("p_I", "ce_interim requires p_I > 0");

    const DerivedParams d = derive(params);
    const double R = d.R;
    const double beta = d.beta;
    const double lamI = d.lambda_I;
    const double lamU = d.lambda_U;
    const double aI = params.alpha_I;
    const double aU = params.alpha_U;
    const double p_Q0 = mu_X - d.Pi_hat; // the scalar base model has mu_X = 0
    const double zn = z / aI;

    const bool pi_kind = (kind == EquilibriumKind::PriceImpact);
    const double y = pi_kind ? solve_cubic(d).y_hat : 0.0;
    const double lambda_sig =
        (pi_kind ? (1.0 + y) : 1.0) / (aI * params.p_I);
    const double h = g + lambda_sig * z;
    const double p_pub =
        pi_kind ? d.kappa * sq(params.p_I) / (sq(1.0 + y) + d.kappa * params.p_I)
                : d.kappa * sq(params.p_I) / (1.0 + d.kappa * params.p_I);

    // Endowed-wealth base terms conditional on the trader's information.
    const double base_I =
        -0.5 * aI * R *
        (sq(d.Pi_hat) - 2.0 * d.Pi_hat * (mu_X + (1.0 - R) / R * g));
    const double base_U =
        -0.5 * aU / (1.0 + p_pub) *
        (sq(d.Pi_hat) - 2.0 * d.Pi_hat * (mu_X + p_pub * h));

    InterimCE ce;
    if (pi_kind) {
        ce.ce_I = base_I + 0.5 * aI * R / (1.0 + 2.0 * y) *
                              sq((1.0 - R) / R * (g - p_Q0) - y * zn);
        ce.ce_U = base_U + 0.5 * aU * sq(lamI) * sq(1.0 - R) *
                               (beta + sq(1.0 + y)) /
                               (sq(lamU) * R * (beta + R * sq(1.0 + y)) *
                                sq(1.0 + 2.0 * y)) *
                               sq(h - p_Q0);
    } else {
        const double denom = sq(lamI + beta + R * lamU);
        ce.ce_I = base_I + 0.5 * aI * R / denom *
                              sq((1.0 - R) * lamU * (g - p_Q0) - (lamI + beta) * zn);
        ce.ce_U = base_U + 0.5 * aU * sq(lamI) * sq(1.0 - R) * R * (1.0 + beta) /
                               (denom * (R + beta)) * sq(h - p_Q0);
    }
    return ce;
}

std::vector<SweepRow> precision_sweep(const MarketParams& base,
                                      const std::vector<double>& p_I_grid) {
    require_grid(p_I_grid, "p_I_grid");
    std::vector<SweepRow> rows;
    rows.reserve(p_I_grid.size());
    MarketParams p = base;
    for (double p_I : p_I_grid) {
        p.p_I = p_I;
        const CEReport r = ce_ex_ante(p);
        rows.push_back({p_I, r.ce_I_pi, r.ce_I_pt});
    }
    return rows;
}

const char* region_sign_name(RegionSign s) {
    switch (s) {
        case RegionSign::PiBetter: return "PI_better";
        case RegionSign::PtBetter: return "PT_better";
        case RegionSign::TieWithinTol: return "tie_within_tol";
    }
    return "?";
}

double insider_region_margin(const MarketParams& params) {
    const DerivedParams d = derive(params);
    const double y = solve_cubic(d).y_hat;
    const double p_I = params.p_I;
    const double lhs = (d.kappa * p_I * (1.0 + p_I) + y * y) /
                       ((1.0 + p_I) * (1.0 + 2.0 * y));
    const double rhs = (sq(1.0 - d.lambda) * d.kappa * p_I +
                        (1.0 + p_I) * sq(d.lambda + d.kappa * p_I)) /
                       sq(pt_denom(d, p_I));
    return lhs - rhs;
}

double uninformed_region_margin(const MarketParams& params) {
    const DerivedParams d = derive(params);
    const double y = solve_cubic(d).y_hat;
    const double p_I = params.p_I;
    const double lhs =
        (d.kappa * p_I + sq(1.0 + y)) / (sq(1.0 - d.lambda) * sq(1.0 + 2.0 * y));
    const double rhs = (1.0 + d.kappa * p_I) / sq(pt_denom(d, p_I));
    return lhs - rhs;
}

std::vector<RegionPoint> classify_region(double alpha_I, double p_N,
                                         const std::vector<double>& alpha_U_grid,
                                         const std::vector<double>& p_I_grid) {
    detail::require_positive(alpha_I, "alpha_I");
    detail::require_positive(p_N, "p_N");
    require_grid(alpha_U_grid, "alpha_U_grid");
    require_grid(p_I_grid, "p_I_grid");

    std::vector<RegionPoint> out;
    out.reserve(alpha_U_grid.size() * p_I_grid.size());
    for (double aU : alpha_U_grid) {
        for (double p_I : p_I_grid) {
            const MarketParams params{alpha_I, aU, p_I, p_N, 0.0};
            const CEReport r = ce_ex_ante(params);
            RegionPoint pt{aU, p_I, RegionSign::TieWithinTol};
            if (std::abs(r.diff_I) > 1e-12 * (1.0 + std::abs(r.ce_I_pi)))
                pt.sign = insider_region_margin(params) > 0.0
                              ? RegionSign::PiBetter
                              : RegionSign::PtBetter;
            out.push_back(pt);
        }
    }
    return out;
}

AsymptoticCheck asymptotic_check(double alpha_U, double p_I, double p_N) {
    detail::require_positive(alpha_U, "alpha_U");
    detail::require_positive(p_I, "p_I");
    detail::require_positive(p_N, "p_N");
    const double aU2pN = alpha_U * alpha_U * p_N;
    if (!std::isfinite(aU2pN) || !std::isfinite(aU2pN * p_I))
        throw validation_error("alpha_U", "alpha_U too extreme: overflow in "
                                          "alpha_U^2 * p_N");

    AsymptoticCheck out;
    out.closed_form = 0.5 * (1.0 + p_I) * (1.0 + p_I - aU2pN * p_I) /
                      (alpha_U * alpha_U * (1.0 + aU2pN));

    // Exact ratio (CE_I_pi - CE_I_pt)/alpha_I^3 along a decreasing alpha_I
    // sequence, then first-order Richardson on the finest pair.
    const double alphas[3] = {1e-2, std::pow(10.0, -2.5), 1e-3};
    double ratio[3];
    for (int i = 0; i < 3; ++i) {
        const double a = alphas[i];
        const PhiPair ph = phi_maps(p_I, a * a * p_N, a / (a + alpha_U));
        const double diff =
            0.5 * a * (std::log1p(ph.phi_iota) - std::log1p(ph.phi));
        ratio[i] = diff / (a * a * a);
    }
    out.numeric_limit = (alphas[1] * ratio[2] - alphas[2] * ratio[1]) /
                        (alphas[1] - alphas[2]);
    out.rel_err = out.closed_form != 0.0
                      ? std::abs(out.numeric_limit - out.closed_form) /
                            std::abs(out.closed_form)
                      : std::abs(out.numeric_limit);
    return out;
}

DemandShift expected_demand_shift(const MarketParams& params) {
    params.validate();
    if (!(params.p_I > 0.0))
        throw validation_error("p_I", "expected_demand_shift requires p_I > 0");
    const DerivedParams d = derive(params);
    const double y = solve_cubic(d).y_hat;
    const double p_I = params.p_I;
    const double lam = d.lambda;
    const double p_U = d.kappa * sq(p_I) / (1.0 + d.kappa * p_I);

    DemandShift s;
    s.pt_shift = (1.0 - lam) * (p_I - p_U) /
                 (1.0 + lam * p_I + (1.0 - lam) * p_U) * d.Pi_hat;
    s.pi_shift = p_I / (1.0 + 2.0 * y) * d.Pi_hat;
    s.pi_minus_pt =
        p_I * (1.0 / (1.0 + 2.0 * y) - (1.0 - lam) / pt_denom(d, p_I)) * d.Pi_hat;
    s.price_shift_pt = (lam * p_I + (1.0 - lam) * p_U) /
                       (1.0 + lam * p_I + (1.0 - lam) * p_U) * d.Pi_hat;
    s.price_shift_pi =
        p_I * y / ((1.0 + p_I) * (1.0 + 2.0 * y)) * d.Pi_hat;
    s.ns_price_gap_coeff = lam * lam * lam / (1.0 - lam * lam);
    return s;
}

NoSignalInterimLimits no_signal_interim_limits(const MarketParams& params,
                                               double z) {
    params.validate();
    detail::require_finite(z, "z");
    const DerivedParams d = derive(params);
    const double lam = d.lambda;
    const double aI = params.alpha_I;
    const double aU = params.alpha_U;
    const double base_I = -0.5 * aI * sq(d.Pi_hat);
    const double base_U = -0.5 * aU * sq(d.Pi_hat);
    const double one_m_lam2 = 1.0 - lam * lam;

    NoSignalInterimLimits lim;
    lim.ce_I_pt = base_I + sq(lam) * sq(z) / (2.0 * aI);
    lim.ce_I_pi = base_I + sq(lam) * sq(z) / (2.0 * one_m_lam2 * aI);
    lim.ce_U_pt = base_U + aU * sq(lam) * sq(z) / (2.0 * sq(aI));
    lim.ce_U_pi = base_U + aU * sq(lam) * sq(z) / (2.0 * sq(aI) * sq(one_m_lam2));
    return lim;
}

} // namespace impacteq
