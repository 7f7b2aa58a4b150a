#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "impacteq/errors.hpp"
#include "impacteq/rng.hpp"
#include "impacteq/welfare.hpp"

#include "oracles.hpp"

using namespace impacteq;

namespace {
const MarketParams kUnit{1.0, 1.0, 1.0, 1.0, 0.0};

// Unit-case phi values derived from the bisection root.
double phi_iota_unit() {
    const double y = oracle::kYhatUnit;
    return (2.0 + y * y) / (2.0 * (1.0 + 2.0 * y));
}
constexpr double kPhiPtUnit = 4.75 / 12.25;
} // namespace

TEST_CASE("ce_ex_ante: zero supply zeroes the baselines") {
    const CEReport r = ce_ex_ante(kUnit);
    CHECK(r.ce_nsn_I == 0.0);
    CHECK(r.ce_nsn_U == 0.0);
    CHECK(r.ce_I_pi > 0.0); // log arguments exceed 0, CE exceeds baseline
    CHECK(r.ce_U_pt > 0.0);
}

TEST_CASE("ce_ex_ante: unit case equals the phi-map composition") {
    const CEReport r = ce_ex_ante(kUnit);
    CHECK(r.ce_I_pi ==
          doctest::Approx(0.5 * std::log1p(phi_iota_unit())).epsilon(1e-12));
    CHECK(r.ce_I_pt ==
          doctest::Approx(0.5 * std::log1p(kPhiPtUnit)).epsilon(1e-12));
    CHECK(r.diff_I ==
          doctest::Approx(0.5 * (std::log1p(phi_iota_unit()) -
                                 std::log1p(kPhiPtUnit)))
              .epsilon(1e-12));
    CHECK(r.diff_I > 0.0); // equal tolerances: PI weakly better for the insider
}

TEST_CASE("ce_ex_ante: baseline value with supply") {
    MarketParams p = kUnit;
    p.Pi = 3.0; // Pi_hat = 1.5
    const CEReport r = ce_ex_ante(p);
    CHECK(r.ce_nsn_I == doctest::Approx(-0.5 * 1.5 * 1.5).epsilon(1e-15));
    CHECK(r.ce_I_pi > r.ce_nsn_I);
    CHECK(r.ce_U_pt > r.ce_nsn_U);
}

TEST_CASE("phi_maps: reference values and limits") {
    const PhiPair unit = phi_maps(1.0, 1.0, 0.5);
    CHECK(unit.phi_iota == doctest::Approx(0.7236).epsilon(2e-4));
    CHECK(unit.phi == doctest::Approx(0.3878).epsilon(2e-4));
    CHECK(unit.phi_iota == doctest::Approx(phi_iota_unit()).epsilon(1e-12));

    // phi(0+) = lambda^2 / kappa
    CHECK(phi_maps(1e-10, 1.0, 0.5).phi == doctest::Approx(0.25).epsilon(1e-6));
    // phi(infinity) = 0
    CHECK(phi_maps(1e6, 1.0, 0.5).phi < 1e-3);
}

TEST_CASE("ce_interim: corrections vanish at (g, z) = (p_Q0, 0)") {
    for (double Pi : {0.0, 2.0}) {
        MarketParams p = kUnit;
        p.Pi = Pi;
        const double p_Q0 = -Pi / 2.0;
        for (EquilibriumKind k :
             {EquilibriumKind::PriceImpact, EquilibriumKind::PriceTaking}) {
            const InterimCE ce = ce_interim(p, k, p_Q0, 0.0);
            // The remaining term is the endowed-wealth base at G = p_Q0.
            const double R = 0.5;
            const double base_I =
                -0.5 * p.alpha_I * R *
                (0.25 * Pi * Pi - 2.0 * (Pi / 2.0) * (1.0 - R) / R * p_Q0);
            CHECK(ce.ce_I == doctest::Approx(base_I).epsilon(1e-12));
        }
    }
    // Pi = 0, mu_X = 0: everything collapses to zero.
    const InterimCE z0 =
        ce_interim(kUnit, EquilibriumKind::PriceImpact, 0.0, 0.0);
    CHECK(z0.ce_I == 0.0);
    CHECK(z0.ce_U == 0.0);
}

TEST_CASE("ce_interim agrees with the quadrature oracle") {
    // Independent route: evaluate each trader's conditional expected utility
    // by numerical integration over the Bayesian conditional law of X, with
    // the equilibrium policy and price plugged in, and invert the utility.
    const CounterRng rng(59);
    for (int t = 0; t < 40; ++t) {
        MarketParams p;
        p.alpha_I = std::pow(10.0, -0.5 + rng.uniform(1, t));
        p.alpha_U = std::pow(10.0, -0.5 + rng.uniform(2, t));
        p.p_I = std::pow(10.0, -0.6 + 1.2 * rng.uniform(3, t));
        p.p_N = std::pow(10.0, -0.6 + 1.2 * rng.uniform(4, t));
        p.Pi = -1.0 + 3.0 * rng.uniform(5, t);
        const double g = 2.0 * rng.normal(6, t);
        const double z = 1.5 * rng.normal(7, t);

        for (EquilibriumKind k :
             {EquilibriumKind::PriceImpact, EquilibriumKind::PriceTaking}) {
            const Equilibrium eq = (k == EquilibriumKind::PriceImpact)
                                       ? solve_pi(p)
                                       : solve_pt(p);
            const InterimCE ce = ce_interim(p, k, g, z);
            const double h = eq.public_signal(g, z);
            const double price = eq.price(h);
            const double R = eq.derived.R;

            const double ce_I_quad = oracle::ce_by_quadrature(
                p.alpha_I, eq.derived.Pi_hat, eq.insider_demand(g, z), price,
                (1.0 - R) * g, R);
            REQUIRE(std::abs(ce.ce_I - ce_I_quad) <=
                    1e-9 * (1.0 + std::abs(ce_I_quad)));

            const double ce_U_quad = oracle::ce_by_quadrature(
                p.alpha_U, eq.derived.Pi_hat, eq.uninformed_demand(h), price,
                eq.p_pub * h / (1.0 + eq.p_pub), 1.0 / (1.0 + eq.p_pub));
            REQUIRE(std::abs(ce.ce_U - ce_U_quad) <=
                    1e-9 * (1.0 + std::abs(ce_U_quad)));
        }
    }
}

TEST_CASE("ce_interim: rejects no-signal kinds") {
    CHECK_THROWS_AS(
        ce_interim(kUnit, EquilibriumKind::NoSignalPriceImpact, 0.0, 0.0),
        validation_error);
}

TEST_CASE("ce_interim at p_I = 1e-8 matches the no-signal limits") {
    const CounterRng rng(43);
    for (int t = 0; t < 30; ++t) {
        MarketParams p;
        p.alpha_I = std::pow(10.0, -0.5 + rng.uniform(1, t));
        p.alpha_U = std::pow(10.0, -0.5 + rng.uniform(2, t));
        p.p_N = std::pow(10.0, -0.5 + rng.uniform(3, t));
        p.Pi = -1.0 + 3.0 * rng.uniform(4, t);
        p.p_I = 1e-8;
        const double z = -2.0 + 4.0 * rng.uniform(5, t);
        const double g = -1.0 + 2.0 * rng.uniform(6, t);
        const NoSignalInterimLimits lim = no_signal_interim_limits(p, z);
        const InterimCE pi = ce_interim(p, EquilibriumKind::PriceImpact, g, z);
        const InterimCE pt = ce_interim(p, EquilibriumKind::PriceTaking, g, z);
        const double scale_I = 1.0 + std::abs(lim.ce_I_pi);
        const double scale_U = 1.0 + std::abs(lim.ce_U_pi);
        REQUIRE(std::abs(pi.ce_I - lim.ce_I_pi) / scale_I < 1e-4);
        REQUIRE(std::abs(pt.ce_I - lim.ce_I_pt) / scale_I < 1e-4);
        REQUIRE(std::abs(pi.ce_U - lim.ce_U_pi) / scale_U < 1e-4);
        REQUIRE(std::abs(pt.ce_U - lim.ce_U_pt) / scale_U < 1e-4);
    }
}

TEST_CASE("no_signal_interim_limits: baselines at z = 0 and the lambda = 1/2 order") {
    MarketParams p = kUnit;
    p.Pi = 1.0;
    const NoSignalInterimLimits at0 = no_signal_interim_limits(p, 0.0);
    CHECK(at0.ce_I_pt == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(at0.ce_I_pi == at0.ce_I_pt);
    CHECK(at0.ce_U_pt == at0.ce_U_pi);

    const NoSignalInterimLimits lim = no_signal_interim_limits(kUnit, 0.8);
    CHECK(lim.ce_U_pi > lim.ce_I_pi);
    CHECK(lim.ce_I_pi > lim.ce_U_pt);
    CHECK(lim.ce_U_pt == doctest::Approx(lim.ce_I_pt).epsilon(1e-15));
}

TEST_CASE("precision_sweep: PI column strictly increasing, PT endpoint slopes") {
    std::vector<double> grid;
    for (int i = 0; i < 40; ++i)
        grid.push_back(std::pow(10.0, -2.0 + 4.0 * i / 39.0));

    MarketParams p = kUnit; // lambda = 1/2 <= 1/2: PT increasing at 0
    const auto rows = precision_sweep(p, grid);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
        REQUIRE(rows[i].ce_I_pi > rows[i - 1].ce_I_pi);
    CHECK(rows[1].ce_I_pt > rows[0].ce_I_pt);

    // lambda > 1/2 with kappa small: PT decreasing at the left endpoint.
    MarketParams q{4.0, 1.0, 1.0, 0.001, 0.0}; // kappa = 0.016, lambda = 0.8
    const auto rows_q = precision_sweep(q, grid);
    CHECK(rows_q[1].ce_I_pt < rows_q[0].ce_I_pt);
}

TEST_CASE("precision_sweep: grid validation") {
    CHECK_THROWS_AS(precision_sweep(kUnit, {1.0}), validation_error);
    CHECK_THROWS_AS(precision_sweep(kUnit, {1.0, 0.5}), validation_error);
    CHECK_THROWS_AS(precision_sweep(kUnit, {-1.0, 1.0}), validation_error);
}

TEST_CASE("classify_region: equal tolerances classify PI_better") {
    const auto pts = classify_region(0.7, 1.3, {0.3, 0.7, 1.1}, {0.5, 1.0, 2.0});
    REQUIRE(pts.size() == 9);
    for (const RegionPoint& pt : pts) {
        if (std::abs(pt.alpha_U - 0.7) < 1e-12)
            REQUIRE(pt.sign == RegionSign::PiBetter);
    }
    // Row-major outer alpha_U ordering.
    CHECK(pts[0].alpha_U == 0.3);
    CHECK(pts[0].p_I == 0.5);
    CHECK(pts[1].p_I == 1.0);
    CHECK(pts[3].alpha_U == 0.7);
}

TEST_CASE("classify_region: deep PT region at small alpha_I, high alpha_U") {
    // alpha_U^2 p_N > 1/p_I + 1 with margin: (2, 1.0) and (2, 1.5).
    const auto pts = classify_region(0.05, 1.0, {1.0, 2.0}, {1.0, 1.5});
    REQUIRE(pts.size() == 4);
    CHECK(pts[2].sign == RegionSign::PtBetter);
    CHECK(pts[3].sign == RegionSign::PtBetter);
    // alpha_U = 1: predictor 1 + 1/p_I > 1 never met, PI better.
    CHECK(pts[0].sign == RegionSign::PiBetter);
    CHECK(pts[1].sign == RegionSign::PiBetter);
}

TEST_CASE("region margins agree in sign with the CE differences") {
    const CounterRng rng(47);
    for (int t = 0; t < 400; ++t) {
        MarketParams p;
        p.alpha_I = std::pow(10.0, -1.5 + 2.0 * rng.uniform(1, t));
        p.alpha_U = std::pow(10.0, -1.0 + 1.5 * rng.uniform(2, t));
        p.p_I = std::pow(10.0, -1.0 + 2.0 * rng.uniform(3, t));
        p.p_N = std::pow(10.0, -1.0 + 2.0 * rng.uniform(4, t));
        const CEReport r = ce_ex_ante(p);
        if (std::abs(r.diff_I) > 1e-12 * (1.0 + std::abs(r.ce_I_pi)))
            REQUIRE((insider_region_margin(p) > 0.0) == (r.diff_I > 0.0));
        if (std::abs(r.diff_U) > 1e-12 * (1.0 + std::abs(r.ce_U_pi)))
            REQUIRE((uninformed_region_margin(p) > 0.0) == (r.diff_U > 0.0));
    }
}

TEST_CASE("invariant: uninformed dominance and equal-tolerance insider dominance") {
    const CounterRng rng(53);
    for (int t = 0; t < 2000; ++t) {
        const double kappa = std::pow(10.0, -3.0 + 6.0 * rng.uniform(1, t));
        const double lambda = 0.01 + 0.98 * rng.uniform(2, t);
        const double p_I = std::pow(10.0, -3.0 + 5.0 * rng.uniform(3, t));
        MarketParams p;
        p.alpha_I = std::sqrt(kappa);
        p.alpha_U = p.alpha_I * (1.0 - lambda) / lambda;
        p.p_I = p_I;
        p.p_N = 1.0;
        REQUIRE(ce_ex_ante(p).diff_U >= -1e-12);
    }
    for (int t = 0; t < 500; ++t) {
        MarketParams p;
        p.alpha_I = std::pow(10.0, -1.5 + 3.0 * rng.uniform(4, t));
        p.alpha_U = p.alpha_I;
        p.p_I = std::pow(10.0, -3.0 + 5.0 * rng.uniform(5, t));
        p.p_N = std::pow(10.0, -2.0 + 4.0 * rng.uniform(6, t));
        REQUIRE(ce_ex_ante(p).diff_I >= -1e-12);
    }
}

TEST_CASE("asymptotic_check: corrected closed form and Richardson agreement") {
    const AsymptoticCheck c = asymptotic_check(1.0, 1.0, 1.0);
    // (1/2)(1+p)(1+p - aU^2 p pN)/(aU^2 (1 + aU^2 pN)) = (1/2)(2)(1)/(2) = 1/2.
    CHECK(c.closed_form == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.rel_err < 1e-2);
    CHECK(c.numeric_limit == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("asymptotic_check: sign flips exactly at alpha_U^2 p_N = 1/p_I + 1") {
    const double p_I = 0.8, p_N = 1.5;
    const double a_star = std::sqrt((1.0 / p_I + 1.0) / p_N);
    CHECK(asymptotic_check(a_star * 0.98, p_I, p_N).closed_form > 0.0);
    CHECK(asymptotic_check(a_star * 1.02, p_I, p_N).closed_form < 0.0);
    // The numeric limit flips with it.
    CHECK(asymptotic_check(a_star * 0.90, p_I, p_N).numeric_limit > 0.0);
    CHECK(asymptotic_check(a_star * 1.10, p_I, p_N).numeric_limit < 0.0);
}

TEST_CASE("expected_demand_shift: zero supply, risk-tolerance sign flip") {
    CHECK(expected_demand_shift(kUnit).pt_shift == 0.0);
    CHECK(expected_demand_shift(kUnit).pi_minus_pt == 0.0);

    MarketParams big{100.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(expected_demand_shift(big).pi_minus_pt > 0.0);
    MarketParams small{1e-3, 1.0, 1.0, 1.0, 1.0};
    CHECK(expected_demand_shift(small).pi_minus_pt < 0.0);

    MarketParams p = kUnit;
    p.Pi = 2.0;
    const DemandShift s = expected_demand_shift(p);
    CHECK(s.pt_shift > 0.0);
    CHECK(s.pi_shift > 0.0);
    CHECK(s.price_shift_pt > s.price_shift_pi); // m_g > m_g_iota
    CHECK(s.ns_price_gap_coeff ==
          doctest::Approx(0.125 / 0.75).epsilon(1e-15)); // lambda^3/(1-lambda^2)
}
