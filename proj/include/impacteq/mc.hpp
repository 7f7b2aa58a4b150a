#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "impacteq/equilibrium.hpp"
#include "impacteq/multiasset.hpp"
#include "impacteq/params.hpp"
#include "impacteq/rng.hpp"

namespace impacteq {

// Monte Carlo configuration.  Identical configs yield bitwise-identical
// reports: the generator is counter-based and shard partials are merged in
// fixed index order, so thread scheduling cannot perturb results.  (Changing
// the shard size changes only the merge grouping; the effect is bounded by
// floating-point associativity, ~1e-13 relative.)
struct SimConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 0;
    std::variant<MarketParams, AssetModel> market = MarketParams{};
    bool antithetic = false;

    void validate() const; // n_paths >= 2, market valid
};

// One verification result: an estimate with its standard error and the
// closed-form target it is checked against.
struct McReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    double target = 0.0;
    double z_score = 0.0;
};

// Scalar market draws: X ~ N(0,1), G = X + Z_I, Z_N noise demand.
struct ScalarDraws {
    std::vector<double> x, g, z;
};

// Multi-asset draws, one column per path.
struct MultiDraws {
    Eigen::MatrixXd x, g, z;
};

// Samples (X, G, Z_N) under the physical measure.  Requires p_I > 0 (the
// G column is meaningless otherwise).  Deterministic in (seed, index); with
// antithetic on, odd paths mirror the preceding even path's normals.
ScalarDraws sample_market(const SimConfig& config);
MultiDraws sample_market_multi(const SimConfig& config);

// Max |alpha_I psi_I + alpha_U psi_U + z - Pi| over the draws (exact affine
// identity; anything above rounding noise indicates a broken equilibrium).
double verify_clearing(const Equilibrium& eq, const ScalarDraws& draws);
double verify_clearing(const MatrixEquilibrium& eq, const MultiDraws& draws);

// First-order optimality of both traders' policies: evaluates each trader's
// conditional log objective in closed form (Gaussian moment generating
// function) at psi_hat and psi_hat + eps for every eps in the grid, and
// returns the largest amount by which a perturbation improved the objective.
// The PI insider's objective includes the impact of eps on the perceived
// price.  epsilon_grid must be symmetric about 0.
double verify_optimality(const Equilibrium& eq, const ScalarDraws& draws,
                         const std::vector<double>& epsilon_grid);
double verify_optimality(const MatrixEquilibrium& eq, const MultiDraws& draws,
                         const std::vector<double>& epsilon_grid);

enum class Trader { Insider, Uninformed };

// CE estimation level: ex-ante averages over (X, G, Z_N); interim draws X
// from its conditional law given (G = g, Z_N = z) (insider) or given
// H = public_signal(g, z) (uninformed).
struct CeLevel {
    bool ex_ante = true;
    double g = 0.0;
    double z = 0.0;
    static CeLevel exante() { return {true, 0.0, 0.0}; }
    static CeLevel interim(double g, double z) { return {false, g, z}; }
};

struct CeLevelMulti {
    bool ex_ante = true;
    Eigen::VectorXd g, z;
};

// CE_est = -alpha * log(mean exp(-W_hat)) with W_hat the risk-tolerance
// adjusted wealth Pi_hat p + psi_hat (X - p); the log-mean-exp is shift
// stabilized and the standard error comes from the delta method.
McReport estimate_ce(const Equilibrium& eq, const SimConfig& config,
                     Trader trader, const CeLevel& level, double target);
McReport estimate_ce(const MatrixEquilibrium& eq, const SimConfig& config,
                     Trader trader, const CeLevelMulti& level, double target);

// Estimates the precision of the public-signal noise H - X = Z_I + Lambda Z_N
// (reciprocal sample variance) and checks it against the composition
// 1 / (1/p_I + Lambda^2/p_N) = p_pub.  The report's estimate/target are the
// noise variance (z-score on the variance scale).
McReport estimate_public_precision(const ScalarDraws& draws,
                                   const Equilibrium& eq);

// Multi-asset version: max entrywise |z| between the sample covariance of
// H - X and the target P_I^{-1} + Lambda P_N^{-1} Lambda'.
McReport estimate_public_precision(const MultiDraws& draws,
                                   const MatrixEquilibrium& eq);

// One named check of the verification suite.
struct SuiteEntry {
    std::string name;
    McReport report;
    bool pass = false;
};

// The standard scalar verification suite: clearing and optimality for all
// kinds, ex-ante + interim CE spot checks against the closed forms, and the
// public-precision estimate, at the config's path count.  Checks with
// |z_score| > 4 are re-run once with seed+1 and fail hard on repeat.
// corrupt_insider scales the insider's signal coefficient by 1.01 first
// (negative control; the suite must then fail).
std::vector<SuiteEntry> run_suite(const MarketParams& params,
                                  const SimConfig& config,
                                  bool corrupt_insider = false);

} // namespace impacteq
