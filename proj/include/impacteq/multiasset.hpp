#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "impacteq/equilibrium.hpp"
#include "impacteq/params.hpp"
#include "impacteq/welfare.hpp"

namespace impacteq {

// d-asset market primitives under the precision-proportionality assumption:
// the payoff is X ~ N(mu_X, prec_X^{-1}) and the signal / noise precisions
// are the implied matrices P_I = p_I * prec_X and P_N = p_N * prec_X^{-1}
// (never stored independently).
struct AssetModel {
    int d = 1;
    Eigen::VectorXd mu_X;
    Eigen::MatrixXd prec_X; // symmetric positive definite
    double p_I = 1.0;
    double p_N = 1.0;
    double alpha_I = 1.0;
    double alpha_U = 1.0;
    Eigen::VectorXd Pi;

    void validate() const; // symmetry to 1e-12, SPD via factorization

    MarketParams scalar_params() const; // the reduced (kappa, lambda) carrier
    Eigen::VectorXd Pi_hat() const;     // Pi / (alpha_I + alpha_U)
    Eigen::VectorXd p_Q0() const;       // mu_X - prec_X^{-1} Pi_hat

    // Parses {d, mu_X: [..], prec_X: [[..]], p_I, p_N, alpha_I, alpha_U,
    // Pi: [..]} (prec_X row-major).
    static AssetModel from_json_text(const std::string& text);
};

// Matrix-coefficient equilibrium.  Under the proportionality assumption every
// displayed matrix is a scalar multiple of prec_X or its inverse; the general
// (non-proportional) price-taking equilibrium is also supported via
// solve_pt_multi's explicit precision override.
//
// Price map:    p(h) = p_Q0 + price_slope_mat * (h - p_Q0)
// Insider:      psi_I = Pi_hat + insider_pq0_mat p_Q0 + insider_g_mat g
//                        - insider_price_mat p(h)
// Uninformed:   psi_U = Pi_hat + prec_X p_Q0 + P_pub h - (P_pub + prec_X) p(h)
// NS kinds:     p(z) = p_Q0 + price_z_mat z,  psi_i = Pi_hat + {i}_z_mat z.
struct MatrixEquilibrium {
    EquilibriumKind kind = EquilibriumKind::PriceTaking;
    AssetModel model;
    double y_hat = 0.0; // scalar cubic root (PI kinds)
    double p_pub_scalar = 0.0; // p_U or p_{U,iota} under the assumption

    Eigen::MatrixXd Lambda;  // signal-loading matrix
    Eigen::MatrixXd M_p;     // perceived-impact matrix
    Eigen::MatrixXd Mcal;    // demand-response matrix (PI)
    Eigen::MatrixXd P_pub;   // public precision matrix
    Eigen::VectorXd p_Q0;
    Eigen::VectorXd V_p;     // impact intercept (= p_Q0)

    Eigen::MatrixXd price_slope_mat;
    Eigen::MatrixXd insider_g_mat;
    Eigen::MatrixXd insider_price_mat;
    Eigen::MatrixXd insider_pq0_mat;
    Eigen::MatrixXd price_z_mat;       // NS kinds
    Eigen::MatrixXd insider_z_mat;     // NS kinds
    Eigen::MatrixXd uninformed_z_mat;  // NS kinds

    Eigen::VectorXd public_signal(const Eigen::VectorXd& g,
                                  const Eigen::VectorXd& z) const;
    Eigen::VectorXd price(const Eigen::VectorXd& h_or_z) const;
    Eigen::VectorXd insider_demand(const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& z) const;
    Eigen::VectorXd uninformed_demand(const Eigen::VectorXd& h_or_z) const;
    Eigen::VectorXd perceived_price(const Eigen::VectorXd& psi,
                                    const Eigen::VectorXd& psi_I0,
                                    const Eigen::VectorXd& z) const;
};

MatrixEquilibrium solve_pi_multi(const AssetModel& model);

// When general_P_I / general_P_N are supplied (both SPD), builds the
// price-taking equilibrium for those precisions instead of the
// proportionality-implied ones.
MatrixEquilibrium solve_pt_multi(
    const AssetModel& model,
    const std::optional<Eigen::MatrixXd>& general_P_I = std::nullopt,
    const std::optional<Eigen::MatrixXd>& general_P_N = std::nullopt);

MatrixEquilibrium solve_no_signal_multi(const AssetModel& model, bool impact);

// Frobenius norm of (alpha_I/alpha_U) I + P_pub Mcal^{-1} - (P_pub + P_X) M_p,
// the matrix clearing equation the cubic root enforces.  PI kinds only.
double clearing_matrix_residual(const MatrixEquilibrium& eq,
                                const AssetModel& model);

// Ex-ante certainty equivalents, d-dimensional: baselines
// alpha_i (Pi_hat' mu_X - Pi_hat' prec_X^{-1} Pi_hat / 2) plus
// (alpha_i/2) * d * log(1 + ratio) with the scalar ratios of the displays.
CEReport ce_ex_ante_multi(const AssetModel& model);

// Interim certainty equivalents at (G = g, Z_N = z); the uninformed trader
// conditions on h = public_signal(g, z).  Requires the proportionality
// assumption (which AssetModel encodes).
InterimCE ce_interim_multi(const AssetModel& model, EquilibriumKind kind,
                           const Eigen::VectorXd& g, const Eigen::VectorXd& z);

// Symmetric positive-definite square root via eigendecomposition (the
// displays conjugate by P_X^{1/2} symmetrically, so Cholesky is not a
// substitute).  Throws for non-SPD input.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m);

} // namespace impacteq
