#include "impacteq/multiasset.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "impacteq/errors.hpp"

namespace impacteq {

namespace {

constexpr double kSymTol = 1e-12;

void require_spd(const Eigen::MatrixXd& m, const char* field) {
    if (m.rows() != m.cols())
        throw validation_error(field, std::string(field) + " must be square");
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if (((m - m.transpose()).cwiseAbs().maxCoeff()) > kSymTol * scale)
        throw validation_error(field, std::string(field) + " must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw validation_error(field,
                               std::string(field) + " must be positive definite");
}

void require_dim(const Eigen::VectorXd& v, int d, const char* field) {
    if (v.size() != d)
        throw validation_error(field, std::string(field) + " has wrong dimension");
}

Eigen::MatrixXd nan_matrix(int d) {
    return Eigen::MatrixXd::Constant(d, d,
                                     std::numeric_limits<double>::quiet_NaN());
}

} // namespace

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) {
    require_spd(m, "matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw solver_error("eigendecomposition failed for SPD square root");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("matrix", "matrix must be positive definite");
    return es.eigenvectors() *
           es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

void AssetModel::validate() const {
    if (d < 1) throw validation_error("d", "d must be >= 1");
    detail::require_positive(alpha_I, "alpha_I");
    detail::require_positive(alpha_U, "alpha_U");
    detail::require_non_negative(p_I, "p_I");
    detail::require_positive(p_N, "p_N");
    if (mu_X.size() != d) throw validation_error("mu_X", "mu_X has wrong dimension");
    if (Pi.size() != d) throw validation_error("Pi", "Pi has wrong dimension");
    if (prec_X.rows() != d || prec_X.cols() != d)
        throw validation_error("prec_X", "prec_X has wrong dimension");
    if (!mu_X.allFinite()) throw validation_error("mu_X", "mu_X must be finite");
    if (!Pi.allFinite()) throw validation_error("Pi", "Pi must be finite");
    if (!prec_X.allFinite())
        throw validation_error("prec_X", "prec_X must be finite");
    require_spd(prec_X, "prec_X");
}

MarketParams AssetModel::scalar_params() const {
    return MarketParams{alpha_I, alpha_U, p_I, p_N, 0.0};
}

Eigen::VectorXd AssetModel::Pi_hat() const { return Pi / (alpha_I + alpha_U); }

Eigen::VectorXd AssetModel::p_Q0() const {
    return mu_X - prec_X.llt().solve(Pi_hat());
}

AssetModel AssetModel::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    AssetModel m;
    m.d = j.at("d").get<int>();
    if (m.d < 1) throw validation_error("d", "d must be >= 1");
    const auto mu = j.at("mu_X").get<std::vector<double>>();
    const auto pi = j.at("Pi").get<std::vector<double>>();
    const auto rows = j.at("prec_X").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(mu.size()) != m.d)
        throw validation_error("mu_X", "mu_X has wrong dimension");
    if (static_cast<int>(pi.size()) != m.d)
        throw validation_error("Pi", "Pi has wrong dimension");
    if (static_cast<int>(rows.size()) != m.d)
        throw validation_error("prec_X", "prec_X has wrong dimension");
    m.mu_X = Eigen::Map<const Eigen::VectorXd>(mu.data(), m.d);
    m.Pi = Eigen::Map<const Eigen::VectorXd>(pi.data(), m.d);
    m.prec_X.resize(m.d, m.d);
    for (int r = 0; r < m.d; ++r) {
        if (static_cast<int>(rows[r].size()) != m.d)
            throw validation_error("prec_X", "prec_X has a ragged row");
        for (int c = 0; c < m.d; ++c) m.prec_X(r, c) = rows[r][c];
    }
    m.p_I = j.at("p_I").get<double>();
    m.p_N = j.at("p_N").get<double>();
    m.alpha_I = j.at("alpha_I").get<double>();
    m.alpha_U = j.at("alpha_U").get<double>();
    m.validate();
    return m;
}

MatrixEquilibrium solve_pi_multi(const AssetModel& model) {
    model.validate();
    if (!(model.p_I > 0.0))
        throw validation_error("p_I", "solve_pi_multi requires p_I > 0; use "
                                      "solve_no_signal_multi for the limit");
    const DerivedParams dp = derive(model.scalar_params());
    const double y = solve_cubic(dp).y_hat;
    const double p_I = model.p_I;
    const int d = model.d;
    const Eigen::MatrixXd& P_X = model.prec_X;
    const Eigen::MatrixXd P_X_inv =
        P_X.llt().solve(Eigen::MatrixXd::Identity(d, d));

    MatrixEquilibrium eq;
    eq.kind = EquilibriumKind::PriceImpact;
    eq.model = model;
    eq.y_hat = y;
    eq.p_Q0 = model.p_Q0();
    eq.V_p = eq.p_Q0;

    eq.M_p = (y / (1.0 + p_I)) * P_X_inv;
    eq.Mcal = (p_I / (1.0 + 2.0 * y)) * P_X;
    eq.Lambda = ((1.0 + y) / (model.alpha_I * p_I)) * P_X_inv;
    eq.p_pub_scalar =
        dp.kappa * p_I * p_I / ((1.0 + y) * (1.0 + y) + dp.kappa * p_I);
    eq.P_pub = eq.p_pub_scalar * P_X;

    eq.price_slope_mat = eq.M_p * eq.Mcal;
    eq.insider_pq0_mat = (1.0 / (1.0 + y)) * P_X;
    eq.insider_g_mat = (p_I / (1.0 + y)) * P_X;
    eq.insider_price_mat = ((1.0 + p_I) / (1.0 + y)) * P_X;
    return eq;
}

MatrixEquilibrium solve_pt_multi(const AssetModel& model,
                                 const std::optional<Eigen::MatrixXd>& general_P_I,
                                 const std::optional<Eigen::MatrixXd>& general_P_N) {
    model.validate();
    const bool proportional = !general_P_I && !general_P_N;
    if (proportional && !(model.p_I > 0.0))
        throw validation_error("p_I", "solve_pt_multi requires p_I > 0; use "
                                      "solve_no_signal_multi for the limit");
    if (general_P_I.has_value() != general_P_N.has_value())
        throw validation_error("general_P_N",
                               "supply both general precision matrices or neither");

    const int d = model.d;
    const Eigen::MatrixXd& P_X = model.prec_X;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd P_X_inv = P_X.llt().solve(I);

    Eigen::MatrixXd P_I, P_N;
    if (proportional) {
        P_I = model.p_I * P_X;
        P_N = model.p_N * P_X_inv;
    } else {
        require_spd(*general_P_I, "general_P_I");
        require_spd(*general_P_N, "general_P_N");
        if (general_P_I->rows() != d || general_P_N->rows() != d)
            throw validation_error("general_P_I",
                                   "general precision has wrong dimension");
        P_I = *general_P_I;
        P_N = *general_P_N;
    }

    MatrixEquilibrium eq;
    eq.kind = EquilibriumKind::PriceTaking;
    eq.model = model;
    eq.y_hat = std::numeric_limits<double>::quiet_NaN();
    eq.p_Q0 = model.p_Q0();
    eq.V_p = eq.p_Q0;

    const Eigen::MatrixXd P_I_inv = P_I.llt().solve(I);
    eq.Lambda = P_I_inv / model.alpha_I;
    const Eigen::MatrixXd noise_cov =
        P_I_inv + P_I_inv * P_N.llt().solve(P_I_inv) /
                      (model.alpha_I * model.alpha_I);
    eq.P_pub = noise_cov.llt().solve(I);

    eq.price_slope_mat =
        (model.alpha_I * (P_I + P_X) + model.alpha_U * (eq.P_pub + P_X))
            .llt()
            .solve(model.alpha_I * P_I + model.alpha_U * eq.P_pub);
    eq.insider_g_mat = P_I;
    eq.insider_price_mat = P_I + P_X;
    eq.insider_pq0_mat = P_X;
    eq.Mcal = nan_matrix(d); // the demand-response matrix is a PI object

    if (proportional) {
        const DerivedParams dp = derive(model.scalar_params());
        eq.p_pub_scalar = dp.kappa * model.p_I * model.p_I /
                          (1.0 + dp.kappa * model.p_I);
        // Reverse combined-demand slope, the PT linear-impact identity.
        eq.M_p = ((dp.lambda + dp.kappa * model.p_I) / (1.0 - dp.lambda)) * P_X_inv;
    } else {
        eq.p_pub_scalar = std::numeric_limits<double>::quiet_NaN();
        // General reverse-demand map via the clearing identity:
        // p - p_Q0 = (alpha_I/alpha_U) ((P_pub+P_X) - P_pub S^{-1})^{-1} chi.
        const Eigen::MatrixXd S_inv =
            eq.price_slope_mat.partialPivLu().solve(I);
        eq.M_p = (model.alpha_I / model.alpha_U) *
                 ((eq.P_pub + P_X) - eq.P_pub * S_inv).partialPivLu().solve(I);
    }
    return eq;
}

MatrixEquilibrium solve_no_signal_multi(const AssetModel& model, bool impact) {
    model.validate();
    const DerivedParams dp = derive(model.scalar_params());
    const int d = model.d;
    const double lam = dp.lambda;
    const double aI = model.alpha_I;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd P_X_inv = model.prec_X.llt().solve(I);

    MatrixEquilibrium eq;
    eq.kind = impact ? EquilibriumKind::NoSignalPriceImpact
                     : EquilibriumKind::NoSignalPriceTaking;
    eq.model = model;
    eq.p_Q0 = model.p_Q0();
    eq.V_p = eq.p_Q0;
    eq.Lambda = nan_matrix(d);
    eq.Mcal = nan_matrix(d);
    eq.P_pub = Eigen::MatrixXd::Zero(d, d);
    eq.price_slope_mat = Eigen::MatrixXd::Zero(d, d);
    eq.insider_g_mat = Eigen::MatrixXd::Zero(d, d);
    eq.insider_price_mat = Eigen::MatrixXd::Zero(d, d);
    eq.insider_pq0_mat = Eigen::MatrixXd::Zero(d, d);
    eq.M_p = (lam / (1.0 - lam)) * P_X_inv;

    if (impact) {
        eq.y_hat = lam / (1.0 - lam);
        eq.price_z_mat = (lam / ((1.0 - lam * lam) * aI)) * P_X_inv;
        eq.insider_z_mat = -(lam / ((1.0 + lam) * aI)) * I;
        eq.uninformed_z_mat = -(lam / ((1.0 - lam * lam) * aI)) * I;
    } else {
        eq.y_hat = std::numeric_limits<double>::quiet_NaN();
        eq.price_z_mat = (lam / aI) * P_X_inv;
        eq.insider_z_mat = -(lam / aI) * I;
        eq.uninformed_z_mat = -(lam / aI) * I;
    }
    return eq;
}

Eigen::VectorXd MatrixEquilibrium::public_signal(const Eigen::VectorXd& g,
                                                 const Eigen::VectorXd& z) const {
    if (is_no_signal(kind))
        throw validation_error("kind", "no market signal exists for NS kinds");
    require_dim(g, model.d, "g");
    require_dim(z, model.d, "z");
    return g + Lambda * z;
}

Eigen::VectorXd MatrixEquilibrium::price(const Eigen::VectorXd& h_or_z) const {
    require_dim(h_or_z, model.d, "h_or_z");
    if (is_no_signal(kind)) return p_Q0 + price_z_mat * h_or_z;
    return p_Q0 + price_slope_mat * (h_or_z - p_Q0);
}

Eigen::VectorXd MatrixEquilibrium::insider_demand(const Eigen::VectorXd& g,
                                                  const Eigen::VectorXd& z) const {
    require_dim(g, model.d, "g");
    require_dim(z, model.d, "z");
    if (is_no_signal(kind)) return model.Pi_hat() + insider_z_mat * z;
    const Eigen::VectorXd p = price(public_signal(g, z));
    return model.Pi_hat() + insider_pq0_mat * p_Q0 + insider_g_mat * g -
           insider_price_mat * p;
}

Eigen::VectorXd
MatrixEquilibrium::uninformed_demand(const Eigen::VectorXd& h_or_z) const {
    require_dim(h_or_z, model.d, "h_or_z");
    if (is_no_signal(kind)) return model.Pi_hat() + uninformed_z_mat * h_or_z;
    const Eigen::VectorXd p = price(h_or_z);
    return model.Pi_hat() + model.prec_X * p_Q0 + P_pub * h_or_z -
           (P_pub + model.prec_X) * p;
}

Eigen::VectorXd
MatrixEquilibrium::perceived_price(const Eigen::VectorXd& psi,
                                   const Eigen::VectorXd& psi_I0,
                                   const Eigen::VectorXd& z) const {
    if (is_no_signal(kind))
        throw validation_error("kind",
                               "perceived_price is undefined for NS kinds");
    require_dim(psi, model.d, "psi");
    require_dim(psi_I0, model.d, "psi_I0");
    require_dim(z, model.d, "z");
    const Eigen::VectorXd pareto = model.Pi_hat();
    if ((psi_I0 - pareto).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + pareto.cwiseAbs().maxCoeff()))
        throw validation_error("psi_I0",
                               "non-Pareto initial position rejected: psi_I0 "
                               "must equal Pi_hat");
    return V_p + M_p * (psi - psi_I0 + z / model.alpha_I);
}

double clearing_matrix_residual(const MatrixEquilibrium& eq,
                                const AssetModel& model) {
    if (eq.kind != EquilibriumKind::PriceImpact)
        throw validation_error("kind", "clearing_matrix_residual is a PI check");
    const int d = model.d;
    const Eigen::MatrixXd Mcal_inv =
        eq.Mcal.partialPivLu().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd resid =
        (model.alpha_I / model.alpha_U) * Eigen::MatrixXd::Identity(d, d) +
        eq.P_pub * Mcal_inv - (eq.P_pub + model.prec_X) * eq.M_p;
    return resid.norm();
}

CEReport ce_ex_ante_multi(const AssetModel& model) {
    model.validate();
    if (!(model.p_I > 0.0))
        throw validation_error("p_I", "ce_ex_ante_multi requires p_I > 0");
    const DerivedParams dp = derive(model.scalar_params());
    const double y = solve_cubic(dp).y_hat;
    const double p_I = model.p_I;
    const double kap = dp.kappa;
    const double lam = dp.lambda;
    const double dd = static_cast<double>(model.d);

    const Eigen::VectorXd pih = model.Pi_hat();
    const double quad = pih.dot(model.prec_X.llt().solve(pih));
    const double base_core = pih.dot(model.mu_X) - 0.5 * quad;

    const double arg_I_pi = (kap * p_I * (1.0 + p_I) + y * y) /
                            (kap * (1.0 + p_I) * (1.0 + 2.0 * y));
    const double arg_U_pi =
        lam * lam * (kap * p_I + (1.0 + y) * (1.0 + y)) /
        ((1.0 - lam) * (1.0 - lam) * kap * (1.0 + 2.0 * y) * (1.0 + 2.0 * y));
    const double denom = 1.0 + lam * p_I + kap * p_I * (1.0 + p_I);
    const double arg_I_pt =
        ((1.0 - lam) * (1.0 - lam) * kap * p_I +
         (1.0 + p_I) * (lam + kap * p_I) * (lam + kap * p_I)) /
        (kap * denom * denom);
    const double arg_U_pt =
        lam * lam * (1.0 + kap * p_I) / (kap * denom * denom);

    CEReport r;
    r.ce_nsn_I = model.alpha_I * base_core;
    r.ce_nsn_U = model.alpha_U * base_core;
    r.ce_I_pi = r.ce_nsn_I + 0.5 * model.alpha_I * dd * std::log1p(arg_I_pi);
    r.ce_U_pi = r.ce_nsn_U + 0.5 * model.alpha_U * dd * std::log1p(arg_U_pi);
    r.ce_I_pt = r.ce_nsn_I + 0.5 * model.alpha_I * dd * std::log1p(arg_I_pt);
    r.ce_U_pt = r.ce_nsn_U + 0.5 * model.alpha_U * dd * std::log1p(arg_U_pt);
    r.diff_I = r.ce_I_pi - r.ce_I_pt;
    r.diff_U = r.ce_U_pi - r.ce_U_pt;
    return r;
}

InterimCE ce_interim_multi(const AssetModel& model, EquilibriumKind kind,
                           const Eigen::VectorXd& g, const Eigen::VectorXd& z) {
    model.validate();
    if (is_no_signal(kind))
        throw validation_error("kind", "ce_interim_multi is for PI/PT kinds");
    if (!(model.p_I > 0.0))
        throw validation_error("p_I", "ce_interim_multi requires p_I > 0");
    require_dim(g, model.d, "g");
    require_dim(z, model.d, "z");

    const DerivedParams dp = derive(model.scalar_params());
    const double R = dp.R;
    const double beta = dp.beta;
    const double lamI = dp.lambda_I;
    const double lamU = dp.lambda_U;
    const double aI = model.alpha_I;
    const double aU = model.alpha_U;
    const bool pi_kind = (kind == EquilibriumKind::PriceImpact);
    const double y = pi_kind ? solve_cubic(dp).y_hat : 0.0;

    const Eigen::VectorXd pih = model.Pi_hat();
    const Eigen::VectorXd pq0 = model.p_Q0();
    const Eigen::MatrixXd sq = spd_sqrt(model.prec_X);
    const Eigen::MatrixXd isq =
        sq.llt().solve(Eigen::MatrixXd::Identity(model.d, model.d));
    const double quad = pih.dot(model.prec_X.llt().solve(pih));

    const double lambda_scalar = (pi_kind ? (1.0 + y) : 1.0) / (aI * model.p_I);
    const Eigen::VectorXd h = g + lambda_scalar * model.prec_X.llt().solve(z);
    const double p_pub =
        pi_kind
            ? dp.kappa * model.p_I * model.p_I /
                  ((1.0 + y) * (1.0 + y) + dp.kappa * model.p_I)
            : dp.kappa * model.p_I * model.p_I / (1.0 + dp.kappa * model.p_I);

    const double base_I =
        -0.5 * aI * R *
        (quad - 2.0 * pih.dot(model.mu_X + (1.0 - R) / R * g));
    const double base_U =
        -0.5 * aU / (1.0 + p_pub) *
        (quad - 2.0 * pih.dot(model.mu_X + p_pub * h));

    const Eigen::VectorXd zn = z / aI;
    InterimCE ce;
    if (pi_kind) {
        const Eigen::VectorXd v = (1.0 - R) / R * (sq * (g - pq0)) - y * (isq * zn);
        ce.ce_I = base_I + 0.5 * aI * R / (1.0 + 2.0 * y) * v.squaredNorm();
        const double one_py2 = (1.0 + y) * (1.0 + y);
        const double coef = aU * lamI * lamI * (1.0 - R) * (1.0 - R) *
                            (beta + one_py2) /
                            (2.0 * lamU * lamU * R * (beta + R * one_py2) *
                             (1.0 + 2.0 * y) * (1.0 + 2.0 * y));
        ce.ce_U = base_U + coef * (sq * (h - pq0)).squaredNorm();
    } else {
        const double denom = (lamI + beta + R * lamU) * (lamI + beta + R * lamU);
        const Eigen::VectorXd v =
            (1.0 - R) * lamU * (sq * (g - pq0)) - (lamI + beta) * (isq * zn);
        ce.ce_I = base_I + 0.5 * aI * R / denom * v.squaredNorm();
        const double coef = aU * lamI * lamI * (1.0 - R) * (1.0 - R) * R *
                            (1.0 + beta) / (2.0 * denom * (R + beta));
        ce.ce_U = base_U + coef * (sq * (h - pq0)).squaredNorm();
    }
    return ce;
}

} // namespace impacteq
