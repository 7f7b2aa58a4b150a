#include "impacteq/serde.hpp"

#include <cmath>

#include "impacteq/errors.hpp"

namespace impacteq {

namespace {

nlohmann::json params_json(const MarketParams& p) {
    return {{"alpha_I", p.alpha_I},
            {"alpha_U", p.alpha_U},
            {"p_I", p.p_I},
            {"p_N", p.p_N},
            {"Pi", p.Pi}};
}

nlohmann::json derived_json(const DerivedParams& d) {
    return {{"kappa", d.kappa},   {"lambda", d.lambda},
            {"Pi_hat", d.Pi_hat}, {"p_Q0", d.p_Q0},
            {"beta", d.beta},     {"lambda_I", d.lambda_I},
            {"lambda_U", d.lambda_U}, {"R", d.R}};
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

} // namespace

nlohmann::json to_json(const Equilibrium& eq) {
    nlohmann::json j{{"kind", kind_name(eq.kind)},
                     {"params", params_json(eq.params)},
                     {"derived", derived_json(eq.derived)},
                     {"price_intercept", eq.price_intercept},
                     {"price_slope", eq.price_slope},
                     {"impact_M", eq.impact_M},
                     {"impact_V", eq.impact_V}};
    if (is_no_signal(eq.kind)) {
        j["insider_z"] = eq.insider_z;
        j["uninformed_z"] = eq.uninformed_z;
        if (eq.kind == EquilibriumKind::NoSignalPriceImpact)
            j["y_hat"] = eq.y_hat;
    } else {
        j["lambda_sig"] = eq.lambda_sig;
        j["p_pub"] = eq.p_pub;
        j["insider_g"] = eq.insider_g;
        j["insider_price"] = eq.insider_price;
        j["insider_pq0"] = eq.insider_pq0;
        j["uninformed_h"] = eq.uninformed_h;
        j["uninformed_price"] = eq.uninformed_price;
        if (eq.kind == EquilibriumKind::PriceImpact) {
            j["y_hat"] = eq.y_hat;
            j["cubic_residual"] = eq.cubic_res;
            j["cubic_iterations"] = eq.cubic_iterations;
        }
    }
    return j;
}

nlohmann::json to_json(const CEReport& r) {
    return {{"ce_nsn_I", r.ce_nsn_I}, {"ce_nsn_U", r.ce_nsn_U},
            {"ce_I_pi", r.ce_I_pi},   {"ce_U_pi", r.ce_U_pi},
            {"ce_I_pt", r.ce_I_pt},   {"ce_U_pt", r.ce_U_pt},
            {"diff_I", r.diff_I},     {"diff_U", r.diff_U}};
}

nlohmann::json to_json(const MatrixEquilibrium& eq) {
    nlohmann::json j{{"kind", kind_name(eq.kind)},
                     {"d", eq.model.d},
                     {"p_Q0", vector_json(eq.p_Q0)},
                     {"V_p", vector_json(eq.V_p)},
                     {"M_p", matrix_json(eq.M_p)}};
    if (is_no_signal(eq.kind)) {
        j["price_z"] = matrix_json(eq.price_z_mat);
        j["insider_z"] = matrix_json(eq.insider_z_mat);
        j["uninformed_z"] = matrix_json(eq.uninformed_z_mat);
        if (eq.kind == EquilibriumKind::NoSignalPriceImpact)
            j["y_hat"] = eq.y_hat;
    } else {
        j["Lambda"] = matrix_json(eq.Lambda);
        j["P_pub"] = matrix_json(eq.P_pub);
        j["price_slope"] = matrix_json(eq.price_slope_mat);
        j["insider_g"] = matrix_json(eq.insider_g_mat);
        j["insider_price"] = matrix_json(eq.insider_price_mat);
        j["insider_pq0"] = matrix_json(eq.insider_pq0_mat);
        if (std::isfinite(eq.p_pub_scalar)) j["p_pub"] = eq.p_pub_scalar;
        if (eq.kind == EquilibriumKind::PriceImpact) {
            j["y_hat"] = eq.y_hat;
            j["Mcal"] = matrix_json(eq.Mcal);
        }
    }
    return j;
}

nlohmann::json to_json(const std::string& name, const McReport& r, bool pass) {
    return {{"check", name},
            {"estimate", r.estimate},
            {"std_error", r.std_error},
            {"n_paths", r.n_paths},
            {"target", r.target},
            {"z_score", r.z_score},
            {"pass", pass}};
}

MarketParams market_params_from_json(const nlohmann::json& j) {
    MarketParams p;
    try {
        p.alpha_I = j.at("alpha_I").get<double>();
        p.alpha_U = j.at("alpha_U").get<double>();
        p.p_I = j.at("p_I").get<double>();
        p.p_N = j.at("p_N").get<double>();
        p.Pi = j.value("Pi", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("config", std::string("bad params JSON: ") + e.what());
    }
    p.validate();
    return p;
}

} // namespace impacteq
