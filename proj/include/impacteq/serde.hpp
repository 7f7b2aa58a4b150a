#pragma once

#include <string>

#include "json.hpp"

#include "impacteq/equilibrium.hpp"
#include "impacteq/mc.hpp"
#include "impacteq/multiasset.hpp"
#include "impacteq/welfare.hpp"

namespace impacteq {

// Flat JSON object with kind, all coefficients, params; fields that do not
// exist for the kind (lambda_sig for NS, y_hat for PT, ...) are omitted.
nlohmann::json to_json(const Equilibrium& eq);

nlohmann::json to_json(const CEReport& r);

nlohmann::json to_json(const MatrixEquilibrium& eq);

// One JSON-lines record of the mc suite.
nlohmann::json to_json(const std::string& name, const McReport& r, bool pass);

// Parses {alpha_I, alpha_U, p_I, p_N, Pi}; missing Pi defaults to 0.
MarketParams market_params_from_json(const nlohmann::json& j);

} // namespace impacteq
