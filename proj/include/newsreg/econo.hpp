#pragma once

#include <json.hpp>
#include <string>

#include "newsreg/econo/covariance.hpp"
#include "newsreg/econo/least_squares.hpp"
#include "newsreg/econo/pca.hpp"
#include "newsreg/econo/regression.hpp"

namespace newsreg::econo {

using Fit = RegressionFit<double>;

/// {spec, horizon, names, coefficients, t_nw, t_hodrick, r2, n_obs, ...}.
/// Coefficients stay in decimal units; t_hodrick is null when absent.
nlohmann::json fit_to_json(const Fit& fit, const std::string& spec);

}  // namespace newsreg::econo
