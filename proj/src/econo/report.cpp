#include "newsreg/econo.hpp"

namespace newsreg::econo {

namespace {

nlohmann::json to_array(const Vector<double>& v) {
    auto a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace

nlohmann::json fit_to_json(const Fit& fit, const std::string& spec) {
    nlohmann::json j;
    j["spec"] = spec;
    j["horizon"] = fit.horizon;
    j["names"] = fit.names;
    j["coefficients"] = to_array(fit.coefficients);
    j["t_white"] = to_array(fit.t_white());
    j["t_nw"] = to_array(fit.t_nw());
    j["nw_lags"] = fit.nw_lags;
    const auto th = fit.t_hodrick();
    j["t_hodrick"] = th ? to_array(*th) : nlohmann::json(nullptr);
    j["r2"] = fit.r_squared;
    j["n_obs"] = fit.n_obs;
    j["dropped"] = fit.dropped;
    j["warnings"] = fit.warnings;
    return j;
}

}  // namespace newsreg::econo
