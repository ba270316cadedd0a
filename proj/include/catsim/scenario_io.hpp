#pragma once
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "catsim/config.hpp"

namespace catsim {

inline void validate_config(const ScenarioConfig& c);

inline nlohmann::ordered_json range_to_json(const Range& r) {
    return nlohmann::ordered_json::array({r.lo, r.hi});
}

inline Range range_from_json(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("scenario: '" + key + "' must be a [lo, hi] pair");
    Range r{j[0].get<double>(), j[1].get<double>()};
    if (!(r.lo <= r.hi))
        throw std::runtime_error("scenario: '" + key + "' has lo > hi");
    return r;
}

inline nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const auto& cp : c.classes) {
        nlohmann::ordered_json cj;
        cj["share"] = cp.share;
        cj["income"] = cp.income;
        cj["wealth0"] = range_to_json(cp.wealth0);
        cj["alpha0"] = range_to_json(cp.alpha0);
        cj["lambda_r"] = range_to_json(cp.lambda_r);
        classes.push_back(cj);
    }
    j["classes"] = classes;
    j["beta_u"] = range_to_json(c.beta_u);
    j["beta_o"] = range_to_json(c.beta_o);
    j["beta_m"] = range_to_json(c.beta_m);
    j["beta_f"] = range_to_json(c.beta_f);
    j["beta_n"] = range_to_json(c.beta_n);
    j["beta_h"] = range_to_json(c.beta_h);
    j["interest_rate"] = c.interest_rate;
    j["moral_hazard_factor"] = c.moral_hazard_factor;
    j["utility_phi"] = c.utility.phi;
    j["utility_k"] = c.utility.k;
    j["theta"] = c.theta;
    j["horizon"] = c.horizon;
    j["m0"] = c.m0;
    j["kappa0_mean"] = c.kappa0_mean;
    j["kappa0_sd"] = c.kappa0_sd;
    j["gamma0"] = range_to_json(c.gamma0);
    j["epsilon0"] = range_to_json(c.epsilon0);
    j["loading0"] = range_to_json(c.loading0);
    j["rho0"] = range_to_json(c.rho0);
    j["beta_prime"] = range_to_json(c.beta_prime);
    j["admin_rate"] = range_to_json(c.admin_rate);
    j["model_error"] = range_to_json(c.model_error);
    j["p_floor"] = c.p_floor;
    j["modeler_fee"] = c.modeler_fee;
    j["delta_e"] = c.delta_e;
    j["kappa_l"] = c.kappa_l;
    j["rho_cap"] = c.rho_cap;
    j["subsidy_share"] = c.subsidy_share;
    j["ease_factor"] = c.ease_factor;
    j["rho_floor"] = c.rho_floor;
    j["d_cw"] = c.d_cw;
    j["prevention_delta"] = c.prevention_delta;
    j["reg_loading_cap"] = c.reg_loading_cap;
    j["tax_rates"] = c.tax_rates;
    j["tax_thresholds"] = c.tax_thresholds;
    j["cost_state"] = c.cost_state;
    j["cost_ease"] = c.cost_ease;
    j["cost_awareness"] = c.cost_awareness;
    j["cost_regulation"] = c.cost_regulation;
    j["cost_prevention_unit"] = c.cost_prevention_unit;
    j["subsidy_wtp_literal"] = c.subsidy_wtp_literal;
    j["rl_eta"] = c.rl_eta;
    j["rl_delta"] = c.rl_delta;
    j["r_max"] = c.r_max;
    j["eps_start"] = c.eps_start;
    j["eps_end"] = c.eps_end;
    j["eps_decay_fraction"] = c.eps_decay_fraction;
    j["rl_literal_update"] = c.rl_literal_update;
    j["aware_thr"] = c.aware_thr;
    j["supply_thr"] = c.supply_thr;
    j["government_enabled"] = c.government_enabled;
    j["insurance_enabled"] = c.insurance_enabled;
    j["seed"] = c.seed;
    return j;
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    if (!j.is_object()) throw std::runtime_error("scenario: top level must be an object");
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        const nlohmann::json& v = item.value();
        if (k == "n") c.n = v.get<int>();
        else if (k == "classes") {
            if (!v.is_array() || v.size() != 3)
                throw std::runtime_error("scenario: 'classes' must list exactly 3 classes");
            for (std::size_t i = 0; i < 3; ++i) {
                ClassParams& cp = c.classes[i];
                for (const auto& ci : v[i].items()) {
                    const std::string& ck = ci.key();
                    if (ck == "share") cp.share = ci.value().get<double>();
                    else if (ck == "income") cp.income = ci.value().get<double>();
                    else if (ck == "wealth0") cp.wealth0 = range_from_json(ci.value(), ck);
                    else if (ck == "alpha0") cp.alpha0 = range_from_json(ci.value(), ck);
                    else if (ck == "lambda_r") cp.lambda_r = range_from_json(ci.value(), ck);
                    else throw std::runtime_error("scenario: unknown class key '" + ck + "'");
                }
            }
        }
        else if (k == "beta_u") c.beta_u = range_from_json(v, k);
        else if (k == "beta_o") c.beta_o = range_from_json(v, k);
        else if (k == "beta_m") c.beta_m = range_from_json(v, k);
        else if (k == "beta_f") c.beta_f = range_from_json(v, k);
        else if (k == "beta_n") c.beta_n = range_from_json(v, k);
        else if (k == "beta_h") c.beta_h = range_from_json(v, k);
        else if (k == "interest_rate") c.interest_rate = v.get<double>();
        else if (k == "moral_hazard_factor") c.moral_hazard_factor = v.get<double>();
        else if (k == "utility_phi") c.utility.phi = v.get<double>();
        else if (k == "utility_k") c.utility.k = v.get<double>();
        else if (k == "theta") c.theta = v.get<double>();
        else if (k == "horizon") c.horizon = v.get<int>();
        else if (k == "m0") c.m0 = v.get<int>();
        else if (k == "kappa0_mean") c.kappa0_mean = v.get<double>();
        else if (k == "kappa0_sd") c.kappa0_sd = v.get<double>();
        else if (k == "gamma0") c.gamma0 = range_from_json(v, k);
        else if (k == "epsilon0") c.epsilon0 = range_from_json(v, k);
        else if (k == "loading0") c.loading0 = range_from_json(v, k);
        else if (k == "rho0") c.rho0 = range_from_json(v, k);
        else if (k == "beta_prime") c.beta_prime = range_from_json(v, k);
        else if (k == "admin_rate") c.admin_rate = range_from_json(v, k);
        else if (k == "model_error") c.model_error = range_from_json(v, k);
        else if (k == "p_floor") c.p_floor = v.get<double>();
        else if (k == "modeler_fee") c.modeler_fee = v.get<double>();
        else if (k == "delta_e") c.delta_e = v.get<double>();
        else if (k == "kappa_l") c.kappa_l = v.get<double>();
        else if (k == "rho_cap") c.rho_cap = v.get<double>();
        else if (k == "subsidy_share") c.subsidy_share = v.get<double>();
        else if (k == "ease_factor") c.ease_factor = v.get<double>();
        else if (k == "rho_floor") c.rho_floor = v.get<double>();
        else if (k == "d_cw") c.d_cw = v.get<double>();
        else if (k == "prevention_delta") c.prevention_delta = v.get<double>();
        else if (k == "reg_loading_cap") c.reg_loading_cap = v.get<double>();
        else if (k == "tax_rates") {
            if (!v.is_array() || v.size() != 3)
                throw std::runtime_error("scenario: 'tax_rates' must list 3 rates");
            for (std::size_t i = 0; i < 3; ++i) c.tax_rates[i] = v[i].get<double>();
        }
        else if (k == "tax_thresholds") {
            if (!v.is_array() || v.size() != 2)
                throw std::runtime_error("scenario: 'tax_thresholds' must list 2 thresholds");
            for (std::size_t i = 0; i < 2; ++i) c.tax_thresholds[i] = v[i].get<double>();
        }
        else if (k == "cost_state") c.cost_state = v.get<double>();
        else if (k == "cost_ease") c.cost_ease = v.get<double>();
        else if (k == "cost_awareness") c.cost_awareness = v.get<double>();
        else if (k == "cost_regulation") c.cost_regulation = v.get<double>();
        else if (k == "cost_prevention_unit") c.cost_prevention_unit = v.get<double>();
        else if (k == "subsidy_wtp_literal") c.subsidy_wtp_literal = v.get<bool>();
        else if (k == "rl_eta") c.rl_eta = v.get<double>();
        else if (k == "rl_delta") c.rl_delta = v.get<double>();
        else if (k == "r_max") c.r_max = v.get<double>();
        else if (k == "eps_start") c.eps_start = v.get<double>();
        else if (k == "eps_end") c.eps_end = v.get<double>();
        else if (k == "eps_decay_fraction") c.eps_decay_fraction = v.get<double>();
        else if (k == "rl_literal_update") c.rl_literal_update = v.get<bool>();
        else if (k == "aware_thr") c.aware_thr = v.get<double>();
        else if (k == "supply_thr") c.supply_thr = v.get<double>();
        else if (k == "government_enabled") c.government_enabled = v.get<bool>();
        else if (k == "insurance_enabled") c.insurance_enabled = v.get<bool>();
        else if (k == "seed") c.seed = v.get<std::uint64_t>();
        else throw std::runtime_error("scenario: unknown key '" + k + "'");
    }
    validate_config(c);
    return c;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // An empty file means: run with defaults.
    bool blank = true;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            blank = false;
            break;
        }
    if (blank) return ScenarioConfig{};
    return config_from_json(nlohmann::json::parse(text));
}

inline void save_scenario(const std::string& path, const ScenarioConfig& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("scenario: cannot write '" + path + "'");
    out << config_to_json(c).dump(2) << "\n";
}

inline void validate_config(const ScenarioConfig& c) {
    auto bad = [](const std::string& m) { throw std::runtime_error("scenario: " + m); };
    if (c.n <= 0) bad("n must be positive");
    if (c.horizon <= 0) bad("horizon must be positive");
    if (c.m0 < 0) bad("m0 must be non-negative");
    if (!(c.theta >= 0.0 && c.theta <= 1.0)) bad("theta must lie in [0,1]");
    double share_sum = 0.0;
    for (const auto& cp : c.classes) {
        if (cp.share < 0.0) bad("class shares must be non-negative");
        share_sum += cp.share;
    }
    if (!(share_sum > 0.0)) bad("class shares must sum to a positive value");
    if (!(c.utility.phi > 0.0 && c.utility.k > 0.0)) bad("utility parameters must be positive");
    if (!(c.rho0.lo > 0.0 && c.rho0.hi < 1.0 + 1e-12)) bad("rho0 must lie inside (0,1)");
    if (!(c.rl_delta >= 0.0 && c.rl_delta < 1.0)) bad("rl_delta must lie in [0,1)");
    if (!(c.rl_eta > 0.0 && c.rl_eta <= 1.0)) bad("rl_eta must lie in (0,1]");
    if (c.r_max <= 0.0) bad("r_max must be positive");
    if (c.p_floor <= 0.0) bad("p_floor must be positive");
}

// Stable 64-bit fingerprint of everything that shapes the dynamics, so a
// learned table can refuse to run against a different scenario. The seed is
// excluded: one table serves any evaluation seed.
inline std::uint64_t config_fingerprint(const ScenarioConfig& c) {
    ScenarioConfig canon = c;
    canon.seed = 0;
    std::string text = config_to_json(canon).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace catsim
