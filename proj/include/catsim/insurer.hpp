#pragma once
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "catsim/math_util.hpp"

namespace catsim {

// Internal catastrophe model an insurer prices from: a perceived annual
// event probability plus the first two moments of the per-individual loss
// distribution across society.
struct LossModel {
    double p = 0.0;     // modelled catastrophe probability, > 0
    double mu = 0.0;    // mean individual loss lambda_r * W
    double sigma = 0.0; // population std dev of the same
};

struct InsurerState {
    int id = 0;
    bool active = true;
    double capital = 0.0;        // own funds; accrues interest yearly
    double reserves = 0.0;       // claim reserves backing current policies
    double profit_account = 0.0; // within-year P&L cash, swept into capital
    double reinsurance_credit = 0.0; // value of a government reinsurance guarantee
    double gamma = 0.5;          // share of assets deployable as capacity
    double epsilon = 0.0;        // exit propensity in [0,1]; 1 means leave
    double loading = 0.5;        // profit loading on the risk premium
    double rho = 0.9;            // solvency quantile for reserves, in (0,1)
    double beta_prime = 0.5;     // strength of the post-catastrophe reaction
    double admin_rate = 0.1;     // administrative cost share c'
    LossModel model;
    double reserve_pp = 0.0;     // cached reserve requirement per policy
    int policies = 0;            // contracts currently on the book
    int sales_this_step = 0;
    bool reinsured = false;      // holds a government reinsurance contract
    int exit_step = -1;

    double total_assets() const {
        return capital + profit_account + reserves + reinsurance_credit;
    }
};

// Builds a fresh loss model: probability is the true theta distorted by a
// multiplicative modelling error and floored away from zero, moments come
// from the current distribution of individual exposures.
inline LossModel build_loss_model(double theta, double error,
                                  const std::vector<double>& exposures,
                                  double p_floor) {
    LossModel m;
    m.p = std::max(theta * error, p_floor);
    m.mu = mean_of(exposures);
    m.sigma = stdev_pop(exposures);
    return m;
}

// Refreshes just the loss moments from current exposures, leaving the
// modelled probability untouched.
inline void loss_moments(const std::vector<double>& exposures, double& mu, double& sigma) {
    mu = mean_of(exposures);
    sigma = stdev_pop(exposures);
}

// Reserve an insurer must hold per policy: the rho-quantile of a normal
// fitted to individual losses, floored at zero.
inline double reserve_per_policy(const LossModel& m, double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("reserve_per_policy: rho must lie strictly in (0,1)");
    return std::max(0.0, m.mu + m.sigma * normal_quantile(rho));
}

// Hardening response to an observed catastrophe: dearer risk rates, a more
// cautious solvency target, and less capacity deployed.
inline void respond_to_catastrophe(InsurerState& ins, double rho_cap) {
    ins.model.p *= 1.0 + ins.beta_prime;
    ins.rho = std::min(rho_cap, ins.rho * (1.0 + ins.beta_prime));
    ins.gamma *= 1.0 - ins.beta_prime;
}

// Number of policies the insurer can back given deployable assets.
inline int supply_capacity(const InsurerState& ins) {
    if (!(ins.reserve_pp > 0.0)) return 0;
    double raw = ins.gamma * ins.total_assets() / ins.reserve_pp;
    if (raw <= 0.0) return 0;
    return static_cast<int>(std::floor(raw));
}

// Premium quoted for covering an exposure lambda_r * W at risk rate p with
// profit loading l.
inline double premium_quote(double p, double loading, double lambda_r, double wealth) {
    return p * (1.0 + loading) * lambda_r * wealth;
}

// Expected annual profit on a book with total exposure X.
inline double expected_profit(double p, double loading, double admin_rate, double x) {
    return p * (1.0 + loading) * x - p * x - admin_rate * p * x;
}

// Competitive pressure: an insurer that sold nothing moves its loading part
// of the way towards the market mean, and only ever downwards.
inline double adjust_loading(double loading, double market_mean, double kappa_l) {
    double target = std::min(loading, market_mean);
    return loading - kappa_l * (loading - target);
}

} // namespace catsim
