#pragma once
#include <array>
#include <cstdint>
#include <string>

#include "catsim/rng.hpp"
#include "catsim/utility.hpp"

namespace catsim {

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

inline double uniform_in(Stream& st, const Range& r) { return st.uniform(r.lo, r.hi); }

// Parameters of one social class.
struct ClassParams {
    double share = 0.0;   // population share, shares sum to 1
    double income = 0.0;  // annual income, identical within the class
    Range wealth0;        // initial wealth
    Range alpha0;         // initial perceived catastrophe probability
    Range lambda_r;       // real loss share when a catastrophe hits
};

// Full scenario calibration. Every knob of the simulation lives here so a
// single (config, seed) pair pins down a run exactly.
struct ScenarioConfig {
    // Population.
    int n = 100;
    std::array<ClassParams, 3> classes{{
        {0.5, 5000.0, {10000.0, 15000.0}, {0.001, 0.005}, {0.6, 1.0}},
        {0.3, 12000.0, {25000.0, 40000.0}, {0.003, 0.01}, {0.3, 0.6}},
        {0.2, 50000.0, {150000.0, 300000.0}, {0.005, 0.01}, {0.0, 0.3}},
    }};
    Range beta_u{2.0, 3.0};
    Range beta_o{0.0, 1.0};
    Range beta_m{0.0, 1.0};
    Range beta_f{0.0, 1.0};
    Range beta_n{0.0, 1.0};
    Range beta_h{0.0, 1.0};
    ParetoUtilityParams utility; // phi, k
    double interest_rate = 0.02;
    double moral_hazard_factor = 1.02;

    // Environment.
    double theta = 0.03; // true annual catastrophe probability
    int horizon = 50;    // steps per episode

    // Insurers.
    int m0 = 5; // initial roster size
    double kappa0_mean = 500000.0;
    double kappa0_sd = 100000.0;
    Range gamma0{0.0, 1.0};
    Range epsilon0{0.0, 1.0};
    Range loading0{0.0, 1.0};
    Range rho0{0.8, 1.0};
    Range beta_prime{0.0, 1.0};
    Range admin_rate{0.05, 0.15};
    Range model_error{0.5, 1.5};
    double p_floor = 1e-4;     // modelled probability never quoted as zero
    double modeler_fee = 1000.0;
    double delta_e = 0.05;     // exit-propensity increment per adverse event
    double kappa_l = 0.1;      // loading adjustment speed
    double rho_cap = 0.999;

    // Government.
    double subsidy_share = 0.3;
    double ease_factor = 0.9;
    double rho_floor = 0.70;
    double d_cw = 0.5;              // receptiveness decay after an uneventful campaign
    double prevention_delta = 0.2;  // lambda_r reduction granted by prevention
    double reg_loading_cap = 0.2;   // loading ceiling under premium regulation
    std::array<double, 3> tax_rates{0.02, 0.05, 0.10};
    std::array<double, 2> tax_thresholds{8000.0, 20000.0};
    double cost_state = 100.0;          // admin cost per new government policy
    double cost_ease = 100.0;           // admin cost of a solvency easing
    double cost_awareness = 100.0;      // base cost of reaching one middle-class individual
    double cost_regulation = 100.0;     // admin cost of a regulation round
    double cost_prevention_unit = 0.1;  // cost per unit of expected loss removed
    bool subsidy_wtp_literal = false;   // use the (p - s) reading for incumbents

    // Reinforcement learning.
    double rl_eta = 0.1;
    double rl_delta = 0.9;
    double r_max = 10.0;
    double eps_start = 1.0;
    double eps_end = 0.05;
    double eps_decay_fraction = 0.5; // share of episodes over which epsilon decays
    bool rl_literal_update = false;  // drop the reward term from the update
    double aware_thr = 0.5;          // median(alpha)/theta boundary
    double supply_thr = 0.5;         // capacity-per-capita boundary

    // Modes.
    bool government_enabled = true;
    bool insurance_enabled = true;

    std::uint64_t seed = 1;
};

} // namespace catsim
