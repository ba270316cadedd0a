#pragma once
#include <algorithm>
#include <array>

#include "catsim/world.hpp"

namespace catsim {

// Raw ingredients an intervention handler gathers for the welfare record.
// Sums are already floored at zero summand by summand.
struct InterventionEffects {
    bool applied = false; // false when preconditions failed (treated as no-op)

    // State insurance.
    int target_id = -1;
    bool target_was_policyholder = false;
    double target_pmax = 0;
    double target_prev_premium = 0;
    double target_gov_premium = 0;

    // Solvency easing: reservation premia of counterfactual new purchasers.
    double marginal_pmax_sum = 0;
    int marginal_count = 0;

    // Awareness.
    double informed_gap_sum = 0; // sum over individuals of (P^informed - pmax)+
    double cry_wolf_gap = 0;     // unperceived exposure left by decayed receptiveness

    // Subsidy.
    double subsidy_saved_sum = 0;    // sum s * p * lambda_p * W over incumbents
    double subsidy_literal_sum = 0;  // sum (p - s)+ * lambda_p * W over incumbents
    double subsidy_entrant_sum = 0;  // sum (pmax - (1-s) p lambda_p W)+ over entrants
    double subsidy_cost = 0;         // = subsidy_saved_sum, the mechanical cost

    // Premium regulation.
    double regulation_incumbent_sum = 0; // sum (p - p_reg)+ * lambda_p * W
    double regulation_entrant_sum = 0;   // sum (pmax - p_reg lambda_p W)+ over entrants

    // Prevention.
    double prevention_delta = 0; // lambda_r actually removed
    double prevention_alpha = 0;
    double prevention_wealth = 0;

    // Reinsurance.
    double reinsurance_wtp_sum = 0;  // sum eps_j * alpha * lambda_p * W over policyholders
    double reinsurance_need_sum = 0; // sum (liability - assets)+ over insurers

    // Cash cost actually charged to the treasury at application time.
    double admin_cash = 0;
};

struct WelfareRecord {
    Intervention action = Intervention::NoAction;
    double wtp = 0;
    double mechanical_cost = 0;
    // Externality order: crowding-out, debt-tax raises, insolvency,
    // cry-wolf, moral hazard, catastrophe losses.
    std::array<double, 6> externalities{};
    double g_net = 0;
    double mvpf = 0;
};

// Willingness to pay of the single individual enrolled in state insurance:
// non-policyholders value the policy at their reservation premium, existing
// policyholders at the premium difference.
inline double wtp_state_insurance(bool was_policyholder, double pmax,
                                  double prev_premium, double gov_premium) {
    if (!was_policyholder) return std::max(0.0, pmax);
    return std::max(0.0, prev_premium - gov_premium);
}

// Prevention: lower expected loss valued at the perceived probability.
inline double wtp_prevention(double delta_lambda, double alpha, double wealth) {
    return std::max(0.0, delta_lambda * alpha * wealth);
}

// Net government cost and the MVPF ratio. A positive willingness to pay at
// non-positive net cost maxes out at r_max; an idle record scores zero.
inline double mvpf_ratio(double wtp, double g_net, double r_max) {
    if (g_net > 0.0) return std::min(wtp / g_net, r_max);
    if (wtp > 0.0) return r_max;
    return 0.0;
}

inline std::array<double, 6> fiscal_externalities(const StepLog& log) {
    return {log.crowding_out, log.debt_tax_raise, log.insolvency_unmet,
            log.cry_wolf,     log.moral_hazard,  log.cat_losses};
}

inline WelfareRecord build_welfare_record(Intervention action,
                                          const InterventionEffects& fx,
                                          const StepLog& log,
                                          const ScenarioConfig& cfg) {
    WelfareRecord rec;
    rec.action = action;
    if (fx.applied) {
        switch (action) {
        case Intervention::NoAction:
            break;
        case Intervention::StateInsurance:
            rec.wtp = wtp_state_insurance(fx.target_was_policyholder, fx.target_pmax,
                                          fx.target_prev_premium, fx.target_gov_premium);
            rec.mechanical_cost = cfg.cost_state;
            break;
        case Intervention::EaseSolvency:
            rec.wtp = fx.marginal_pmax_sum;
            rec.mechanical_cost = cfg.cost_ease;
            break;
        case Intervention::Awareness:
            rec.wtp = fx.informed_gap_sum;
            rec.mechanical_cost = fx.admin_cash;
            break;
        case Intervention::Subsidy:
            rec.wtp = (cfg.subsidy_wtp_literal ? fx.subsidy_literal_sum
                                               : fx.subsidy_saved_sum) +
                      fx.subsidy_entrant_sum;
            rec.mechanical_cost = fx.subsidy_cost;
            break;
        case Intervention::PremiumRegulation:
            rec.wtp = fx.regulation_incumbent_sum + fx.regulation_entrant_sum;
            rec.mechanical_cost = cfg.cost_regulation;
            break;
        case Intervention::Prevention:
            rec.wtp = wtp_prevention(fx.prevention_delta, fx.prevention_alpha,
                                     fx.prevention_wealth);
            rec.mechanical_cost = cfg.cost_prevention_unit * fx.prevention_delta *
                                  fx.prevention_wealth;
            break;
        case Intervention::Reinsurance:
            rec.wtp = fx.reinsurance_wtp_sum;
            rec.mechanical_cost = fx.reinsurance_need_sum;
            break;
        }
    }
    rec.externalities = fiscal_externalities(log);
    rec.g_net = rec.mechanical_cost;
    for (double e : rec.externalities) rec.g_net += e;
    rec.mvpf = mvpf_ratio(rec.wtp, rec.g_net, cfg.r_max);
    return rec;
}

} // namespace catsim
