#pragma once
#include <algorithm>
#include <cmath>
#include <vector>

#include "catsim/welfare.hpp"
#include "catsim/world.hpp"

namespace catsim {

// Treasury cash movements. Shortfalls turn into interest-bearing debt, so
// the treasury balance itself never goes negative.
inline void gov_pay(WorldState& w, double amount) {
    if (amount <= 0.0) return;
    double covered = std::min(w.gov.treasury, amount);
    w.gov.treasury -= covered;
    w.gov.debt += amount - covered;
}

inline void gov_receive(WorldState& w, double amount) {
    if (amount > 0.0) w.gov.treasury += amount;
}

// Interest on outstanding debt accrues every step and is serviced before
// any other outflow; what cannot be paid is capitalised.
inline void service_debt(WorldState& w, StepLog& log) {
    double interest = w.cfg.interest_rate * w.gov.debt;
    if (interest <= 0.0) return;
    log.debt_interest = interest;
    gov_pay(w, interest);
}

inline int tax_bracket(const ScenarioConfig& cfg, double income) {
    if (income <= cfg.tax_thresholds[0]) return 0;
    if (income <= cfg.tax_thresholds[1]) return 1;
    return 2;
}

// Progressive flat-rate taxes. Baseline rates are withheld at source: the
// consumption plan already ran on after-tax income, so here the baseline is
// only credited as cash. When the step's outflows exceed baseline revenue,
// all rates scale by a common multiplier (each capped at 100%) and the
// surcharge is collected from wealth; that extra take is the debt-related
// tax raise. Whatever still cannot be financed stays as debt.
inline void collect_taxes(WorldState& w, StepLog& log, double required_revenue) {
    double baseline = 0.0;
    for (const auto& ind : w.pop)
        baseline += w.cfg.tax_rates[tax_bracket(w.cfg, ind.income)] * ind.income;
    log.tax_baseline = baseline;
    gov_receive(w, baseline);

    double extra = 0.0;
    if (required_revenue > baseline && baseline > 0.0) {
        double multiplier = required_revenue / baseline;
        for (auto& ind : w.pop) {
            double rate = w.cfg.tax_rates[tax_bracket(w.cfg, ind.income)];
            double surcharge_rate = std::min(1.0, rate * multiplier) - rate;
            double due = surcharge_rate * ind.income;
            double paid = std::min(due, ind.wealth); // nobody pays out of wealth they lack
            ind.wealth -= paid;
            extra += paid;
        }
        gov_receive(w, extra);
    }
    log.tax_revenue = baseline + extra;
    log.taxes_paid += extra; // wealth-ledger term: only the surcharge touches wealth
    log.debt_tax_raise = extra;

    double repay = std::min(w.gov.treasury, w.gov.debt);
    w.gov.treasury -= repay;
    w.gov.debt -= repay;
}

// --- intervention handlers ------------------------------------------------

// Enrols the neediest eligible individual: the highest reservation premium,
// net of the premium already paid by existing policyholders.
inline InterventionEffects apply_state_insurance(WorldState& w, StepLog& log) {
    InterventionEffects fx;
    int best = -1;
    double best_score = 0.0;
    for (const auto& ind : w.pop) {
        if (!ind.gov_eligible) continue;
        if (ind.contract && ind.contract->government) continue;
        double score = ind.pmax;
        if (ind.contract) score -= ind.contract->premium;
        if (best < 0 || score > best_score) {
            best = ind.id;
            best_score = score;
        }
    }
    if (best < 0) return fx;

    IndividualState& ind = w.pop[best];
    fx.applied = true;
    fx.target_id = best;
    fx.target_pmax = ind.pmax;
    fx.target_was_policyholder = ind.contract.has_value();
    fx.target_prev_premium = ind.contract ? ind.contract->premium : 0.0;
    double premium = government_premium(w, ind);
    fx.target_gov_premium = premium;
    if (ind.contract && !ind.contract->government && ind.contract->provider >= 0)
        w.insurers[ind.contract->provider].policies -= 1;
    ind.contract = Contract{-1, premium, true};

    double fair = w.cfg.theta * ind.lambda_r * ind.wealth;
    log.state_deficit += std::max(0.0, fair - premium);
    log.admin_costs += w.cfg.cost_state;
    gov_pay(w, w.cfg.cost_state);
    return fx;
}

namespace detail {

// Capacity-constrained counterfactual matching: which currently uninsured
// individuals would obtain a contract given per-insurer free slots and a
// price transform? Fills `matched` with individual ids in id order.
template <class PriceFn>
inline void match_uninsured(const WorldState& w, std::vector<int> avail,
                            PriceFn price_of, std::vector<int>& matched) {
    for (const auto& ind : w.pop) {
        if (ind.contract) continue;
        int pick = -1;
        double best_price = 0.0;
        for (std::size_t j = 0; j < w.insurers.size(); ++j) {
            if (!w.insurers[j].active || avail[j] <= 0) continue;
            double price = price_of(w.insurers[j], ind);
            if (pick < 0 || price < best_price) {
                pick = static_cast<int>(j);
                best_price = price;
            }
        }
        if (pick < 0) continue;
        if (best_price <= ind.pmax && best_price <= ind.wealth) {
            matched.push_back(ind.id);
            avail[pick] -= 1;
        }
    }
}

inline std::vector<int> free_slots(const WorldState& w) {
    std::vector<int> avail(w.insurers.size(), 0);
    for (std::size_t j = 0; j < w.insurers.size(); ++j) {
        const auto& ins = w.insurers[j];
        if (ins.active) avail[j] = std::max(0, supply_capacity(ins) - ins.policies);
    }
    return avail;
}

} // namespace detail

// Lowers every insurer's solvency quantile, which shrinks the reserve per
// policy and frees capacity. The welfare gain is read off a counterfactual
// re-match of the uninsured against the enlarged capacity.
inline InterventionEffects apply_ease_solvency(WorldState& w, StepLog& log) {
    InterventionEffects fx;
    bool any_active = false;
    for (const auto& ins : w.insurers) any_active |= ins.active;
    if (!any_active) return fx;
    fx.applied = true;

    auto plain_price = [&w](const InsurerState& ins, const IndividualState& ind) {
        return quote_for(w, ins, ind);
    };
    std::vector<int> before_ids;
    detail::match_uninsured(w, detail::free_slots(w), plain_price, before_ids);

    for (auto& ins : w.insurers) {
        if (!ins.active) continue;
        ins.rho = std::max(w.cfg.rho_floor, ins.rho * w.cfg.ease_factor);
        ins.reserve_pp = reserve_per_policy(ins.model, ins.rho);
    }

    std::vector<int> after_ids;
    detail::match_uninsured(w, detail::free_slots(w), plain_price, after_ids);

    for (int id : after_ids) {
        if (std::find(before_ids.begin(), before_ids.end(), id) != before_ids.end())
            continue;
        fx.marginal_pmax_sum += std::max(0.0, w.pop[id].pmax);
        fx.marginal_count += 1;
    }
    log.admin_costs += w.cfg.cost_ease;
    gov_pay(w, w.cfg.cost_ease);
    return fx;
}

// Awareness campaign: beliefs move towards the truth in proportion to each
// individual's receptiveness, which decays when campaigns repeat without a
// catastrophe in between (the cry-wolf effect).
inline InterventionEffects apply_awareness(WorldState& w, StepLog& log) {
    InterventionEffects fx;
    fx.applied = true;
    double cost = 0.0;
    for (auto& ind : w.pop) {
        double informed = pmax_rational(ind.wealth, w.cfg.theta, ind.lambda_r, w.cfg.utility);
        fx.informed_gap_sum += std::max(0.0, informed - ind.pmax);

        double r = w.gov.receptiveness[ind.id];
        ind.alpha = std::clamp(ind.alpha + r * (w.cfg.theta - ind.alpha), 0.0, 1.0);
        ind.lambda_p = std::clamp(ind.lambda_p + r * (ind.lambda_r - ind.lambda_p), 0.0, 1.0);

        switch (ind.cls) {
        case SocialClass::Low: cost += 1.5 * w.cfg.cost_awareness; break;
        case SocialClass::Middle: cost += w.cfg.cost_awareness; break;
        case SocialClass::Upper: cost += 0.5 * w.cfg.cost_awareness; break;
        }
    }
    for (const auto& ind : w.pop)
        fx.cry_wolf_gap += std::max(0.0, w.cfg.theta - ind.alpha) * ind.lambda_r * ind.wealth;
    log.cry_wolf += fx.cry_wolf_gap;

    if (!w.gov.cat_since_last_campaign)
        for (double& r : w.gov.receptiveness) r *= w.cfg.d_cw;
    w.gov.cat_since_last_campaign = false;

    fx.admin_cash = cost;
    log.admin_costs += cost;
    gov_pay(w, cost);
    return fx;
}

// Premium subsidy: in force for the next market round. Welfare counts the
// premium share incumbents stop paying plus the surplus of uninsured
// individuals who would enter at the subsidised price.
inline InterventionEffects apply_subsidy(WorldState& w, StepLog& log) {
    (void)log;
    InterventionEffects fx;
    fx.applied = true;
    w.gov.subsidy_pending = true;
    double s = w.cfg.subsidy_share;

    for (const auto& ind : w.pop) {
        if (!ind.contract || ind.contract->government) continue;
        double p = w.insurers[ind.contract->provider].model.p;
        double base = ind.lambda_p * ind.wealth;
        fx.subsidy_saved_sum += s * p * base;
        fx.subsidy_literal_sum += std::max(0.0, p - s) * base;
    }
    fx.subsidy_cost = fx.subsidy_saved_sum;

    auto avail = detail::free_slots(w);
    for (const auto& ind : w.pop) {
        if (ind.contract) continue;
        int pick = -1;
        double best_quote = 0.0;
        for (std::size_t j = 0; j < w.insurers.size(); ++j) {
            if (!w.insurers[j].active || avail[j] <= 0) continue;
            double q = quote_for(w, w.insurers[j], ind);
            if (pick < 0 || q < best_quote) {
                pick = static_cast<int>(j);
                best_quote = q;
            }
        }
        if (pick < 0) continue;
        double eff = (1.0 - s) * best_quote;
        if (eff <= ind.pmax && eff <= ind.wealth) {
            avail[pick] -= 1;
            double p = w.insurers[pick].model.p;
            fx.subsidy_entrant_sum +=
                std::max(0.0, ind.pmax - (1.0 - s) * p * ind.lambda_p * ind.wealth);
        }
    }
    return fx;
}

// Premium regulation: caps risk rates at the true probability and loadings
// at a ceiling, starting with the next market round.
inline InterventionEffects apply_premium_regulation(WorldState& w, StepLog& log) {
    InterventionEffects fx;
    fx.applied = true;
    w.gov.regulation_pending = true;

    for (const auto& ind : w.pop) {
        if (!ind.contract || ind.contract->government) continue;
        double p = w.insurers[ind.contract->provider].model.p;
        double p_eff = std::min(p, w.cfg.theta);
        fx.regulation_incumbent_sum += std::max(0.0, (p - p_eff) * ind.lambda_p * ind.wealth);
    }

    auto capped_price = [&w](const InsurerState& ins, const IndividualState& ind) {
        return premium_quote(std::min(ins.model.p, w.cfg.theta),
                             std::min(ins.loading, w.cfg.reg_loading_cap),
                             ind.lambda_r, ind.wealth);
    };
    auto avail = detail::free_slots(w);
    for (const auto& ind : w.pop) {
        if (ind.contract) continue;
        int pick = -1;
        double best_price = 0.0;
        for (std::size_t j = 0; j < w.insurers.size(); ++j) {
            if (!w.insurers[j].active || avail[j] <= 0) continue;
            double price = capped_price(w.insurers[j], ind);
            if (pick < 0 || price < best_price) {
                pick = static_cast<int>(j);
                best_price = price;
            }
        }
        if (pick < 0) continue;
        if (best_price <= ind.pmax && best_price <= ind.wealth) {
            avail[pick] -= 1;
            double p_eff = std::min(w.insurers[pick].model.p, w.cfg.theta);
            fx.regulation_entrant_sum +=
                std::max(0.0, ind.pmax - p_eff * ind.lambda_p * ind.wealth);
        }
    }
    log.admin_costs += w.cfg.cost_regulation;
    gov_pay(w, w.cfg.cost_regulation);
    return fx;
}

// Funds loss prevention for the most exposed individual, permanently
// lowering their real loss share.
inline InterventionEffects apply_prevention(WorldState& w, StepLog& log) {
    InterventionEffects fx;
    int best = -1;
    for (const auto& ind : w.pop)
        if (ind.lambda_r > 0.0 && (best < 0 || ind.lambda_r > w.pop[best].lambda_r))
            best = ind.id;
    if (best < 0) return fx;

    IndividualState& ind = w.pop[best];
    fx.applied = true;
    fx.target_id = best;
    double before = ind.lambda_r;
    double delta = std::min(w.cfg.prevention_delta, before);
    ind.lambda_r = before - delta;
    ind.lambda_p = before > 0.0 ? ind.lambda_p * (ind.lambda_r / before) : 0.0;
    fx.prevention_delta = delta;
    fx.prevention_alpha = ind.alpha;
    fx.prevention_wealth = ind.wealth;

    double cash = w.cfg.cost_prevention_unit * delta * ind.wealth;
    log.admin_costs += cash;
    gov_pay(w, cash);
    return fx;
}

// Offers reinsurance at the fair rate on each insurer's outstanding
// liability. The guarantee is credited against insurer assets until it
// expires and the treasury backstops covered shortfalls next settlement.
inline InterventionEffects apply_reinsurance(WorldState& w, StepLog& log) {
    InterventionEffects fx;
    fx.applied = true;
    w.gov.reinsurance_pending = true;

    std::vector<double> liability(w.insurers.size(), 0.0);
    for (const auto& ind : w.pop) {
        if (!ind.contract || ind.contract->government) continue;
        int j = ind.contract->provider;
        liability[j] += ind.lambda_r * ind.wealth;
        fx.reinsurance_wtp_sum +=
            w.insurers[j].epsilon * ind.alpha * ind.lambda_p * ind.wealth;
    }
    for (std::size_t j = 0; j < w.insurers.size(); ++j) {
        auto& ins = w.insurers[j];
        if (!ins.active || liability[j] <= 0.0) continue;
        double premium = w.cfg.theta * liability[j];
        ins.profit_account -= premium;
        gov_receive(w, premium);
        log.reins_premium_income += premium;
        ins.reinsured = true;
        double need = std::max(0.0, liability[j] - ins.total_assets());
        ins.reinsurance_credit = need;
        fx.reinsurance_need_sum += need;
    }
    return fx;
}

inline InterventionEffects apply_intervention(WorldState& w, StepLog& log,
                                              Intervention action) {
    switch (action) {
    case Intervention::NoAction: {
        InterventionEffects fx;
        fx.applied = true;
        return fx;
    }
    case Intervention::StateInsurance: return apply_state_insurance(w, log);
    case Intervention::EaseSolvency: return apply_ease_solvency(w, log);
    case Intervention::Awareness: return apply_awareness(w, log);
    case Intervention::Subsidy: return apply_subsidy(w, log);
    case Intervention::PremiumRegulation: return apply_premium_regulation(w, log);
    case Intervention::Prevention: return apply_prevention(w, log);
    case Intervention::Reinsurance: return apply_reinsurance(w, log);
    }
    return {};
}

} // namespace catsim
