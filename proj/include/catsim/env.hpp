#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "catsim/config.hpp"
#include "catsim/government.hpp"
#include "catsim/individual.hpp"
#include "catsim/insurer.hpp"
#include "catsim/metrics.hpp"
#include "catsim/rng.hpp"
#include "catsim/welfare.hpp"
#include "catsim/world.hpp"

namespace catsim {

// What the policymaker decided this step. state is -1 when no classification
// happened (e.g. the policymaker is disabled).
struct ActionDecision {
    int state = -1;
    Intervention action = Intervention::NoAction;
};

// Action source used when the policymaker is disabled or should stand still.
struct NullActionSource {
    ActionDecision operator()(const WorldState&) { return {}; }
};

struct FixedActionSource {
    Intervention action = Intervention::NoAction;
    ActionDecision operator()(const WorldState&) { return {-1, action}; }
};

namespace detail {

// Per-insurer profit-and-loss scratch for one step.
struct InsurerFlow {
    double premiums = 0.0;
    double admin = 0.0;
    double claims = 0.0;
    bool capital_drawn = false;
};

struct PendingClaim {
    int individual = 0;
    int provider = 0; // index into insurers
    double amount = 0.0;
};

inline void draw_insurer(InsurerState& ins, Stream& st, const ScenarioConfig& cfg,
                         const std::vector<double>& exposures) {
    double kappa = std::max(0.0, st.normal(cfg.kappa0_mean, cfg.kappa0_sd));
    ins.gamma = uniform_in(st, cfg.gamma0);
    ins.epsilon = uniform_in(st, cfg.epsilon0);
    ins.loading = uniform_in(st, cfg.loading0);
    ins.rho = uniform_in(st, cfg.rho0);
    ins.beta_prime = uniform_in(st, cfg.beta_prime);
    ins.admin_rate = uniform_in(st, cfg.admin_rate);
    double err = uniform_in(st, cfg.model_error);
    ins.model = build_loss_model(cfg.theta, err, exposures, cfg.p_floor);
    ins.capital = kappa - cfg.modeler_fee;
    ins.reserves = 0.0;
    ins.profit_account = 0.0;
    ins.reserve_pp = reserve_per_policy(ins.model, ins.rho);
    ins.policies = 0;
    ins.sales_this_step = 0;
    ins.active = true;
}

inline std::vector<double> exposure_vector(const WorldState& w) {
    std::vector<double> out;
    out.reserve(w.pop.size());
    for (const auto& ind : w.pop) out.push_back(ind.lambda_r * ind.wealth);
    return out;
}

// Removes an insurer from the market: outstanding contracts are void with no
// refund, remaining assets leave the market. If the state currently carries a
// book and the firm was pricing above the true risk, the lost private capacity
// counts as crowding-out.
inline void exit_insurer(WorldState& w, int j, StepLog& log) {
    InsurerState& ins = w.insurers[static_cast<std::size_t>(j)];
    if (!ins.active) return;
    ins.active = false;
    ins.exit_step = w.t;
    for (auto& ind : w.pop)
        if (ind.contract && !ind.contract->government && ind.contract->provider == j)
            ind.contract.reset();
    ins.policies = 0;
    log.exits += 1;
    double assets = std::max(0.0, ins.total_assets());
    log.exited_assets += assets;
    bool state_book = false;
    for (const auto& ind : w.pop)
        if (ind.contract && ind.contract->government) {
            state_book = true;
            break;
        }
    if (state_book && w.cfg.theta < ins.model.p * (1.0 + ins.loading))
        log.crowding_out += assets;
}

// Catastrophe settlement: everyone loses their exposed share, insured losses
// become claims, claims are paid reserves-first then capital, and shortfalls
// fall on the public reinsurer when covered (or on policyholders when not).
inline void settle_catastrophe(WorldState& w, StepLog& log, std::vector<InsurerFlow>& flow) {
    std::vector<PendingClaim> private_claims;
    std::vector<PendingClaim> state_claims;
    for (auto& ind : w.pop) {
        double loss = ind.lambda_r * ind.wealth;
        ind.wealth -= loss;
        log.cat_losses += loss;
        if (!ind.contract) continue;
        if (ind.contract->government)
            state_claims.push_back({ind.id, -1, loss});
        else {
            private_claims.push_back({ind.id, ind.contract->provider, loss});
            flow[static_cast<std::size_t>(ind.contract->provider)].claims += loss;
        }
    }
    for (std::size_t j = 0; j < flow.size(); ++j) {
        double total = flow[j].claims;
        if (total <= 0.0) continue;
        InsurerState& ins = w.insurers[j];
        // A firm whose capital was overdrawn (for example by a reinsurance
        // premium larger than its profit account) contributes nothing further;
        // payouts can never be negative.
        double from_res = std::max(0.0, std::min(ins.reserves, total));
        ins.reserves -= from_res;
        double rem = total - from_res;
        double from_cap = std::max(0.0, std::min(ins.capital, rem));
        if (from_cap > 0.0) {
            ins.capital -= from_cap;
            flow[j].capital_drawn = true;
        }
        double paid = from_res + from_cap;
        double shortfall = total - paid;
        if (shortfall > 0.0) {
            if (ins.reinsured) {
                // Covered by the public reinsurance treaty; the firm survives.
                gov_pay(w, shortfall);
                log.backstop_payments += shortfall;
                paid = total;
            } else if (w.gov.reinsurance_in_force) {
                // Last-resort coverage during the treaty window: customers are
                // made whole but the uncovered firm still fails.
                gov_pay(w, shortfall);
                log.backstop_payments += shortfall;
                paid = total;
                exit_insurer(w, static_cast<int>(j), log);
            } else {
                log.insolvency_unmet += shortfall;
                exit_insurer(w, static_cast<int>(j), log);
            }
        }
        double ratio = paid / total;
        for (const auto& pc : private_claims) {
            if (pc.provider != static_cast<int>(j)) continue;
            double amt = pc.amount * ratio;
            w.pop[static_cast<std::size_t>(pc.individual)].wealth += amt;
            log.claims_paid += amt;
        }
    }
    for (const auto& sc : state_claims) {
        gov_pay(w, sc.amount);
        w.pop[static_cast<std::size_t>(sc.individual)].wealth += sc.amount;
        log.gov_claims += sc.amount;
        log.claims_paid += sc.amount;
    }
}

} // namespace detail

inline WorldState init_world(const ScenarioConfig& cfg, std::uint64_t seed) {
    WorldState w;
    w.cfg = cfg;
    w.seed = seed;
    w.t = 0;

    double total_share = 0.0;
    for (const auto& c : cfg.classes) total_share += c.share;
    double c0 = cfg.classes[0].share / total_share;
    double c1 = c0 + cfg.classes[1].share / total_share;

    w.pop.reserve(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        Stream st = w.stream(StreamTag::InitIndividual, 0, static_cast<std::uint64_t>(i));
        double u = st.next_double();
        SocialClass cls = u < c0 ? SocialClass::Low
                                 : (u < c1 ? SocialClass::Middle : SocialClass::Upper);
        const ClassParams& cp = cfg.classes[static_cast<std::size_t>(cls)];
        IndividualState ind;
        ind.id = i;
        ind.cls = cls;
        ind.income = cp.income;
        ind.wealth = uniform_in(st, cp.wealth0);
        ind.alpha = uniform_in(st, cp.alpha0);
        ind.lambda_r = uniform_in(st, cp.lambda_r);
        ind.bias.beta_u = uniform_in(st, cfg.beta_u);
        ind.bias.beta_o = uniform_in(st, cfg.beta_o);
        ind.bias.beta_m = uniform_in(st, cfg.beta_m);
        ind.bias.beta_f = uniform_in(st, cfg.beta_f);
        ind.bias.beta_n = uniform_in(st, cfg.beta_n);
        ind.bias.beta_h = uniform_in(st, cfg.beta_h);
        ind.lambda_p = rational_perceived_loss(ind.lambda_r, ind.bias.beta_o);
        ind.consumption = 0.0;
        ind.savings = 0.0;
        ind.pmax = 0.0;
        ind.pmax_prev = 0.0;
        w.pop.push_back(ind);
    }

    auto exposures = detail::exposure_vector(w);
    w.insurers.reserve(static_cast<std::size_t>(cfg.m0));
    for (int j = 0; j < cfg.m0; ++j) {
        Stream st = w.stream(StreamTag::InitInsurer, 0, static_cast<std::uint64_t>(j));
        InsurerState ins;
        ins.id = j;
        detail::draw_insurer(ins, st, cfg, exposures);
        w.insurers.push_back(ins);
    }

    w.gov = GovernmentState{};
    w.gov.receptiveness.assign(static_cast<std::size_t>(cfg.n), 1.0);
    return w;
}

// Advances the world by one step. Phases, in order: intervention windows roll
// over, debt is serviced, the catastrophe is drawn and settled, risk
// perception updates, consumption and saving are planned, insurance is
// shopped and bought, premiums are collected, insurers update and the market
// churns, moral hazard accrues, and finally the policymaker observes, acts,
// taxes, and is scored.
template <class ActionSource>
StepLog step_world(WorldState& w, ActionSource&& source, StepDetail* detail_out = nullptr) {
    const ScenarioConfig& cfg = w.cfg;
    StepLog log;
    log.t = w.t;
    for (const auto& ind : w.pop) log.wealth_before += ind.wealth;
    log.treasury_before = w.gov.treasury;
    log.debt_before = w.gov.debt;

    // Phase 0: one-step intervention windows roll over.
    w.gov.subsidy_in_force = w.gov.subsidy_pending;
    w.gov.regulation_in_force = w.gov.regulation_pending;
    w.gov.reinsurance_in_force = w.gov.reinsurance_pending;
    w.gov.subsidy_pending = false;
    w.gov.regulation_pending = false;
    w.gov.reinsurance_pending = false;
    if (!w.gov.reinsurance_in_force)
        for (auto& ins : w.insurers) {
            ins.reinsured = false;
            ins.reinsurance_credit = 0.0;
        }
    if (cfg.government_enabled) service_debt(w, log);

    // Phase 1: catastrophe draw and settlement.
    std::vector<detail::InsurerFlow> flow(w.insurers.size());
    bool cat = w.stream(StreamTag::Catastrophe, static_cast<std::uint64_t>(w.t)).bernoulli(cfg.theta);
    log.catastrophe = cat;
    if (cat) {
        w.catastrophe_log.push_back(w.t);
        w.gov.cat_since_last_campaign = true;
        std::fill(w.gov.receptiveness.begin(), w.gov.receptiveness.end(), 1.0);
        detail::settle_catastrophe(w, log, flow);
    }

    // Phase 2: risk perception reacts; informed beliefs decay toward the
    // unaided baseline when nothing happens.
    for (auto& ind : w.pop) {
        ind.alpha = update_risk_perception(ind.alpha, cat, ind.bias.beta_u, ind.bias.beta_o);
        if (!cat) {
            double base = rational_perceived_loss(ind.lambda_r, ind.bias.beta_o);
            ind.lambda_p = base + (ind.lambda_p - base) * (1.0 - ind.bias.beta_o);
        }
    }

    // Phase 3: consumption plan and wealth accrual. Baseline income tax is
    // withheld at source, so plans run on disposable income.
    for (auto& ind : w.pop) {
        double withheld = cfg.government_enabled
                              ? cfg.tax_rates[tax_bracket(cfg, ind.income)] * ind.income
                              : 0.0;
        double disposable = ind.income - withheld;
        auto plan = plan_consumption(ind.wealth, disposable, cfg.interest_rate, ind.bias.beta_m,
                                     ind.alpha, ind.lambda_p, cfg.utility);
        ind.consumption = plan.consumption;
        ind.savings = plan.savings;
        log.savings += plan.savings;
        log.interest += cfg.interest_rate * ind.wealth;
        // The plan never spends beyond cash on hand; the floor only absorbs
        // sub-ulp rounding at the hand-to-mouth corner.
        ind.wealth = std::max(0.0, accrue_wealth(ind.wealth, plan.savings, cfg.interest_rate));
    }

    // Phase 4: demand formation and purchases. Private books are annual, so
    // last step's contracts expire before anyone shops.
    for (auto& ind : w.pop) {
        ind.pmax_prev = ind.pmax;
        if (ind.contract && !ind.contract->government) ind.contract.reset();
    }
    for (auto& ins : w.insurers) {
        ins.policies = 0;
        ins.sales_this_step = 0;
    }
    double class_sum[3] = {0, 0, 0};
    int class_cnt[3] = {0, 0, 0};
    for (const auto& ind : w.pop) {
        class_sum[static_cast<int>(ind.cls)] += ind.pmax_prev;
        class_cnt[static_cast<int>(ind.cls)] += 1;
    }
    std::vector<int> avail(w.insurers.size(), 0);
    for (std::size_t j = 0; j < w.insurers.size(); ++j)
        avail[j] = supply_capacity(w.insurers[j]);
    for (auto& ind : w.pop) {
        Stream st = w.stream(StreamTag::IndividualStep, static_cast<std::uint64_t>(w.t),
                             static_cast<std::uint64_t>(ind.id));
        bool use_simple = st.bernoulli(ind.bias.beta_f);
        bool inert = st.bernoulli(ind.bias.beta_n);
        int c = static_cast<int>(ind.cls);
        double peer_mean = class_cnt[c] > 0 ? class_sum[c] / class_cnt[c] : ind.pmax_prev;
        ind.pmax = use_simple
                       ? pmax_simplified(ind.pmax_prev, peer_mean, ind.bias.beta_h)
                       : pmax_rational(ind.wealth, ind.alpha, ind.lambda_p, cfg.utility);
        if (!cfg.insurance_enabled) continue;
        if (ind.contract && ind.contract->government) {
            // Re-rate the public policy, then consider switching to a cheaper
            // private quote unless inertia keeps the status quo.
            ind.contract->premium = government_premium(w, ind);
            if (!inert) {
                auto pick = cheapest_quote(w, ind, &avail);
                if (pick.idx >= 0) {
                    double eff = w.gov.subsidy_in_force ? (1.0 - cfg.subsidy_share) * pick.quote
                                                        : pick.quote;
                    if (eff < ind.contract->premium) {
                        ind.gov_eligible = false;
                        ind.contract = Contract{pick.idx, pick.quote, false};
                        avail[static_cast<std::size_t>(pick.idx)] -= 1;
                        w.insurers[static_cast<std::size_t>(pick.idx)].policies += 1;
                        w.insurers[static_cast<std::size_t>(pick.idx)].sales_this_step += 1;
                        log.sales_total += 1;
                    }
                }
            }
        } else if (!inert) {
            auto pick = cheapest_quote(w, ind, &avail);
            if (pick.idx >= 0) {
                double eff = w.gov.subsidy_in_force ? (1.0 - cfg.subsidy_share) * pick.quote
                                                    : pick.quote;
                if (eff <= ind.pmax && eff <= ind.wealth) {
                    ind.contract = Contract{pick.idx, pick.quote, false};
                    avail[static_cast<std::size_t>(pick.idx)] -= 1;
                    w.insurers[static_cast<std::size_t>(pick.idx)].policies += 1;
                    w.insurers[static_cast<std::size_t>(pick.idx)].sales_this_step += 1;
                    log.sales_total += 1;
                }
            }
        }
    }

    // Phase 5: premium collection. Private premiums net of the operating cost
    // land in the profit account; subsidies are paid from the treasury; public
    // premiums flow to the treasury and any below-fair gap is logged.
    for (auto& ind : w.pop) {
        if (!ind.contract) continue;
        if (ind.contract->government) {
            double prem = ind.contract->premium;
            ind.wealth -= prem;
            gov_receive(w, prem);
            log.gov_premium_income += prem;
            log.premiums_paid += prem;
            double fair = cfg.theta * ind.lambda_r * ind.wealth;
            if (prem < fair) log.state_deficit += fair - prem;
        } else {
            std::size_t j = static_cast<std::size_t>(ind.contract->provider);
            InsurerState& ins = w.insurers[j];
            double prem = ind.contract->premium;
            double sub = w.gov.subsidy_in_force ? cfg.subsidy_share * prem : 0.0;
            ind.wealth -= prem - sub;
            log.premiums_paid += prem - sub;
            if (sub > 0.0) {
                gov_pay(w, sub);
                log.subsidy_payments += sub;
            }
            double admin = ins.admin_rate * ins.model.p * ind.lambda_r * ind.wealth;
            ins.profit_account += prem - admin;
            flow[j].premiums += prem;
            flow[j].admin += admin;
        }
    }

    // Phase 6: insurers refresh models and reserves, reprice after shocks,
    // undercut when nobody bought, ratchet their exit propensity on bad news,
    // and the market sees exit and entry.
    auto exposures = detail::exposure_vector(w);
    double market_loading = 0.0;
    int market_cnt = 0;
    for (const auto& ins : w.insurers)
        if (ins.active) {
            market_loading += ins.loading;
            market_cnt += 1;
        }
    if (market_cnt > 0) market_loading /= market_cnt;
    double profit_sum = 0.0;
    int profit_cnt = 0;
    for (std::size_t j = 0; j < w.insurers.size(); ++j) {
        InsurerState& ins = w.insurers[j];
        if (!ins.active) continue;
        if (cat) respond_to_catastrophe(ins, cfg.rho_cap);
        double mu, sigma;
        loss_moments(exposures, mu, sigma);
        ins.model.mu = mu;
        ins.model.sigma = sigma;
        ins.reserve_pp = reserve_per_policy(ins.model, ins.rho);
        double target = ins.reserve_pp * ins.policies;
        double delta = target - ins.reserves;
        if (delta > 0.0) {
            double move = std::min(delta, ins.capital);
            ins.capital -= move;
            ins.reserves += move;
        } else {
            ins.capital += -delta;
            ins.reserves = target;
        }
        if (ins.sales_this_step == 0)
            ins.loading = adjust_loading(ins.loading, market_loading, cfg.kappa_l);
        double profit_econ = flow[j].premiums - flow[j].admin - flow[j].claims;
        profit_sum += profit_econ;
        profit_cnt += 1;
        int events = (profit_econ < 0.0 ? 1 : 0) + (ins.sales_this_step == 0 ? 1 : 0) +
                     (flow[j].capital_drawn ? 1 : 0);
        ins.epsilon = std::min(1.0, ins.epsilon + cfg.delta_e * events);
        ins.capital = (1.0 + cfg.interest_rate) * ins.capital + ins.profit_account;
        ins.profit_account = 0.0;
        if (ins.epsilon >= 1.0) detail::exit_insurer(w, static_cast<int>(j), log);
    }
    if (profit_cnt > 0 && profit_sum / profit_cnt > 0.0) {
        Stream st = w.stream(StreamTag::InsurerEntry, static_cast<std::uint64_t>(w.t));
        InsurerState ins;
        ins.id = static_cast<int>(w.insurers.size());
        detail::draw_insurer(ins, st, cfg, exposures);
        w.insurers.push_back(ins);
        log.entries += 1;
    }

    // Phase 7: insured behaviour drifts riskier when someone else pays part of
    // the bill (subsidised private cover, or public cover priced below fair).
    for (auto& ind : w.pop) {
        if (!ind.contract) continue;
        bool subsidized;
        if (ind.contract->government) {
            double fair = cfg.theta * ind.lambda_r * ind.wealth;
            subsidized = ind.contract->premium < fair;
        } else {
            subsidized = w.gov.subsidy_in_force;
        }
        if (subsidized)
            log.moral_hazard += apply_moral_hazard(ind, cfg.moral_hazard_factor);
    }

    // Phase 8: the policymaker classifies the market, intervenes, taxes, and
    // is scored on welfare per net public dollar.
    InterventionEffects fx;
    if (cfg.government_enabled) {
        ActionDecision d = source(w);
        log.rl_state = d.state;
        log.action = static_cast<int>(d.action);
        fx = apply_intervention(w, log, d.action);
        double required = log.gov_claims + log.backstop_payments + log.subsidy_payments +
                          log.debt_interest + log.admin_costs;
        collect_taxes(w, log, required);
        WelfareRecord rec = build_welfare_record(d.action, fx, log, cfg);
        log.wtp = rec.wtp;
        log.mech_cost = rec.mechanical_cost;
        log.g_net = rec.g_net;
        log.reward = rec.mvpf;
    }

    // Aggregates and bookkeeping.
    log.coverage = coverage_rate(w);
    double rate_sum = 0.0;
    int rate_cnt = 0;
    int cap_total = 0;
    for (const auto& ins : w.insurers)
        if (ins.active) {
            rate_sum += effective_risk_rate(w, ins) * (1.0 + effective_loading(w, ins));
            rate_cnt += 1;
            cap_total += supply_capacity(ins);
        }
    log.mean_premium_rate = rate_cnt > 0 ? rate_sum / rate_cnt : 0.0;
    log.active_insurers = rate_cnt;
    log.capacity_total = cap_total;
    for (const auto& ind : w.pop) log.wealth_after += ind.wealth;
    log.total_wealth = log.wealth_after;
    log.gini_wealth = gini(wealth_vector(w));
    log.treasury_after = w.gov.treasury;
    log.debt_after = w.gov.debt;

    if (detail_out) {
        StepDetail& d = *detail_out;
        d.alpha.clear();
        d.wealth.clear();
        d.pmax.clear();
        d.best_quote.clear();
        d.provider.clear();
        for (const auto& ind : w.pop) {
            d.alpha.push_back(ind.alpha);
            d.wealth.push_back(ind.wealth);
            d.pmax.push_back(ind.pmax);
            auto pick = cheapest_quote(w, ind, nullptr);
            d.best_quote.push_back(pick.idx >= 0 ? pick.quote
                                                 : std::numeric_limits<double>::infinity());
            d.provider.push_back(!ind.contract ? -2
                                               : (ind.contract->government ? -1 : ind.contract->provider));
        }
        d.insurer_id.clear();
        d.insurer_rate.clear();
        d.insurer_loading.clear();
        d.insurer_assets.clear();
        for (const auto& ins : w.insurers) {
            if (!ins.active) continue;
            d.insurer_id.push_back(ins.id);
            d.insurer_rate.push_back(effective_risk_rate(w, ins));
            d.insurer_loading.push_back(effective_loading(w, ins));
            d.insurer_assets.push_back(ins.total_assets());
        }
    }

    w.t += 1;
    return log;
}

template <class ActionSource>
EpisodeTrace run_episode(WorldState& w, ActionSource&& source,
                         TraceDetail detail = TraceDetail::Aggregate) {
    EpisodeTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(w.cfg.horizon));
    if (detail == TraceDetail::Full)
        trace.detail.resize(static_cast<std::size_t>(w.cfg.horizon));
    for (int t = 0; t < w.cfg.horizon; ++t) {
        StepDetail* d = detail == TraceDetail::Full ? &trace.detail[static_cast<std::size_t>(t)]
                                                    : nullptr;
        StepLog log = step_world(w, source, d);
        if (detail != TraceDetail::None) trace.steps.push_back(log);
    }
    trace.catastrophe_steps = w.catastrophe_log;
    return trace;
}

template <class ActionSource>
EpisodeTrace run_episode(const ScenarioConfig& cfg, std::uint64_t seed, ActionSource&& source,
                         TraceDetail detail = TraceDetail::Aggregate) {
    WorldState w = init_world(cfg, seed);
    return run_episode(w, source, detail);
}

} // namespace catsim
