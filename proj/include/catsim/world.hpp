#pragma once
#include <cstdint>
#include <limits>
#include <vector>

#include "catsim/config.hpp"
#include "catsim/individual.hpp"
#include "catsim/insurer.hpp"
#include "catsim/rng.hpp"

namespace catsim {

// The eight interventions the government may apply, one per step.
enum class Intervention : int {
    NoAction = 0,
    StateInsurance = 1,
    EaseSolvency = 2,
    Awareness = 3,
    Subsidy = 4,
    PremiumRegulation = 5,
    Prevention = 6,
    Reinsurance = 7,
};
inline constexpr int kNumInterventions = 8;

struct GovernmentState {
    double treasury = 0.0;
    double debt = 0.0;
    std::vector<double> receptiveness; // per-individual awareness receptiveness
    bool cat_since_last_campaign = false;

    // One-step in-force windows; an intervention at the end of step t shapes
    // the market during step t+1.
    bool subsidy_pending = false, subsidy_in_force = false;
    bool regulation_pending = false, regulation_in_force = false;
    bool reinsurance_pending = false, reinsurance_in_force = false;
};

// Per-step ledgers and outcome flags; one record per simulated step.
struct StepLog {
    int t = 0;
    bool catastrophe = false;

    // Individual-wealth ledger terms.
    double wealth_before = 0, wealth_after = 0;
    double interest = 0, savings = 0, cat_losses = 0;
    double claims_paid = 0, premiums_paid = 0, taxes_paid = 0;

    // Treasury ledger terms.
    double treasury_before = 0, debt_before = 0;
    double treasury_after = 0, debt_after = 0;
    double tax_revenue = 0, tax_baseline = 0;
    double gov_premium_income = 0, reins_premium_income = 0;
    double gov_claims = 0, backstop_payments = 0, subsidy_payments = 0;
    double admin_costs = 0, debt_interest = 0;

    // Market events.
    int sales_total = 0;
    int entries = 0;
    int exits = 0;
    double exited_assets = 0;
    double state_deficit = 0; // unpriced shortfall of government premiums vs fair

    // Fiscal externalities.
    double crowding_out = 0;
    double debt_tax_raise = 0;
    double insolvency_unmet = 0;
    double cry_wolf = 0;
    double moral_hazard = 0;

    // Government decision of the step.
    int rl_state = -1;
    int action = -1;
    double wtp = 0, mech_cost = 0, g_net = 0, reward = 0;

    // End-of-step aggregates.
    double coverage = 0;
    double gini_wealth = 0;
    double mean_premium_rate = 0; // mean p(1+l) over active insurers
    int active_insurers = 0;
    int capacity_total = 0;
    double total_wealth = 0;
};

enum class TraceDetail { None, Aggregate, Full };

// Per-step per-agent series kept only at full detail.
struct StepDetail {
    std::vector<double> alpha, wealth, pmax, best_quote; // per individual
    std::vector<int> provider;                           // -2 none, -1 government
    std::vector<int> insurer_id;                         // active roster this step
    std::vector<double> insurer_rate, insurer_loading, insurer_assets;
};

struct EpisodeTrace {
    std::vector<StepLog> steps;
    std::vector<StepDetail> detail; // empty unless TraceDetail::Full
    std::vector<int> catastrophe_steps;
};

struct WorldState {
    ScenarioConfig cfg;
    std::uint64_t seed = 0;
    int t = 0;
    std::vector<IndividualState> pop;
    std::vector<InsurerState> insurers;
    GovernmentState gov;
    std::vector<int> catastrophe_log;
    int next_insurer_id = 0;

    Stream stream(StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0) const {
        return substream(seed, tag, a, b);
    }
};

// Effective quote components under an in-force premium regulation.
inline double effective_risk_rate(const WorldState& w, const InsurerState& ins) {
    if (w.gov.regulation_in_force) return std::min(ins.model.p, w.cfg.theta);
    return ins.model.p;
}

inline double effective_loading(const WorldState& w, const InsurerState& ins) {
    if (w.gov.regulation_in_force) return std::min(ins.loading, w.cfg.reg_loading_cap);
    return ins.loading;
}

inline double quote_for(const WorldState& w, const InsurerState& ins,
                        const IndividualState& ind) {
    return premium_quote(effective_risk_rate(w, ins), effective_loading(w, ins),
                         ind.lambda_r, ind.wealth);
}

// Cheapest quote over active insurers; ties go to the lowest id. Capacity
// limits are applied only when a capacity vector is supplied (indexed like
// w.insurers).
struct QuotePick {
    int idx = -1; // index into w.insurers
    double quote = std::numeric_limits<double>::infinity();
};

inline QuotePick cheapest_quote(const WorldState& w, const IndividualState& ind,
                                const std::vector<int>* capacity = nullptr) {
    QuotePick pick;
    for (std::size_t j = 0; j < w.insurers.size(); ++j) {
        const InsurerState& ins = w.insurers[j];
        if (!ins.active) continue;
        if (capacity && (*capacity)[j] <= 0) continue;
        double q = quote_for(w, ins, ind);
        if (q < pick.quote) {
            pick.quote = q;
            pick.idx = static_cast<int>(j);
        }
    }
    return pick;
}

// Fair government premium for one individual, capped by willingness to pay.
inline double government_premium(const WorldState& w, const IndividualState& ind) {
    double fair = w.cfg.theta * ind.lambda_r * ind.wealth;
    return std::min(fair, std::max(0.0, ind.pmax));
}

inline double total_exposure(const WorldState& w) {
    double s = 0.0;
    for (const auto& ind : w.pop) s += ind.lambda_r * ind.wealth;
    return s;
}

} // namespace catsim
