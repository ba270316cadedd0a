#pragma once
#include <cstdio>
#include <ostream>
#include <string>

#include "catsim/world.hpp"

namespace catsim {

namespace detail {
inline void csv_num(std::ostream& os, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    os << buf;
}
} // namespace detail

// One row per step with the aggregate ledger. Output is fully determined by
// the trace contents; no timestamps or environment data.
inline void write_trace_csv(std::ostream& os, const EpisodeTrace& trace) {
    os << "t,catastrophe,coverage,gini_wealth,mean_premium_rate,active_insurers,"
          "capacity_total,sales,entries,exits,total_wealth,treasury,debt,"
          "rl_state,action,reward,wtp,g_net,tax_revenue,cat_losses,claims_paid,"
          "premiums_paid,state_deficit\n";
    for (const auto& s : trace.steps) {
        os << s.t << ',' << (s.catastrophe ? 1 : 0) << ',';
        detail::csv_num(os, s.coverage);
        os << ',';
        detail::csv_num(os, s.gini_wealth);
        os << ',';
        detail::csv_num(os, s.mean_premium_rate);
        os << ',' << s.active_insurers << ',' << s.capacity_total << ',' << s.sales_total
           << ',' << s.entries << ',' << s.exits << ',';
        detail::csv_num(os, s.total_wealth);
        os << ',';
        detail::csv_num(os, s.treasury_after);
        os << ',';
        detail::csv_num(os, s.debt_after);
        os << ',' << s.rl_state << ',' << s.action << ',';
        detail::csv_num(os, s.reward);
        os << ',';
        detail::csv_num(os, s.wtp);
        os << ',';
        detail::csv_num(os, s.g_net);
        os << ',';
        detail::csv_num(os, s.tax_revenue);
        os << ',';
        detail::csv_num(os, s.cat_losses);
        os << ',';
        detail::csv_num(os, s.claims_paid);
        os << ',';
        detail::csv_num(os, s.premiums_paid);
        os << ',';
        detail::csv_num(os, s.state_deficit);
        os << '\n';
    }
}

// One row per individual per step; only available from full-detail traces.
inline void write_individual_csv(std::ostream& os, const EpisodeTrace& trace) {
    os << "t,id,alpha,wealth,pmax,best_quote,provider\n";
    for (std::size_t t = 0; t < trace.detail.size(); ++t) {
        const StepDetail& d = trace.detail[t];
        for (std::size_t i = 0; i < d.alpha.size(); ++i) {
            os << t << ',' << i << ',';
            detail::csv_num(os, d.alpha[i]);
            os << ',';
            detail::csv_num(os, d.wealth[i]);
            os << ',';
            detail::csv_num(os, d.pmax[i]);
            os << ',';
            detail::csv_num(os, d.best_quote[i]);
            os << ',' << d.provider[i] << '\n';
        }
    }
}

// One row per active insurer per step; only available from full-detail traces.
inline void write_insurer_csv(std::ostream& os, const EpisodeTrace& trace) {
    os << "t,insurer,risk_rate,loading,assets\n";
    for (std::size_t t = 0; t < trace.detail.size(); ++t) {
        const StepDetail& d = trace.detail[t];
        for (std::size_t k = 0; k < d.insurer_id.size(); ++k) {
            os << t << ',' << d.insurer_id[k] << ',';
            detail::csv_num(os, d.insurer_rate[k]);
            os << ',';
            detail::csv_num(os, d.insurer_loading[k]);
            os << ',';
            detail::csv_num(os, d.insurer_assets[k]);
            os << '\n';
        }
    }
}

} // namespace catsim
