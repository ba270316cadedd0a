#include "doctest.h"

#include "catsim/welfare.hpp"

using namespace catsim;

TEST_CASE("welfare ratio conventions") {
    // Plain division when the programme costs money.
    CHECK(mvpf_ratio(50.0, 25.0, 10.0) == doctest::Approx(2.0));
    // Capped at the configured maximum.
    CHECK(mvpf_ratio(1000.0, 1.0, 10.0) == 10.0);
    // Value created at zero or negative net cost maxes out.
    CHECK(mvpf_ratio(5.0, 0.0, 10.0) == 10.0);
    CHECK(mvpf_ratio(5.0, -3.0, 10.0) == 10.0);
    // Nothing gained: zero, regardless of cost sign.
    CHECK(mvpf_ratio(0.0, 0.0, 10.0) == 0.0);
    CHECK(mvpf_ratio(0.0, 7.0, 10.0) == 0.0);
    CHECK(mvpf_ratio(0.0, -7.0, 10.0) == 0.0);
}

TEST_CASE("willingness to pay for public cover") {
    CHECK(wtp_state_insurance(false, 200.0, 0.0, 150.0) == 200.0);
    CHECK(wtp_state_insurance(false, -5.0, 0.0, 0.0) == 0.0);
    CHECK(wtp_state_insurance(true, 200.0, 180.0, 150.0) == doctest::Approx(30.0));
    CHECK(wtp_state_insurance(true, 200.0, 100.0, 150.0) == 0.0);
}

TEST_CASE("willingness to pay for prevention") {
    CHECK(wtp_prevention(0.2, 0.05, 20000.0) == doctest::Approx(200.0));
    CHECK(wtp_prevention(0.0, 0.5, 20000.0) == 0.0);
}

TEST_CASE("externalities map ledger fields in a fixed order") {
    StepLog log;
    log.crowding_out = 1.0;
    log.debt_tax_raise = 2.0;
    log.insolvency_unmet = 3.0;
    log.cry_wolf = 4.0;
    log.moral_hazard = 5.0;
    log.cat_losses = 6.0;
    auto ext = fiscal_externalities(log);
    CHECK(ext[0] == 1.0);
    CHECK(ext[1] == 2.0);
    CHECK(ext[2] == 3.0);
    CHECK(ext[3] == 4.0);
    CHECK(ext[4] == 5.0);
    CHECK(ext[5] == 6.0);
}

TEST_CASE("doing nothing scores zero even in a loss-making step") {
    ScenarioConfig cfg;
    InterventionEffects fx;
    fx.applied = true;
    StepLog log;
    log.cat_losses = 1e6;
    WelfareRecord rec = build_welfare_record(Intervention::NoAction, fx, log, cfg);
    CHECK(rec.wtp == 0.0);
    CHECK(rec.mechanical_cost == 0.0);
    CHECK(rec.g_net == doctest::Approx(1e6));
    CHECK(rec.mvpf == 0.0);
}

TEST_CASE("subsidy record assembles wtp, cost, and externalities") {
    ScenarioConfig cfg;
    InterventionEffects fx;
    fx.applied = true;
    fx.subsidy_saved_sum = 100.0;
    fx.subsidy_literal_sum = 80.0;
    fx.subsidy_entrant_sum = 20.0;
    fx.subsidy_cost = 100.0;
    StepLog log;

    WelfareRecord rec = build_welfare_record(Intervention::Subsidy, fx, log, cfg);
    CHECK(rec.wtp == doctest::Approx(120.0));
    CHECK(rec.mechanical_cost == doctest::Approx(100.0));
    CHECK(rec.g_net == doctest::Approx(100.0));
    CHECK(rec.mvpf == doctest::Approx(1.2));

    // The alternative reading swaps the incumbent term.
    cfg.subsidy_wtp_literal = true;
    WelfareRecord lit = build_welfare_record(Intervention::Subsidy, fx, log, cfg);
    CHECK(lit.wtp == doctest::Approx(100.0));
    CHECK(lit.mvpf == doctest::Approx(1.0));

    // Externalities inflate the denominator.
    cfg.subsidy_wtp_literal = false;
    log.moral_hazard = 50.0;
    WelfareRecord worse = build_welfare_record(Intervention::Subsidy, fx, log, cfg);
    CHECK(worse.g_net == doctest::Approx(150.0));
    CHECK(worse.mvpf == doctest::Approx(0.8));
}

TEST_CASE("state insurance record uses the enrolment details") {
    ScenarioConfig cfg;
    InterventionEffects fx;
    fx.applied = true;
    fx.target_was_policyholder = false;
    fx.target_pmax = 250.0;
    StepLog log;
    WelfareRecord rec = build_welfare_record(Intervention::StateInsurance, fx, log, cfg);
    CHECK(rec.wtp == doctest::Approx(250.0));
    CHECK(rec.mechanical_cost == doctest::Approx(cfg.cost_state));
    CHECK(rec.mvpf == doctest::Approx(250.0 / cfg.cost_state));
}

TEST_CASE("prevention record prices the removed exposure") {
    ScenarioConfig cfg;
    InterventionEffects fx;
    fx.applied = true;
    fx.prevention_delta = 0.2;
    fx.prevention_alpha = 0.05;
    fx.prevention_wealth = 20000.0;
    StepLog log;
    WelfareRecord rec = build_welfare_record(Intervention::Prevention, fx, log, cfg);
    CHECK(rec.wtp == doctest::Approx(0.2 * 0.05 * 20000.0));
    CHECK(rec.mechanical_cost == doctest::Approx(cfg.cost_prevention_unit * 0.2 * 20000.0));
}

TEST_CASE("reinsurance record pairs treaty demand with guarantee size") {
    ScenarioConfig cfg;
    InterventionEffects fx;
    fx.applied = true;
    fx.reinsurance_wtp_sum = 40.0;
    fx.reinsurance_need_sum = 400.0;
    StepLog log;
    WelfareRecord rec = build_welfare_record(Intervention::Reinsurance, fx, log, cfg);
    CHECK(rec.wtp == doctest::Approx(40.0));
    CHECK(rec.mechanical_cost == doctest::Approx(400.0));
    CHECK(rec.mvpf == doctest::Approx(0.1));
}

TEST_CASE("an intervention that could not apply scores like idleness") {
    ScenarioConfig cfg;
    InterventionEffects fx; // applied stays false
    fx.target_pmax = 999.0;
    StepLog log;
    WelfareRecord rec = build_welfare_record(Intervention::StateInsurance, fx, log, cfg);
    CHECK(rec.wtp == 0.0);
    CHECK(rec.mechanical_cost == 0.0);
    CHECK(rec.mvpf == 0.0);
}

TEST_CASE("rewards never exceed the configured cap") {
    ScenarioConfig cfg;
    InterventionEffects fx;
    fx.applied = true;
    fx.marginal_pmax_sum = 1e9;
    StepLog log;
    WelfareRecord rec = build_welfare_record(Intervention::EaseSolvency, fx, log, cfg);
    CHECK(rec.mvpf == cfg.r_max);
}
