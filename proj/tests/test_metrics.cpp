#include "doctest.h"

#include <cmath>
#include <vector>

#include "catsim/metrics.hpp"
#include "catsim/rng.hpp"

using namespace catsim;

namespace {

double gini_quadratic(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double total = 0.0, abs_diff = 0.0;
    for (double x : v) total += x;
    if (total <= 0.0) return 0.0;
    for (double a : v)
        for (double b : v) abs_diff += std::abs(a - b);
    double n = static_cast<double>(v.size());
    return abs_diff / (2.0 * n * total);
}

// Builds an aggregate-only trace skeleton with flat premium quotes and a
// given coverage path.
EpisodeTrace make_trace(const std::vector<double>& coverage, const std::vector<int>& cats) {
    EpisodeTrace tr;
    for (std::size_t t = 0; t < coverage.size(); ++t) {
        StepLog s;
        s.t = static_cast<int>(t);
        s.coverage = coverage[t];
        s.mean_premium_rate = 0.10;
        s.active_insurers = 3;
        for (int c : cats)
            if (c == static_cast<int>(t)) s.catastrophe = true;
        tr.steps.push_back(s);
    }
    tr.catastrophe_steps = cats;
    return tr;
}

} // namespace

TEST_CASE("gini of small hand-computable vectors") {
    CHECK(gini({1.0, 2.0, 3.0}) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    CHECK(gini({0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gini({4.0, 4.0, 4.0, 4.0}) == 0.0);
    CHECK(gini({}) == 0.0);
    CHECK(gini({7.0}) == 0.0);
    CHECK(gini({0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("sorted-formula gini matches the quadratic definition") {
    Stream st(5);
    std::vector<double> v;
    for (int i = 0; i < 200; ++i) v.push_back(st.uniform(0.0, 1e5));
    CHECK(gini(v) == doctest::Approx(gini_quadratic(v)).epsilon(1e-12));
}

TEST_CASE("gini of the calibrated income split") {
    // 50 low, 30 middle, 20 upper incomes from the default calibration.
    std::vector<double> v;
    for (int i = 0; i < 50; ++i) v.push_back(5000.0);
    for (int i = 0; i < 30; ++i) v.push_back(12000.0);
    for (int i = 0; i < 20; ++i) v.push_back(50000.0);
    CHECK(gini(v) == doctest::Approx(0.486335403726708).epsilon(1e-12));
    CHECK(std::abs(gini(v) - 0.486) < 0.001);
}

TEST_CASE("coverage rate weighs contracts by exposure") {
    WorldState w;
    w.cfg = ScenarioConfig{};
    IndividualState a;
    a.id = 0;
    a.wealth = 1000.0;
    a.lambda_r = 0.1; // exposure 100, insured
    a.contract = Contract{0, 5.0, false};
    IndividualState b;
    b.id = 1;
    b.wealth = 1000.0;
    b.lambda_r = 0.3; // exposure 300, uninsured
    w.pop.push_back(a);
    w.pop.push_back(b);
    CHECK(coverage_rate(w) == doctest::Approx(0.25));

    w.pop[1].contract = Contract{-1, 5.0, true};
    CHECK(coverage_rate(w) == doctest::Approx(1.0));

    for (auto& ind : w.pop) ind.lambda_r = 0.0;
    CHECK(coverage_rate(w) == 0.0);
}

TEST_CASE("wealth vector lists the population in order") {
    WorldState w;
    for (int i = 0; i < 3; ++i) {
        IndividualState ind;
        ind.id = i;
        ind.wealth = 100.0 * (i + 1);
        w.pop.push_back(ind);
    }
    auto v = wealth_vector(w);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 100.0);
    CHECK(v[2] == 300.0);
}

TEST_CASE("an empty trace settles no verdicts") {
    EpisodeTrace tr;
    StylizedFactReport rep = check_stylized_facts(tr);
    for (const auto& f : rep.facts) CHECK_FALSE(f.applicable);
}

TEST_CASE("a quiet episode only judges terminal coverage") {
    EpisodeTrace tr = make_trace({0.01, 0.02, 0.01, 0.01, 0.01}, {});
    StylizedFactReport rep = check_stylized_facts(tr);
    CHECK(rep.facts[0].applicable);
    CHECK(rep.facts[0].pass); // 0.01 < 0.05
    CHECK_FALSE(rep.facts[1].applicable);
    CHECK_FALSE(rep.facts[2].applicable); // needs per-individual detail
    CHECK_FALSE(rep.facts[3].applicable);
    CHECK_FALSE(rep.facts[4].applicable);
    CHECK_FALSE(rep.facts[5].applicable);

    EpisodeTrace high = make_trace({0.01, 0.3}, {});
    CHECK_FALSE(check_stylized_facts(high).facts[0].pass);
}

TEST_CASE("coverage spike after a shock wins its contest") {
    std::vector<double> cov(12, 0.0);
    cov[5] = 0.3;
    cov[6] = 0.25;
    cov[7] = 0.1;
    cov[11] = 0.02;
    EpisodeTrace tr = make_trace(cov, {5});
    StylizedFactReport rep = check_stylized_facts(tr);
    CHECK(rep.facts[1].applicable);
    CHECK(rep.facts[1].pass);
    CHECK(rep.facts[1].value == doctest::Approx(1.0));
}

TEST_CASE("a shock at the very first step cannot be scored") {
    EpisodeTrace tr = make_trace({0.3, 0.2, 0.1, 0.0, 0.0}, {0});
    CHECK_FALSE(check_stylized_facts(tr).facts[1].applicable);
}

TEST_CASE("one shock's response never pollutes the next shock's baseline") {
    // Steps 5 and 6 carry the first shock's response; the second shock at 7
    // must be judged against the quiet level 0.2, not against that spike.
    std::vector<double> cov{0.2, 0.2, 0.2, 0.2, 0.2, 0.9, 0.8, 0.5, 0.5, 0.5, 0.5, 0.5};
    EpisodeTrace tr = make_trace(cov, {5, 7});
    StylizedFactReport rep = check_stylized_facts(tr);
    CHECK(rep.facts[1].applicable);
    // Both contests win; without the baseline exclusion the second one would
    // compare 0.5 against 0.63 and lose.
    CHECK(rep.facts[1].value == doctest::Approx(1.0));
    CHECK(rep.facts[1].pass);
}

TEST_CASE("half the shocks responding carries the verdict, none fails it") {
    // First shock kills coverage, second one revives it: one win of two.
    std::vector<double> cov{0.5, 0.5, 0.5, 0.2, 0.2, 0.2, 0.5, 0.5, 0.9, 0.9, 0.9, 0.5};
    EpisodeTrace split = make_trace(cov, {3, 8});
    StylizedFactReport rep = check_stylized_facts(split);
    CHECK(rep.facts[1].value == doctest::Approx(0.5));
    CHECK(rep.facts[1].pass);

    std::vector<double> down{0.5, 0.5, 0.5, 0.2, 0.2, 0.2, 0.5, 0.5, 0.3, 0.3, 0.3, 0.3};
    EpisodeTrace both_lose = make_trace(down, {3, 8});
    StylizedFactReport rep2 = check_stylized_facts(both_lose);
    CHECK(rep2.facts[1].value == doctest::Approx(0.0));
    CHECK_FALSE(rep2.facts[1].pass);
}

TEST_CASE("premiums hardening at the shock step is detected") {
    EpisodeTrace tr = make_trace({0.1, 0.1, 0.1, 0.1, 0.1, 0.1}, {3});
    tr.steps[3].mean_premium_rate = 0.15; // up from the flat 0.10
    StylizedFactReport rep = check_stylized_facts(tr);
    CHECK(rep.facts[3].applicable);
    CHECK(rep.facts[3].pass);
    CHECK(rep.facts[3].value == doctest::Approx(0.05));

    tr.steps[3].mean_premium_rate = 0.08;
    CHECK_FALSE(check_stylized_facts(tr).facts[3].pass);

    // A market with nobody left to quote settles nothing.
    tr.steps[3].active_insurers = 0;
    CHECK_FALSE(check_stylized_facts(tr).facts[3].applicable);
}

TEST_CASE("exits inside the post-shock window are spotted") {
    EpisodeTrace tr = make_trace(std::vector<double>(10, 0.1), {4});
    tr.steps[6].exits = 1;
    StylizedFactReport rep = check_stylized_facts(tr);
    CHECK(rep.facts[4].applicable);
    CHECK(rep.facts[4].pass);
    CHECK(rep.facts[4].value == doctest::Approx(6.0));

    EpisodeTrace none = make_trace(std::vector<double>(10, 0.1), {4});
    none.steps[9].exits = 1; // outside the window of 3
    CHECK_FALSE(check_stylized_facts(none).facts[4].pass);
}

TEST_CASE("post-shock buyers lapsing quickly is read from the detail") {
    EpisodeTrace tr = make_trace(std::vector<double>(12, 0.1), {5});
    tr.detail.resize(12);
    for (int t = 0; t < 12; ++t) {
        StepDetail& d = tr.detail[t];
        // Individual 0 buys at the shock and drops out two steps later;
        // individual 1 never buys but wants cover it cannot afford.
        d.provider = {(t == 5 || t == 6) ? 0 : -2, -2};
        d.pmax = {10.0, 50.0};
        d.best_quote = {5.0, 80.0};
        d.alpha = {0.01, 0.01};
        d.wealth = {1000.0, 1000.0};
    }
    StylizedFactReport rep = check_stylized_facts(tr);
    CHECK(rep.facts[2].applicable);
    CHECK(rep.facts[2].value == doctest::Approx(2.0)); // lapse delay in steps
    CHECK(rep.facts[2].pass);
    CHECK(rep.facts[5].applicable);
    CHECK(rep.facts[5].pass); // pmax 50 below the cheapest quote 80
}

TEST_CASE("a later shock censors the lapse measurement") {
    EpisodeTrace tr = make_trace(std::vector<double>(12, 0.1), {5, 7});
    tr.detail.resize(12);
    for (int t = 0; t < 12; ++t) {
        StepDetail& d = tr.detail[t];
        d.provider = {(t >= 5 && t <= 8) ? 0 : -2};
        d.pmax = {10.0};
        d.best_quote = {5.0};
        d.alpha = {0.01};
        d.wealth = {1000.0};
    }
    StylizedFactReport rep = check_stylized_facts(tr);
    // The only buyer is still covered when the next shock lands, so no
    // clean lapse delay exists.
    CHECK_FALSE(rep.facts[2].applicable);
}
