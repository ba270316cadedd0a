#include "doctest.h"

#include <cmath>

#include "catsim/individual.hpp"

using namespace catsim;

namespace {

// From-scratch first-order-condition residual used as the solver oracle.
// Marginal utilities go through std::pow to stay independent of the library
// fast paths.
double residual_oracle(double c, double W, double Y, double r, double bm,
                       double alpha, double lam, double phi, double k) {
    auto marg = [&](double x) {
        return (k / phi) * std::pow(1.0 + x / phi, -(k + 1.0));
    };
    double w1 = (1.0 + r) * W + Y - c;
    double rhs = bm * (1.0 + r) *
                 ((1.0 - alpha) * marg(Y + r * w1) +
                  alpha * marg(Y + r * (1.0 - lam) * w1));
    return marg(c) - rhs;
}

double consumption_oracle(double W, double Y, double r, double bm, double alpha,
                          double lam, double phi, double k) {
    double lo = 1e-12, hi = Y + W;
    for (int i = 0; i < 300; ++i) {
        double mid = 0.5 * (lo + hi);
        if (residual_oracle(mid, W, Y, r, bm, alpha, lam, phi, k) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("risk perception jumps after a hit and fades when quiet") {
    CHECK(update_risk_perception(0.1, true, 2.0, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(update_risk_perception(0.5, false, 2.0, 0.2) == doctest::Approx(0.4).epsilon(1e-12));
    // Clamped into [0,1].
    CHECK(update_risk_perception(0.6, true, 2.0, 0.5) == 1.0);
    CHECK(update_risk_perception(0.0, true, 3.0, 0.5) == 0.0);
}

TEST_CASE("perceived loss share shades the real exposure by optimism") {
    CHECK(rational_perceived_loss(0.8, 0.25) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(rational_perceived_loss(0.8, 0.0) == doctest::Approx(0.8));
    CHECK(rational_perceived_loss(0.8, 1.0) == 0.0);
}

TEST_CASE("simplified reservation premium blends own and peer values") {
    CHECK(pmax_simplified(100.0, 200.0, 0.25) == doctest::Approx(125.0).epsilon(1e-12));
    CHECK(pmax_simplified(100.0, 200.0, 0.0) == 100.0);
    CHECK(pmax_simplified(100.0, 200.0, 1.0) == 200.0);
}

TEST_CASE("wealth accrual adds interest then savings") {
    CHECK(accrue_wealth(1000.0, 50.0, 0.02) == doctest::Approx(1070.0).epsilon(1e-12));
    CHECK(accrue_wealth(1000.0, -200.0, 0.0) == doctest::Approx(800.0));
}

TEST_CASE("consumption plan matches an independent bisection oracle") {
    ParetoUtilityParams u{10000.0, 2.0};
    double W = 10000.0, Y = 5000.0, r = 0.02, bm = 0.9, alpha = 0.05, lam = 0.4;
    auto plan = plan_consumption(W, Y, r, bm, alpha, lam, u);
    double want = consumption_oracle(W, Y, r, bm, alpha, lam, u.phi, u.k);
    CHECK(plan.consumption == doctest::Approx(want).epsilon(1e-6));
    CHECK(plan.savings == doctest::Approx(Y - plan.consumption).epsilon(1e-12));

    // A second point with the default curvature.
    ParetoUtilityParams u2; // phi 2000, k 3
    auto plan2 = plan_consumption(12000.0, 5000.0, 0.02, 0.6, 0.01, 0.3, u2);
    double want2 = consumption_oracle(12000.0, 5000.0, 0.02, 0.6, 0.01, 0.3, u2.phi, u2.k);
    CHECK(plan2.consumption == doctest::Approx(want2).epsilon(1e-6));
}

TEST_CASE("patience exactly offsetting interest sustains wealth") {
    // With discounting equal to 1/(1+r) and no perceived risk, the plan
    // consumes income plus interest and keeps wealth constant.
    ParetoUtilityParams u{10000.0, 2.0};
    double r = 0.02;
    auto plan = plan_consumption(10000.0, 5000.0, r, 1.0 / (1.0 + r), 0.0, 0.0, u);
    CHECK(plan.consumption == doctest::Approx(5000.0 + r * 10000.0).epsilon(1e-6));
    double w_next = accrue_wealth(10000.0, plan.savings, r);
    CHECK(w_next == doctest::Approx(10000.0).epsilon(1e-6));
}

TEST_CASE("a fully myopic planner consumes everything") {
    ParetoUtilityParams u{10000.0, 2.0};
    auto plan = plan_consumption(7000.0, 3000.0, 0.02, 0.0, 0.1, 0.5, u);
    CHECK(plan.consumption == 10000.0);
    CHECK(plan.savings == -7000.0);
    // Wealth is exactly exhausted after accrual at zero interest carry.
    CHECK(accrue_wealth(7000.0, plan.savings, 0.0) == 0.0);
}

TEST_CASE("perceived risk lowers consumption") {
    ParetoUtilityParams u{2000.0, 3.0};
    auto calm = plan_consumption(20000.0, 8000.0, 0.02, 0.8, 0.0, 0.0, u);
    auto wary = plan_consumption(20000.0, 8000.0, 0.02, 0.8, 0.3, 0.8, u);
    CHECK(wary.consumption < calm.consumption);
}

TEST_CASE("consumption plan rejects negative endowments") {
    ParetoUtilityParams u;
    CHECK_THROWS_AS(plan_consumption(-1.0, 100.0, 0.02, 0.5, 0.1, 0.5, u),
                    std::invalid_argument);
    CHECK_THROWS_AS(plan_consumption(100.0, -1.0, 0.02, 0.5, 0.1, 0.5, u),
                    std::invalid_argument);
}

TEST_CASE("zero endowment plans are a no-op") {
    ParetoUtilityParams u;
    auto plan = plan_consumption(0.0, 0.0, 0.02, 0.5, 0.1, 0.5, u);
    CHECK(plan.consumption == 0.0);
    CHECK(plan.savings == 0.0);
}

TEST_CASE("reservation premium grows with perceived probability when risk is small") {
    ParetoUtilityParams u; // phi 2000, k 3
    double prev = -1.0;
    for (double a : {0.001, 0.01, 0.05, 0.2}) {
        double p = pmax_rational(12000.0, a, 0.5, u);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("moral hazard raises exposure proportionally and caps at one") {
    IndividualState ind;
    ind.wealth = 10000.0;
    ind.lambda_r = 0.5;
    ind.lambda_p = 0.4;
    double delta = apply_moral_hazard(ind, 1.02);
    CHECK(ind.lambda_r == doctest::Approx(0.51).epsilon(1e-12));
    CHECK(ind.lambda_p == doctest::Approx(0.408).epsilon(1e-12));
    CHECK(delta == doctest::Approx(0.01 * 10000.0).epsilon(1e-9));

    ind.lambda_r = 0.999;
    ind.lambda_p = 0.999;
    apply_moral_hazard(ind, 1.1);
    CHECK(ind.lambda_r == 1.0);
    CHECK(ind.lambda_p <= 1.0);

    IndividualState clean;
    clean.wealth = 10000.0;
    clean.lambda_r = 0.0;
    CHECK(apply_moral_hazard(clean, 1.02) == 0.0);
    CHECK(clean.lambda_r == 0.0);
}
