#pragma once
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "catsim/utility.hpp"

namespace catsim {

enum class SocialClass : int { Low = 0, Middle = 1, Upper = 2 };

// Behavioural biases, all drawn once per individual at setup.
struct BiasProfile {
    double beta_u = 2.5;  // risk-perception amplification after a hit, in [2,3]
    double beta_o = 0.5;  // optimism / memory fade per quiet step, in [0,1]
    double beta_m = 0.5;  // myopia discount on next-period utility, in [0,1]
    double beta_f = 0.5;  // chance of using the simplified premium heuristic
    double beta_n = 0.5;  // inertia: chance of taking no purchase action
    double beta_h = 0.5;  // herding weight on the class-mean reservation premium
};

struct Contract {
    int provider = -1;      // insurer id; -1 when government-issued
    double premium = 0.0;   // per-step premium actually charged
    bool government = false;
};

struct IndividualState {
    int id = 0;
    SocialClass cls = SocialClass::Low;
    double income = 0.0;    // annual income Y
    double wealth = 0.0;    // current wealth W, >= 0
    double alpha = 0.0;     // perceived catastrophe probability, in [0,1]
    double lambda_r = 0.0;  // real loss share if a catastrophe hits, in [0,1]
    double lambda_p = 0.0;  // perceived loss share, in [0,1]
    BiasProfile bias;
    double consumption = 0.0;
    double savings = 0.0;
    double pmax = 0.0;      // reservation premium chosen this step
    double pmax_prev = 0.0; // last step's value, input to the herding rule
    std::optional<Contract> contract;
    bool gov_eligible = true; // permanently false after cancelling a government policy
};

// Risk-perception update. A hit multiplies alpha by (1 + beta_u); a quiet
// step shrinks it by (1 - beta_o). Result clamped to [0,1].
inline double update_risk_perception(double alpha, bool just_hit,
                                     double beta_u, double beta_o) {
    double next = just_hit ? alpha * (1.0 + beta_u) : alpha * (1.0 - beta_o);
    return std::clamp(next, 0.0, 1.0);
}

// Baseline perceived loss share: optimism shades the real exposure.
inline double rational_perceived_loss(double lambda_r, double beta_o) {
    return (1.0 - beta_o) * lambda_r;
}

inline double accrue_wealth(double wealth, double savings, double r) {
    return (1.0 + r) * wealth + savings;
}

// Reservation premium of a fully informed individual: expected wealth minus
// the certainty equivalent of the binary lottery (loss lambda_p * W with
// probability alpha). This is the pure risk premium; it vanishes at alpha=0
// and alpha=1 where the lottery is degenerate.
inline double pmax_rational(double wealth, double alpha, double lambda_p,
                            const ParetoUtilityParams& u) {
    double w_loss = (1.0 - lambda_p) * wealth;
    double tail = (1.0 - alpha) * pareto_tail(wealth, u) + alpha * pareto_tail(w_loss, u);
    double ce = pareto_tail_inverse(tail, u);
    double ew = (1.0 - alpha) * wealth + alpha * w_loss;
    return std::max(0.0, ew - ce);
}

// Boundedly rational shortcut: blend own previous reservation premium with
// the class mean observed last step.
inline double pmax_simplified(double pmax_prev, double class_mean_prev, double beta_h) {
    return (1.0 - beta_h) * pmax_prev + beta_h * class_mean_prev;
}

struct ConsumptionPlan {
    double consumption = 0.0;
    double savings = 0.0; // income minus consumption; interest accrues separately
};

// Euler residual for the two-period consumption plan.
//
// Choosing C today leaves W1 = (1+r)W + Y - C after accrual. Next step a
// catastrophe removes a perceived share lambda_p of W1 with probability
// alpha, and the individual expects to consume sustainably (income plus
// interest) from whatever wealth survives. The first-order condition is
//   U'(C) = beta_m (1+r) E[ U'(Y + r * W_next) ].
inline double euler_residual(double c, double wealth, double income, double r,
                             double beta_m, double alpha, double lambda_p,
                             const ParetoUtilityParams& u) {
    double w1 = (1.0 + r) * wealth + income - c;
    double c_keep = income + r * w1;
    double c_loss = income + r * (1.0 - lambda_p) * w1;
    double rhs = beta_m * (1.0 + r) *
                 ((1.0 - alpha) * pareto_marginal(c_keep, u) + alpha * pareto_marginal(c_loss, u));
    return pareto_marginal(c, u) - rhs;
}

// Solves the Euler condition for C on (0, Y+W]. The residual is strictly
// decreasing in C, so a bracket-keeping Newton iteration with bisection
// fallback converges fast; corner solutions are taken when the residual
// does not change sign inside the interval.
inline ConsumptionPlan plan_consumption(double wealth, double income, double r,
                                        double beta_m, double alpha, double lambda_p,
                                        const ParetoUtilityParams& u,
                                        double tol = 1e-9, int max_iter = 200) {
    if (wealth < 0.0 || income < 0.0)
        throw std::invalid_argument("plan_consumption: wealth and income must be non-negative");
    double hi = income + wealth;
    ConsumptionPlan plan;
    if (hi <= 0.0) {
        plan.consumption = 0.0;
        plan.savings = income;
        return plan;
    }

    auto f = [&](double c) {
        return euler_residual(c, wealth, income, r, beta_m, alpha, lambda_p, u);
    };

    double f_hi = f(hi);
    if (f_hi >= 0.0) { // marginal utility today still dominates: consume everything
        plan.consumption = hi;
        plan.savings = -wealth; // income - (income + wealth), kept exact
        return plan;
    }
    double lo = 0.0;
    double f_lo = f(lo);
    if (f_lo <= 0.0) { // degenerate patience: push consumption to the floor
        plan.consumption = tol;
        plan.savings = income - tol;
        return plan;
    }

    // Closed-form solution of the alpha=0 case seeds the iteration.
    double kk = beta_m * (1.0 + r);
    double m = std::pow(kk, -1.0 / (u.k + 1.0));
    double b = (1.0 + r) * wealth + income;
    double c = (m * (u.phi + income + r * b) - u.phi) / (1.0 + m * r);
    if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);

    for (int it = 0; it < max_iter; ++it) {
        double fc = f(c);
        if (fc > 0.0) lo = c; else hi = c;
        if (hi - lo <= tol) break;

        // Analytic derivative of the residual in C.
        double w1 = (1.0 + r) * wealth + income - c;
        double c_keep = income + r * w1;
        double c_loss = income + r * (1.0 - lambda_p) * w1;
        auto dmarg = [&](double x) { // d/dx U'(x)
            double t = 1.0 + x / u.phi;
            return -(u.k * (u.k + 1.0) / (u.phi * u.phi)) * pareto_tail(x, u) / (t * t);
        };
        double deriv = dmarg(c) + beta_m * (1.0 + r) * r *
                                      ((1.0 - alpha) * dmarg(c_keep) +
                                       alpha * (1.0 - lambda_p) * dmarg(c_loss));
        double next = (deriv < 0.0) ? c - fc / deriv : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        c = next;
    }

    plan.consumption = c;
    plan.savings = income - c;
    return plan;
}

// Insured individuals enjoying subsidised or below-fair premiums grow
// slightly careless. Returns the increase in expected loss (delta lambda * W)
// for the fiscal-externality log.
inline double apply_moral_hazard(IndividualState& ind, double m_h) {
    double before = ind.lambda_r;
    double after = std::min(1.0, before * m_h);
    if (after == before) return 0.0;
    ind.lambda_r = after;
    if (before > 0.0) ind.lambda_p = std::min(1.0, ind.lambda_p * (after / before));
    else ind.lambda_p = rational_perceived_loss(after, ind.bias.beta_o);
    return (after - before) * ind.wealth;
}

} // namespace catsim
