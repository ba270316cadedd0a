#include "doctest.h"

#include <cmath>

#include "catsim/individual.hpp"
#include "catsim/utility.hpp"

using namespace catsim;

namespace {

// Oracle certainty equivalent: bisect U(x) = target using a from-scratch
// utility built on std::pow only.
double ce_oracle(double target_u, double phi, double k) {
    auto u = [&](double w) { return 1.0 - std::pow(1.0 + w / phi, -k); };
    double lo = 0.0, hi = 1e9;
    for (int i = 0; i < 300; ++i) {
        double mid = 0.5 * (lo + hi);
        if (u(mid) < target_u) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("utility is zero at zero wealth and approaches one") {
    ParetoUtilityParams u; // phi 2000, k 3
    CHECK(pareto_utility(0.0, u) == 0.0);
    CHECK(pareto_utility(1e6, u) > 0.999999);
    CHECK(pareto_utility(1e6, u) < 1.0);
    // At astronomical wealth the survival term underflows past one ulp and
    // the utility rounds to exactly one; it must never exceed it.
    CHECK(pareto_utility(1e12, u) <= 1.0);
}

TEST_CASE("utility is strictly increasing and concave") {
    ParetoUtilityParams u{10000.0, 2.0};
    double prev = -1.0;
    for (double w : {0.0, 100.0, 1000.0, 10000.0, 100000.0}) {
        double val = pareto_utility(w, u);
        CHECK(val > prev);
        prev = val;
    }
    // Concavity: midpoint utility above the chord.
    double a = 1000.0, b = 50000.0;
    double mid = pareto_utility(0.5 * (a + b), u);
    double chord = 0.5 * (pareto_utility(a, u) + pareto_utility(b, u));
    CHECK(mid > chord);
}

TEST_CASE("inverse utility round-trips") {
    // Wealth levels are kept moderate: past u ~ 1 - 1e-8 the forward map
    // stores the tail in the last few bits of the double and the round-trip
    // is limited by representation, not by the inverse.
    for (double k : {1.0, 2.0, 3.0, 2.5, 4.7}) {
        ParetoUtilityParams u{2000.0, k};
        for (double w : {0.0, 17.0, 1234.5, 12000.0, 30000.0}) {
            double back = pareto_utility_inverse(pareto_utility(w, u), u);
            CHECK(back == doctest::Approx(w).epsilon(1e-9));
        }
        // Starting from the utility side is well conditioned everywhere.
        for (double val : {0.05, 0.3, 0.9, 0.999, 0.9999999}) {
            double w = pareto_utility_inverse(val, u);
            CHECK(pareto_utility(w, u) == doctest::Approx(val).epsilon(1e-9));
        }
    }
}

TEST_CASE("integer-k fast path agrees with pow") {
    for (double k : {1.0, 2.0, 3.0, 5.0, 11.0}) {
        ParetoUtilityParams u{3333.0, k};
        for (double w : {0.0, 99.0, 5000.0, 7.7e5}) {
            double t = 1.0 + w / u.phi;
            CHECK(pareto_tail(w, u) == doctest::Approx(std::pow(t, -k)).epsilon(1e-13));
        }
    }
}

TEST_CASE("marginal utility matches a central difference") {
    for (double k : {2.0, 3.0, 3.6}) {
        ParetoUtilityParams u{5000.0, k};
        for (double c : {100.0, 2500.0, 40000.0}) {
            double h = c * 1e-6 + 1e-6;
            double num =
                (pareto_utility(c + h, u) - pareto_utility(c - h, u)) / (2.0 * h);
            CHECK(pareto_marginal(c, u) == doctest::Approx(num).epsilon(1e-7));
        }
    }
}

TEST_CASE("domain violations are rejected") {
    ParetoUtilityParams u;
    CHECK_THROWS_AS(pareto_utility(-1.0, u), std::invalid_argument);
    CHECK_THROWS_AS(pareto_utility_inverse(1.0, u), std::invalid_argument);
    CHECK_THROWS_AS(pareto_utility_inverse(-0.1, u), std::invalid_argument);
    ParetoUtilityParams badphi{0.0, 2.0};
    CHECK_THROWS_AS(pareto_utility(1.0, badphi), std::invalid_argument);
}

TEST_CASE("reservation premium matches the certainty equivalent oracle") {
    // Wealth 50000, loss share 0.5 with probability 0.1, phi 10000, k 2:
    // the worked example lands a little below 2600.
    ParetoUtilityParams u{10000.0, 2.0};
    double W = 50000.0, alpha = 0.1, lam = 0.5;

    auto uu = [&](double w) { return 1.0 - std::pow(1.0 + w / u.phi, -u.k); };
    double eu = (1.0 - alpha) * uu(W) + alpha * uu((1.0 - lam) * W);
    double ce = ce_oracle(eu, u.phi, u.k);
    double ew = (1.0 - alpha) * W + alpha * (1.0 - lam) * W;
    double want = ew - ce;

    double got = pmax_rational(W, alpha, lam, u);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    CHECK(got == doctest::Approx(2587.482161).epsilon(1e-6));
    CHECK(std::abs(got - 2587.0) < 1.0);
}

TEST_CASE("reservation premium vanishes for degenerate lotteries") {
    ParetoUtilityParams u{10000.0, 2.0};
    CHECK(pmax_rational(50000.0, 0.0, 0.5, u) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pmax_rational(50000.0, 1.0, 0.5, u) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pmax_rational(50000.0, 0.1, 0.0, u) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pmax_rational(0.0, 0.1, 0.5, u) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reservation premium works for non-integer curvature") {
    ParetoUtilityParams u{8000.0, 2.5};
    double W = 30000.0, alpha = 0.2, lam = 0.4;
    auto uu = [&](double w) { return 1.0 - std::pow(1.0 + w / u.phi, -u.k); };
    double eu = (1.0 - alpha) * uu(W) + alpha * uu((1.0 - lam) * W);
    double ce = ce_oracle(eu, u.phi, u.k);
    double ew = (1.0 - alpha) * W + alpha * (1.0 - lam) * W;
    CHECK(pmax_rational(W, alpha, lam, u) == doctest::Approx(ew - ce).epsilon(1e-6));
}
