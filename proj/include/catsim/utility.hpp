#pragma once
#include <cmath>
#include <stdexcept>

#include "catsim/math_util.hpp"

namespace catsim {

// Bounded Pareto-form utility U(W) = 1 - (1 + W/phi)^-k on W >= 0.
// Satiation at 1 keeps certainty equivalents finite for any lottery.
struct ParetoUtilityParams {
    double phi = 2000.0; // scale, > 0
    double k = 3.0;      // curvature, > 0

    bool integer_k() const { return k == std::floor(k) && k >= 1.0 && k <= 64.0; }
};

// (1 + W/phi)^-k, i.e. 1 - U(W). Working with the survival form avoids
// cancellation when utilities sit close to 1 for wealthy individuals.
inline double pareto_tail(double w, const ParetoUtilityParams& u) {
    double t = 1.0 + w / u.phi;
    if (u.integer_k()) return 1.0 / ipow(t, static_cast<int>(u.k));
    return std::pow(t, -u.k);
}

inline double pareto_utility(double w, const ParetoUtilityParams& u) {
    if (!(u.phi > 0.0) || !(u.k > 0.0))
        throw std::invalid_argument("pareto_utility: phi and k must be positive");
    if (w < 0.0) throw std::invalid_argument("pareto_utility: wealth must be non-negative");
    return 1.0 - pareto_tail(w, u);
}

// Wealth whose tail equals q, q in (0, 1]: W = phi * (q^(-1/k) - 1).
inline double pareto_tail_inverse(double q, const ParetoUtilityParams& u) {
    double inv;
    if (u.k == 2.0) inv = 1.0 / std::sqrt(q);
    else if (u.k == 3.0) inv = 1.0 / std::cbrt(q);
    else if (u.k == 1.0) inv = 1.0 / q;
    else inv = std::pow(q, -1.0 / u.k);
    return u.phi * (inv - 1.0);
}

// Inverse on u in [0, 1): W = phi * ((1-u)^(-1/k) - 1).
inline double pareto_utility_inverse(double val, const ParetoUtilityParams& u) {
    if (!(u.phi > 0.0) || !(u.k > 0.0))
        throw std::invalid_argument("pareto_utility_inverse: phi and k must be positive");
    if (!(val >= 0.0 && val < 1.0))
        throw std::invalid_argument("pareto_utility_inverse: value must lie in [0,1)");
    return pareto_tail_inverse(1.0 - val, u);
}

// Marginal utility U'(C) = (k/phi) * (1 + C/phi)^-(k+1).
inline double pareto_marginal(double c, const ParetoUtilityParams& u) {
    double t = 1.0 + c / u.phi;
    double tail;
    if (u.integer_k()) tail = 1.0 / ipow(t, static_cast<int>(u.k) + 1);
    else tail = std::pow(t, -(u.k + 1.0));
    return (u.k / u.phi) * tail;
}

} // namespace catsim
