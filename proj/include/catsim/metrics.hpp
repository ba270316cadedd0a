#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "catsim/world.hpp"

namespace catsim {

// Share of total expected loss that is covered by a contract. Zero when
// nobody carries exposure.
inline double coverage_rate(const WorldState& w) {
    double covered = 0.0, total = 0.0;
    for (const auto& ind : w.pop) {
        double x = ind.lambda_r * ind.wealth;
        total += x;
        if (ind.contract) covered += x;
    }
    if (total <= 0.0) return 0.0;
    return covered / total;
}

// Gini coefficient of a non-negative vector: mean absolute difference over
// twice the mean, computed from the sorted values in O(n log n). Zero for
// empty, single, or all-zero inputs.
inline double gini(std::vector<double> v) {
    if (v.size() < 2) return 0.0;
    double total = 0.0;
    for (double x : v) total += x;
    if (total <= 0.0) return 0.0;
    std::sort(v.begin(), v.end());
    double n = static_cast<double>(v.size());
    double weighted = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        weighted += (2.0 * (static_cast<double>(i) + 1.0) - n - 1.0) * v[i];
    return weighted / (n * total);
}

inline std::vector<double> wealth_vector(const WorldState& w) {
    std::vector<double> out;
    out.reserve(w.pop.size());
    for (const auto& ind : w.pop) out.push_back(ind.wealth);
    return out;
}

struct FactResult {
    bool applicable = false;
    bool pass = false;
    double value = 0.0; // fact-specific summary statistic
};

// Verdicts for the six regularities a healthy run should display:
//  1 terminal coverage collapses;       2 coverage jumps after a catastrophe;
//  3 post-catastrophe buyers lapse fast; 4 premiums harden after a catastrophe;
//  5 insurers exit near catastrophes;    6 positive demand priced out of the market.
struct StylizedFactReport {
    std::array<FactResult, 6> facts{};
};

struct FactThresholds {
    double terminal_coverage = 0.05;
    int window = 3;
    int lapse_limit = 10;
};

inline StylizedFactReport check_stylized_facts(const EpisodeTrace& trace,
                                               const FactThresholds& thr = {}) {
    StylizedFactReport rep;
    const auto& steps = trace.steps;
    int t_end = static_cast<int>(steps.size());
    if (t_end == 0) return rep;
    const auto& cats = trace.catastrophe_steps;
    bool full = !trace.detail.empty();

    { // fact 1: terminal coverage below threshold
        auto& f = rep.facts[0];
        f.applicable = true;
        f.value = steps.back().coverage;
        f.pass = f.value < thr.terminal_coverage;
    }

    { // fact 2: coverage after a catastrophe beats the quiet baseline before it.
        // Each catastrophe is scored on its own. Baseline steps that still sit
        // inside an earlier catastrophe's response window are discarded so one
        // shock's response is never counted against the next shock's baseline.
        // The trace shows the fact when at least half the measurable shocks
        // come out higher after than before.
        auto& f = rep.facts[1];
        int wins = 0, contests = 0;
        for (int c : cats) {
            if (c < 1) continue;
            double before = 0, after = 0;
            int nb = 0, na = 0;
            for (int s = std::max(0, c - thr.window); s < c; ++s) {
                bool echo = false;
                for (int c2 : cats)
                    if (c2 < c && s >= c2 && s < c2 + thr.window) echo = true;
                if (echo) continue;
                before += steps[s].coverage;
                ++nb;
            }
            for (int s = c; s < std::min(t_end, c + thr.window); ++s) {
                after += steps[s].coverage;
                ++na;
            }
            if (nb == 0 || na == 0) continue;
            ++contests;
            if (after / na > before / nb) ++wins;
        }
        if (contests > 0) {
            f.applicable = true;
            f.value = static_cast<double>(wins) / contests;
            f.pass = 2 * wins >= contests;
        }
    }

    if (full) { // fact 3: median lapse of post-catastrophe buyers within limit
        auto& f = rep.facts[2];
        std::vector<double> delays;
        for (int c : cats) {
            for (std::size_t i = 0; i < trace.detail[0].provider.size(); ++i) {
                if (c >= 1 && trace.detail[c - 1].provider[i] != -2) continue;
                int bought = -1;
                for (int s = c; s < std::min(t_end, c + thr.window); ++s)
                    if (trace.detail[s].provider[i] != -2) {
                        bought = s;
                        break;
                    }
                if (bought < 0) continue;
                int lapse = -1;
                bool censored = false;
                for (int s = bought + 1; s < t_end; ++s) {
                    if (s != c && steps[s].catastrophe) {
                        censored = true;
                        break;
                    }
                    if (trace.detail[s].provider[i] == -2) {
                        lapse = s;
                        break;
                    }
                }
                if (censored || lapse < 0) continue;
                delays.push_back(static_cast<double>(lapse - c));
            }
        }
        if (!delays.empty()) {
            f.applicable = true;
            f.value = median_of(delays);
            f.pass = f.value <= thr.lapse_limit;
        }
    }

    { // fact 4: mean quoted premium rate rises at the catastrophe step
        auto& f = rep.facts[3];
        double diff = 0;
        int cnt = 0;
        for (int c : cats) {
            if (c < 1) continue;
            if (steps[c].active_insurers == 0 || steps[c - 1].active_insurers == 0) continue;
            diff += steps[c].mean_premium_rate - steps[c - 1].mean_premium_rate;
            ++cnt;
        }
        if (cnt > 0) {
            f.applicable = true;
            f.value = diff / cnt;
            f.pass = f.value > 0.0;
        }
    }

    { // fact 5: an insurer exit lands within the window after a catastrophe
        auto& f = rep.facts[4];
        if (!cats.empty()) {
            f.applicable = true;
            for (int c : cats)
                for (int s = c; s <= std::min(t_end - 1, c + thr.window); ++s)
                    if (steps[s].exits > 0) {
                        f.pass = true;
                        f.value = s;
                    }
        }
    }

    if (full) { // fact 6: someone wants coverage but every quote is dearer
        auto& f = rep.facts[5];
        f.applicable = true;
        for (int s = 0; s < t_end && !f.pass; ++s) {
            const auto& d = trace.detail[s];
            for (std::size_t i = 0; i < d.pmax.size(); ++i)
                if (d.pmax[i] > 0.0 && std::isfinite(d.best_quote[i]) &&
                    d.pmax[i] < d.best_quote[i]) {
                    f.pass = true;
                    f.value = s;
                    break;
                }
        }
    }

    return rep;
}

} // namespace catsim
