#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "catsim/env.hpp"
#include "catsim/metrics.hpp"
#include "catsim/world.hpp"

namespace catsim {

// Generic tabular action-value store. Row-major, argmax ties resolved to the
// lowest action index so greedy play is deterministic.
struct QTable {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> q;
    std::vector<long> visits;

    QTable() = default;
    QTable(int ns, int na)
        : n_states(ns), n_actions(na),
          q(static_cast<std::size_t>(ns) * static_cast<std::size_t>(na), 0.0),
          visits(static_cast<std::size_t>(ns) * static_cast<std::size_t>(na), 0) {}

    double& at(int s, int a) {
        return q[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
                 static_cast<std::size_t>(a)];
    }
    double at(int s, int a) const {
        return q[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
                 static_cast<std::size_t>(a)];
    }
    long visit_count(int s, int a) const {
        return visits[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
                      static_cast<std::size_t>(a)];
    }

    int best_action(int s) const {
        int best = 0;
        for (int a = 1; a < n_actions; ++a)
            if (at(s, a) > at(s, best)) best = a;
        return best;
    }
    int second_action(int s) const {
        int best = best_action(s);
        int second = best == 0 ? (n_actions > 1 ? 1 : 0) : 0;
        for (int a = 0; a < n_actions; ++a) {
            if (a == best) continue;
            if (at(s, a) > at(s, second)) second = a;
        }
        return second;
    }
    double max_q(int s) const { return at(s, best_action(s)); }
};

// One temporal-difference backup. The literal variant drops the reward term
// from the target and learns pure discounted bootstraps. Returns the absolute
// change of the updated entry.
inline double q_learning_update(QTable& qt, int s, int a, double reward, int s_next,
                                double eta, double delta, bool literal = false) {
    double boot = delta * qt.max_q(s_next);
    double target = literal ? boot : reward + boot;
    double old = qt.at(s, a);
    double fresh = (1.0 - eta) * old + eta * target;
    qt.at(s, a) = fresh;
    qt.visits[static_cast<std::size_t>(s) * static_cast<std::size_t>(qt.n_actions) +
              static_cast<std::size_t>(a)] += 1;
    return std::abs(fresh - old);
}

// Market classification the policymaker observes: three binary features
// (risk awareness, supply depth, affordability) giving eight cells.
struct StateFeatures {
    bool aware = false;
    bool supply = false;
    bool affordable = false;
    int index() const { return (aware ? 4 : 0) + (supply ? 2 : 0) + (affordable ? 1 : 0); }
};

inline StateFeatures classify_state(const WorldState& w) {
    const ScenarioConfig& cfg = w.cfg;
    StateFeatures f;

    std::vector<double> tmp;
    tmp.reserve(w.pop.size());
    for (const auto& ind : w.pop) tmp.push_back(ind.alpha);
    double med_alpha = median_of(tmp);
    // A population facing no risk cannot be underestimating it.
    f.aware = cfg.theta <= 0.0 || med_alpha / cfg.theta >= cfg.aware_thr;

    int cap = 0;
    for (const auto& ins : w.insurers)
        if (ins.active) cap += supply_capacity(ins);
    f.supply = static_cast<double>(cap) >=
               cfg.supply_thr * static_cast<double>(w.pop.size());

    tmp.clear();
    std::vector<double> quotes;
    quotes.reserve(w.pop.size());
    bool any_active = false;
    for (const auto& ins : w.insurers)
        if (ins.active) {
            any_active = true;
            break;
        }
    if (any_active) {
        for (const auto& ind : w.pop) {
            tmp.push_back(ind.pmax);
            quotes.push_back(cheapest_quote(w, ind, nullptr).quote);
        }
        f.affordable = median_of(quotes) <= median_of(tmp);
    }
    return f;
}

// The five market configurations worth reporting on, in presentation order.
inline constexpr std::array<int, 5> kNamedStates = {1, 3, 2, 4, 6};
inline const std::array<std::string, 5> kNamedStateLabels = {
    "unaware, thin supply, affordable",
    "unaware, deep supply, affordable",
    "unaware, deep supply, unaffordable",
    "aware, thin supply, unaffordable",
    "aware, deep supply, unaffordable",
};

inline double epsilon_at(int episode, int total_episodes, const ScenarioConfig& cfg) {
    double span = std::max(1.0, std::floor(cfg.eps_decay_fraction * total_episodes));
    if (static_cast<double>(episode) >= span) return cfg.eps_end;
    return cfg.eps_start + (cfg.eps_end - cfg.eps_start) * (episode / span);
}

// Exploring action source used during training. The environment invokes it
// mid-step; the reward for the stored decision only becomes known once the
// step finishes, so updates are applied one classification late.
class LearningActionSource {
public:
    LearningActionSource(QTable& qt, const ScenarioConfig& cfg, std::uint64_t episode_seed,
                         double epsilon)
        : qt_(&qt), cfg_(&cfg), episode_seed_(episode_seed), epsilon_(epsilon) {}

    ActionDecision operator()(const WorldState& w) {
        StateFeatures f = classify_state(w);
        int s = f.index();
        flush(s);
        Stream st = substream(episode_seed_, StreamTag::PolicySelect,
                              static_cast<std::uint64_t>(w.t));
        int a;
        if (st.next_double() < epsilon_) {
            a = static_cast<int>(st.next_double() * qt_->n_actions);
            if (a >= qt_->n_actions) a = qt_->n_actions - 1;
        } else {
            a = qt_->best_action(s);
        }
        pending_valid_ = true;
        pending_s_ = s;
        pending_a_ = a;
        pending_r_ = 0.0;
        return {s, static_cast<Intervention>(a)};
    }

    void set_reward(double r) { pending_r_ = r; }

    // Applies the last stored backup against the terminal classification.
    void finish(const WorldState& w) { flush(classify_state(w).index()); }

    double max_delta() const { return max_delta_; }
    double reward_sum() const { return reward_sum_; }

private:
    void flush(int s_next) {
        if (!pending_valid_) return;
        double d = q_learning_update(*qt_, pending_s_, pending_a_, pending_r_, s_next,
                                     cfg_->rl_eta, cfg_->rl_delta, cfg_->rl_literal_update);
        max_delta_ = std::max(max_delta_, d);
        reward_sum_ += pending_r_;
        pending_valid_ = false;
    }

    QTable* qt_;
    const ScenarioConfig* cfg_;
    std::uint64_t episode_seed_;
    double epsilon_;
    bool pending_valid_ = false;
    int pending_s_ = 0;
    int pending_a_ = 0;
    double pending_r_ = 0.0;
    double max_delta_ = 0.0;
    double reward_sum_ = 0.0;
};

// Greedy play from a learned table, no exploration and no updates.
struct GreedyActionSource {
    const QTable* qt = nullptr;
    ActionDecision operator()(const WorldState& w) const {
        StateFeatures f = classify_state(w);
        return {f.index(), static_cast<Intervention>(qt->best_action(f.index()))};
    }
};

struct TrainStats {
    std::vector<double> max_delta;   // per episode, largest q change
    std::vector<double> mean_reward; // per episode
};

struct TrainResult {
    QTable qtable{kNumInterventions, kNumInterventions};
    TrainStats stats;
};

// Trains the policymaker over independent episodes. Everything is keyed off
// the master seed, so the same seed and configuration always produce the same
// table.
inline TrainResult train_policy(const ScenarioConfig& cfg, int episodes,
                                std::uint64_t master_seed, bool keep_stats = false,
                                const std::function<void(int)>& progress = {}) {
    TrainResult out;
    out.qtable = QTable(8, kNumInterventions);
    if (keep_stats) {
        out.stats.max_delta.reserve(static_cast<std::size_t>(episodes));
        out.stats.mean_reward.reserve(static_cast<std::size_t>(episodes));
    }
    for (int ep = 0; ep < episodes; ++ep) {
        std::uint64_t ep_seed =
            substream(master_seed, StreamTag::EpisodeSeed, static_cast<std::uint64_t>(ep))
                .next_u64();
        WorldState w = init_world(cfg, ep_seed);
        LearningActionSource src(out.qtable, cfg, ep_seed, epsilon_at(ep, episodes, cfg));
        for (int t = 0; t < cfg.horizon; ++t) {
            StepLog log = step_world(w, src);
            src.set_reward(log.reward);
        }
        src.finish(w);
        if (keep_stats) {
            out.stats.max_delta.push_back(src.max_delta());
            out.stats.mean_reward.push_back(src.reward_sum() / cfg.horizon);
        }
        if (progress) progress(ep);
    }
    return out;
}

} // namespace catsim
