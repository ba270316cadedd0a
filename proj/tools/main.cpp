#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "catsim/catsim.hpp"

namespace {

using namespace catsim;

const char* kActionNames[kNumInterventions] = {
    "NoAction",  "StateInsurance", "EaseSolvency", "Awareness",
    "Subsidy",   "PremiumRegulation", "Prevention", "Reinsurance",
};

const char* kActionShort[kNumInterventions] = {
    "None", "StateIns", "Ease", "Aware", "Subsidy", "Regulate", "Prevent", "Reinsure",
};

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool no_government = false;
    bool no_insurance = false;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--config", o.config_path, "Scenario file (JSON); omitted means defaults");
    app->add_option("--seed", o.seed, "Master seed override")->envname("CATSIM_SEED");
    app->add_flag("--no-government", o.no_government, "Disable the policymaker entirely");
    app->add_flag("--no-insurance", o.no_insurance, "Disable private insurance purchases");
}

ScenarioConfig make_config(const CommonOpts& o) {
    ScenarioConfig cfg =
        o.config_path.empty() ? ScenarioConfig{} : load_scenario(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.no_government) cfg.government_enabled = false;
    if (o.no_insurance) cfg.insurance_enabled = false;
    return cfg;
}

int parse_action(const std::string& name) {
    for (int a = 0; a < kNumInterventions; ++a)
        if (name == kActionNames[a] || name == kActionShort[a]) return a;
    throw CLI::ValidationError("--action", "unknown intervention '" + name + "'");
}

void print_fact_report(std::ostream& os, const StylizedFactReport& rep) {
    static const char* kFactNames[6] = {
        "terminal coverage collapses",
        "coverage spikes after catastrophe",
        "post-catastrophe buyers lapse quickly",
        "premiums harden at catastrophe",
        "insurer exits follow catastrophe",
        "positive demand priced out",
    };
    for (int f = 0; f < 6; ++f) {
        const FactResult& r = rep.facts[f];
        char buf[160];
        if (!r.applicable)
            std::snprintf(buf, sizeof(buf), "fact %d  n/a   %s\n", f + 1, kFactNames[f]);
        else
            std::snprintf(buf, sizeof(buf), "fact %d  %s  %s (value %.4g)\n", f + 1,
                          r.pass ? "pass" : "FAIL", kFactNames[f], r.value);
        os << buf;
    }
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
    } else {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        fn(out);
    }
}

int cmd_simulate(const CommonOpts& common, const std::string& qtable_path,
                 const std::string& action_name, const std::string& trace_path,
                 const std::string& individuals_path, const std::string& insurers_path,
                 bool facts, bool summary) {
    ScenarioConfig cfg = make_config(common);
    bool need_detail = facts || !individuals_path.empty() || !insurers_path.empty();
    TraceDetail detail = need_detail ? TraceDetail::Full : TraceDetail::Aggregate;

    EpisodeTrace trace;
    if (!qtable_path.empty()) {
        QTable qt = load_qtable_checked(qtable_path, cfg);
        trace = run_episode(cfg, cfg.seed, GreedyActionSource{&qt}, detail);
    } else if (!action_name.empty()) {
        trace = run_episode(
            cfg, cfg.seed,
            FixedActionSource{static_cast<Intervention>(parse_action(action_name))}, detail);
    } else {
        trace = run_episode(cfg, cfg.seed, FixedActionSource{Intervention::NoAction}, detail);
    }

    if (!trace_path.empty())
        with_output(trace_path, [&](std::ostream& os) { write_trace_csv(os, trace); });
    if (!individuals_path.empty())
        with_output(individuals_path,
                    [&](std::ostream& os) { write_individual_csv(os, trace); });
    if (!insurers_path.empty())
        with_output(insurers_path, [&](std::ostream& os) { write_insurer_csv(os, trace); });

    if (facts) print_fact_report(std::cout, check_stylized_facts(trace));
    if (summary) {
        const StepLog& last = trace.steps.back();
        double peak = 0.0, reward_sum = 0.0;
        for (const auto& s : trace.steps) {
            peak = std::max(peak, s.coverage);
            reward_sum += s.reward;
        }
        char buf[320];
        std::snprintf(buf, sizeof(buf),
                      "seed %llu  steps %zu  catastrophes %zu\n"
                      "terminal coverage %.4f  peak coverage %.4f  wealth gini %.4f\n"
                      "active insurers %d  mean reward %.4f  treasury %.2f  debt %.2f\n",
                      static_cast<unsigned long long>(cfg.seed), trace.steps.size(),
                      trace.catastrophe_steps.size(), last.coverage, peak, last.gini_wealth,
                      last.active_insurers, reward_sum / trace.steps.size(),
                      last.treasury_after, last.debt_after);
        std::cout << buf;
        std::cout << "catastrophe steps:";
        for (int c : trace.catastrophe_steps) std::cout << ' ' << c;
        std::cout << "\n";
    }
    return 0;
}

int cmd_train(const CommonOpts& common, int episodes, const std::string& out_path,
              const std::string& stats_path, bool quiet) {
    ScenarioConfig cfg = make_config(common);
    bool keep_stats = !stats_path.empty();
    int tick = std::max(1, episodes / 20);
    TrainResult res = train_policy(cfg, episodes, cfg.seed, keep_stats,
                                   quiet ? std::function<void(int)>{}
                                         : std::function<void(int)>([&](int ep) {
                                               if ((ep + 1) % tick == 0)
                                                   std::cerr << "episode " << ep + 1 << "/"
                                                             << episodes << "\n";
                                           }));
    save_qtable(out_path, res.qtable, config_fingerprint(cfg));
    if (keep_stats)
        with_output(stats_path, [&](std::ostream& os) {
            os << "episode,max_delta,mean_reward\n";
            for (std::size_t i = 0; i < res.stats.max_delta.size(); ++i) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", i,
                              res.stats.max_delta[i], res.stats.mean_reward[i]);
                os << buf;
            }
        });
    if (!quiet) std::cerr << "saved " << out_path << "\n";
    return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& qtable_path, int num_seeds,
                 std::uint64_t seed0, const std::string& out_path) {
    ScenarioConfig cfg = make_config(common);
    QTable qt = load_qtable_checked(qtable_path, cfg);
    GreedyActionSource src{&qt};

    long action_count[kNumInterventions] = {};
    double reward_sum = 0.0;
    long reward_n = 0;
    with_output(out_path, [&](std::ostream& os) {
        os << "seed,mean_reward,terminal_coverage,wealth_gini,catastrophes\n";
        for (int k = 0; k < num_seeds; ++k) {
            std::uint64_t seed = seed0 + static_cast<std::uint64_t>(k);
            EpisodeTrace trace = run_episode(cfg, seed, src, TraceDetail::Aggregate);
            double ep_reward = 0.0;
            for (const auto& s : trace.steps) {
                ep_reward += s.reward;
                if (s.action >= 0 && s.action < kNumInterventions)
                    action_count[s.action] += 1;
            }
            reward_sum += ep_reward;
            reward_n += static_cast<long>(trace.steps.size());
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%llu,%.10g,%.10g,%.10g,%zu\n",
                          static_cast<unsigned long long>(seed),
                          ep_reward / trace.steps.size(), trace.steps.back().coverage,
                          trace.steps.back().gini_wealth, trace.catastrophe_steps.size());
            os << buf;
        }
    });
    std::cerr << "mean reward per step " << (reward_n > 0 ? reward_sum / reward_n : 0.0)
              << "\naction usage:";
    for (int a = 0; a < kNumInterventions; ++a)
        std::cerr << ' ' << kActionShort[a] << '=' << action_count[a];
    std::cerr << "\n";
    return 0;
}

int cmd_facts(const CommonOpts& common, int num_seeds, std::uint64_t seed0,
              const std::string& out_path) {
    ScenarioConfig cfg = make_config(common);
    int applicable[6] = {}, passed[6] = {};
    int with_cat = 0;
    with_output(out_path, [&](std::ostream& os) {
        os << "seed,catastrophes,f1,f2,f3,f4,f5,f6\n";
        for (int k = 0; k < num_seeds; ++k) {
            std::uint64_t seed = seed0 + static_cast<std::uint64_t>(k);
            EpisodeTrace trace =
                run_episode(cfg, seed, FixedActionSource{Intervention::NoAction},
                            TraceDetail::Full);
            StylizedFactReport rep = check_stylized_facts(trace);
            if (!trace.catastrophe_steps.empty()) with_cat += 1;
            os << seed << ',' << trace.catastrophe_steps.size();
            for (int f = 0; f < 6; ++f) {
                const FactResult& r = rep.facts[f];
                if (r.applicable) {
                    applicable[f] += 1;
                    if (r.pass) passed[f] += 1;
                }
                os << ',' << (!r.applicable ? "na" : (r.pass ? "pass" : "fail"));
            }
            os << '\n';
        }
    });
    char buf[160];
    std::snprintf(buf, sizeof(buf), "seeds %d, with >=1 catastrophe %d\n", num_seeds, with_cat);
    std::cerr << buf;
    for (int f = 0; f < 6; ++f) {
        std::snprintf(buf, sizeof(buf), "fact %d: pass %d / applicable %d\n", f + 1, passed[f],
                      applicable[f]);
        std::cerr << buf;
    }
    return 0;
}

int cmd_print_qtable(const std::string& qtable_path) {
    QTable qt = load_qtable(qtable_path);
    std::printf("%-40s", "market state");
    for (int a = 0; a < qt.n_actions && a < kNumInterventions; ++a)
        std::printf(" %11s", kActionShort[a]);
    std::printf("\n");
    for (std::size_t row = 0; row < kNamedStates.size(); ++row) {
        int s = kNamedStates[row];
        if (s >= qt.n_states) continue;
        int best = qt.best_action(s);
        int second = qt.second_action(s);
        std::printf("%-40s", kNamedStateLabels[row].c_str());
        for (int a = 0; a < qt.n_actions && a < kNumInterventions; ++a) {
            const char* mark = a == best ? "**" : (a == second ? "* " : "  ");
            std::printf(" %9.4f%s", qt.at(s, a), mark);
        }
        std::printf("\n");
    }
    return 0;
}

int cmd_export_plots(const CommonOpts& common, const std::string& qtable_path,
                     const std::string& out_dir) {
    ScenarioConfig cfg = make_config(common);
    EpisodeTrace trace;
    if (!qtable_path.empty()) {
        QTable qt = load_qtable_checked(qtable_path, cfg);
        trace = run_episode(cfg, cfg.seed, GreedyActionSource{&qt}, TraceDetail::Full);
    } else {
        trace = run_episode(cfg, cfg.seed, FixedActionSource{Intervention::NoAction},
                            TraceDetail::Full);
    }
    with_output(out_dir + "/trace.csv",
                [&](std::ostream& os) { write_trace_csv(os, trace); });
    with_output(out_dir + "/individuals.csv",
                [&](std::ostream& os) { write_individual_csv(os, trace); });
    with_output(out_dir + "/insurers.csv",
                [&](std::ostream& os) { write_insurer_csv(os, trace); });
    std::cerr << "wrote " << out_dir << "/{trace,individuals,insurers}.csv\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based catastrophe insurance market simulator"};
    app.require_subcommand(1);

    CommonOpts sim_o;
    std::string sim_qtable, sim_action, sim_trace, sim_individuals, sim_insurers;
    bool sim_facts = false, sim_summary = false;
    CLI::App* sim = app.add_subcommand("simulate", "Run one episode");
    add_common(sim, sim_o);
    sim->add_option("--qtable", sim_qtable, "Play a learned policy greedily");
    sim->add_option("--action", sim_action, "Play one fixed intervention every step");
    sim->add_option("--trace", sim_trace, "Write per-step aggregates (CSV path or '-')")
        ->envname("CATSIM_OUT");
    sim->add_option("--individuals", sim_individuals, "Write per-individual series (CSV)");
    sim->add_option("--insurers", sim_insurers, "Write per-insurer series (CSV)");
    sim->add_flag("--facts", sim_facts, "Check the stylized-fact battery on this episode");
    sim->add_flag("--summary", sim_summary, "Print an end-of-episode summary");

    CommonOpts train_o;
    int train_episodes = 100000;
    std::string train_out = "qtable.txt", train_stats;
    bool train_quiet = false;
    CLI::App* tr = app.add_subcommand("train", "Train the policymaker");
    add_common(tr, train_o);
    tr->add_option("--episodes", train_episodes, "Training episodes")->check(CLI::PositiveNumber);
    tr->add_option("--out", train_out, "Output table path");
    tr->add_option("--stats", train_stats, "Write per-episode learning stats (CSV)");
    tr->add_flag("--quiet", train_quiet, "Suppress progress output");

    CommonOpts eval_o;
    std::string eval_qtable;
    int eval_seeds = 20;
    std::uint64_t eval_seed0 = 1000;
    std::string eval_out;
    CLI::App* ev = app.add_subcommand("evaluate", "Evaluate a learned policy across seeds");
    add_common(ev, eval_o);
    ev->add_option("--qtable", eval_qtable, "Learned table")->required();
    ev->add_option("--num-seeds", eval_seeds, "Evaluation episodes")->check(CLI::PositiveNumber);
    ev->add_option("--seed0", eval_seed0, "First evaluation seed");
    ev->add_option("--out", eval_out, "Per-seed results (CSV path or '-')");

    CommonOpts facts_o;
    int facts_seeds = 50;
    std::uint64_t facts_seed0 = 1;
    std::string facts_out;
    CLI::App* fa = app.add_subcommand("stylized-facts", "Fact battery across seeds");
    add_common(fa, facts_o);
    fa->add_option("--num-seeds", facts_seeds, "Seeds to run")->check(CLI::PositiveNumber);
    fa->add_option("--seed0", facts_seed0, "First seed");
    fa->add_option("--out", facts_out, "Per-seed results (CSV path or '-')");

    std::string pq_path;
    CLI::App* pq = app.add_subcommand("print-qtable", "Show a learned table as a grid");
    pq->add_option("qtable", pq_path, "Learned table")->required();

    CommonOpts plots_o;
    std::string plots_qtable, plots_dir = ".";
    CLI::App* px = app.add_subcommand("export-plots", "Dump full-detail series for plotting");
    add_common(px, plots_o);
    px->add_option("--qtable", plots_qtable, "Play a learned policy greedily");
    px->add_option("--out-dir", plots_dir, "Output directory")->envname("CATSIM_OUT");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_o, sim_qtable, sim_action, sim_trace, sim_individuals,
                                sim_insurers, sim_facts, sim_summary);
        if (tr->parsed())
            return cmd_train(train_o, train_episodes, train_out, train_stats, train_quiet);
        if (ev->parsed())
            return cmd_evaluate(eval_o, eval_qtable, eval_seeds, eval_seed0, eval_out);
        if (fa->parsed()) return cmd_facts(facts_o, facts_seeds, facts_seed0, facts_out);
        if (pq->parsed()) return cmd_print_qtable(pq_path);
        if (px->parsed()) return cmd_export_plots(plots_o, plots_qtable, plots_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
