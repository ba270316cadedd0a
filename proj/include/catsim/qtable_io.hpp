#pragma once
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "catsim/rl.hpp"
#include "catsim/scenario_io.hpp"

namespace catsim {

// Plain-text container for a learned table. Values are written with full
// double precision so save/load round-trips exactly.
inline void save_qtable(const std::string& path, const QTable& qt, std::uint64_t fingerprint) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("qtable: cannot write '" + path + "'");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "qtable v1\nfingerprint %016" PRIx64 "\ndims %d %d\n",
                  fingerprint, qt.n_states, qt.n_actions);
    out << buf;
    for (int s = 0; s < qt.n_states; ++s)
        for (int a = 0; a < qt.n_actions; ++a) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g %ld\n", s, a, qt.at(s, a),
                          qt.visit_count(s, a));
            out << buf;
        }
    out << "end\n";
}

inline QTable load_qtable(const std::string& path, std::uint64_t* fingerprint_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("qtable: cannot open '" + path + "'");
    std::string word, version;
    in >> word >> version;
    if (word != "qtable" || version != "v1")
        throw std::runtime_error("qtable: '" + path + "' is not a v1 table file");
    std::string hex;
    in >> word >> hex;
    if (word != "fingerprint")
        throw std::runtime_error("qtable: missing fingerprint line");
    std::uint64_t fp = std::stoull(hex, nullptr, 16);
    if (fingerprint_out) *fingerprint_out = fp;
    int ns = 0, na = 0;
    in >> word >> ns >> na;
    if (word != "dims" || ns <= 0 || na <= 0)
        throw std::runtime_error("qtable: malformed dims line");
    QTable qt(ns, na);
    for (int i = 0; i < ns * na; ++i) {
        int s, a;
        double v;
        long c;
        if (!(in >> s >> a >> v >> c))
            throw std::runtime_error("qtable: truncated table body");
        if (s < 0 || s >= ns || a < 0 || a >= na)
            throw std::runtime_error("qtable: entry out of range");
        qt.at(s, a) = v;
        qt.visits[static_cast<std::size_t>(s) * static_cast<std::size_t>(na) +
                  static_cast<std::size_t>(a)] = c;
    }
    in >> word;
    if (word != "end") throw std::runtime_error("qtable: missing end marker");
    return qt;
}

// Loads a table and refuses to pair it with a scenario other than the one it
// was trained on.
inline QTable load_qtable_checked(const std::string& path, const ScenarioConfig& cfg) {
    std::uint64_t fp = 0;
    QTable qt = load_qtable(path, &fp);
    std::uint64_t want = config_fingerprint(cfg);
    if (fp != want) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "qtable: scenario fingerprint mismatch (table %016" PRIx64
                      ", scenario %016" PRIx64 ")",
                      fp, want);
        throw std::runtime_error(buf);
    }
    return qt;
}

} // namespace catsim
