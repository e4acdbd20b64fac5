#include "awt/generators.hpp"

#include <algorithm>
#include <random>

namespace awt {

int LBTM::symbol_index(const std::string& a) const {
    for (size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == a) return static_cast<int>(i) + 1;
    throw UsageError("unknown tape symbol: " + a);
}

bool LBTM::operator==(const LBTM& o) const {
    auto key = [](const Rule& r) {
        return r.from + "\x1f" + r.read + "\x1f" + r.write + "\x1f" + r.move + "\x1f" + r.to;
    };
    std::vector<std::string> a, b;
    for (const auto& r : rules) a.push_back(key(r));
    for (const auto& r : o.rules) b.push_back(key(r));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return alphabet == o.alphabet && initial == o.initial &&
           final_state == o.final_state && a == b &&
           [&] {
               auto s1 = states, s2 = o.states;
               std::sort(s1.begin(), s1.end());
               std::sort(s2.begin(), s2.end());
               return s1 == s2;
           }();
}

namespace {

std::string tuple_state(const std::string& q, int i, int symbol, int clock) {
    return "m_" + q + "_" + std::to_string(i) + "_" + std::to_string(symbol) + "_" +
           std::to_string(clock);
}

} // namespace

AutomatonWithTimers lbtm_to_at(const LBTM& m, const std::vector<std::string>& w) {
    const int n = static_cast<int>(w.size());
    const int k = static_cast<int>(m.alphabet.size());
    if (n < 1) throw UsageError("lbtm_to_at needs a nonempty word");
    for (const auto& a : w) m.symbol_index(a); // validates the word
    auto has_state = [&](const std::string& q) {
        return std::find(m.states.begin(), m.states.end(), q) != m.states.end();
    };
    if (!has_state(m.initial) || !has_state(m.final_state))
        throw UsageError("machine initial/final state not declared");
    for (const auto& r : m.rules) {
        if (!has_state(r.from) || !has_state(r.to))
            throw UsageError("machine rule uses an unknown state");
        m.symbol_index(r.read);
        m.symbol_index(r.write);
        if (r.move != 'L' && r.move != 'R')
            throw UsageError("machine rule move must be L or R");
    }
    const int period = 2 * k + 2;

    AutomatonWithTimers at;
    at.timers.push_back("x");
    for (int i = 1; i <= n; ++i) at.timers.push_back("x" + std::to_string(i));
    at.inputs.push_back("go");
    std::vector<std::string> rule_inputs;
    for (size_t t = 0; t < m.rules.size(); ++t) {
        rule_inputs.push_back("t" + std::to_string(t + 1));
        at.inputs.push_back(rule_inputs.back());
    }

    // States: the r-chain, the sinks, and one tuple state per machine
    // configuration summary.
    std::vector<std::string> rs;
    for (int i = 0; i <= n; ++i) {
        rs.push_back("r" + std::to_string(i));
        at.states.push_back(rs.back());
    }
    at.states.push_back("r_done");
    at.states.push_back("r_sink");
    for (const auto& q : m.states)
        for (int i = 1; i <= n; ++i)
            for (int sym = 0; sym <= k; ++sym)
                for (int clk = 0; clk < period; ++clk)
                    at.states.push_back(tuple_state(q, i, sym, clk));
    at.initial = rs[0];

    // Active timer sets.
    at.active[rs[0]] = {};
    at.active["r_done"] = {};
    at.active["r_sink"] = {};
    for (int i = 1; i <= n; ++i) {
        std::set<std::string> acc{"x"};
        for (int j = 1; j < i; ++j) acc.insert("x" + std::to_string(j));
        at.active[rs[i]] = acc;
    }
    std::set<std::string> all_timers(at.timers.begin(), at.timers.end());
    for (const auto& q : m.states)
        for (int i = 1; i <= n; ++i)
            for (int sym = 0; sym <= k; ++sym)
                for (int clk = 0; clk < period; ++clk)
                    at.active[tuple_state(q, i, sym, clk)] = all_timers;

    auto def = [&](const std::string& q, const Action& a, const std::string& q2,
                   Update u) { at.delta[{q, a}] = {q2, u}; };

    // Initialization chain: go starts x, then each cell timer in turn.
    def(rs[0], Action::in("go"), rs[1], Update::start_timer("x", 1));
    for (int i = 1; i <= n; ++i) {
        int j = m.symbol_index(w[i - 1]);
        std::string target = i < n ? rs[i + 1] : tuple_state(m.initial, 1, 0, 0);
        def(rs[i], Action::in("go"), target,
            Update::start_timer("x" + std::to_string(i), 2 * j));
    }

    // Phase machinery inside the tuple states.
    for (const auto& q : m.states) {
        for (int i = 1; i <= n; ++i) {
            for (int sym = 0; sym <= k; ++sym) {
                for (int clk = 0; clk < period; ++clk) {
                    const std::string s = tuple_state(q, i, sym, clk);
                    // Sync timer advances the clock, except when a machine
                    // step is due.
                    if (clk > 0 || sym == 0)
                        def(s, Action::to("x"),
                            tuple_state(q, i, sym, (clk + 1) % period),
                            Update::start_timer("x", 1));
                    else
                        def(s, Action::to("x"), "r_sink", Update::none());
                    // Cell timers: restart one period later; the scanned cell
                    // records the symbol it encodes. Reads are only accepted
                    // at even clock values: a cell expiring exactly on a sync
                    // tick can be processed before it, and the stale odd
                    // clock would decode the previous symbol.
                    for (int l = 1; l <= n; ++l) {
                        std::string xl = "x" + std::to_string(l);
                        if (l == i && clk % 2 == 1) {
                            def(s, Action::to(xl), "r_sink", Update::none());
                            continue;
                        }
                        std::string target =
                            l == i ? tuple_state(q, i, clk / 2, clk) : s;
                        def(s, Action::to(xl), target,
                            Update::start_timer(xl, period));
                    }
                    // Machine transitions fire at the phase boundary.
                    if (clk == 0 && sym >= 1) {
                        for (size_t t = 0; t < m.rules.size(); ++t) {
                            const auto& r = m.rules[t];
                            if (r.from != q) continue;
                            if (m.symbol_index(r.read) != sym) continue;
                            int i2 = r.move == 'R' ? i + 1 : i - 1;
                            if (i2 < 1 || i2 > n) continue;
                            int j2 = m.symbol_index(r.write);
                            def(s, Action::in(rule_inputs[t]),
                                tuple_state(r.to, i2, 0, 0),
                                Update::start_timer("x" + std::to_string(i), 2 * j2));
                        }
                    }
                    if (q == m.final_state)
                        def(s, Action::in("go"), "r_done", Update::none());
                }
            }
        }
    }

    // Everything left unspecified goes to the sink.
    for (const auto& q : at.states) {
        for (const auto& i : at.inputs)
            if (!at.delta.count({q, Action::in(i)}))
                def(q, Action::in(i), "r_sink", Update::none());
        for (const auto& x : at.active_of(q))
            if (!at.delta.count({q, Action::to(x)}))
                def(q, Action::to(x), "r_sink", Update::none());
    }
    return at;
}

AutomatonWithTimers append_unwigglable_widget(const AutomatonWithTimers& at,
                                              const std::string& anchor) {
    if (!at.has_state(anchor)) throw UsageError("unknown anchor state: " + anchor);
    if (!at.active_of(anchor).empty())
        throw SemanticError(SemanticError::Code::anchor_has_active_timers,
                            "widget anchor " + anchor + " has active timers");
    for (const char* name : {"z", "zp", "s1", "s2", "s3", "s4", "wsink"})
        if (at.has_state(name) || at.has_timer(name) || at.has_input(name))
            throw SemanticError(SemanticError::Code::name_clash,
                                std::string("widget name already taken: ") + name);

    AutomatonWithTimers out = at;
    out.timers.push_back("z");
    out.timers.push_back("zp");
    bool fresh_go = !out.has_input("go");
    if (fresh_go) out.inputs.push_back("go");
    for (const char* s : {"s1", "s2", "s3", "s4", "wsink"}) out.states.push_back(s);
    out.active["s1"] = {"z"};
    out.active["s2"] = {"z", "zp"};
    out.active["s3"] = {"z"};
    out.active["s4"] = {};
    out.active["wsink"] = {};

    auto def = [&](const std::string& q, const Action& a, const std::string& q2,
                   Update u) { out.delta[{q, a}] = {q2, u}; };
    if (fresh_go)
        for (const auto& q : at.states)
            def(q, Action::in("go"), "wsink", Update::none());
    def(anchor, Action::in("go"), "s1", Update::start_timer("z", 1));
    def("s1", Action::in("go"), "s2", Update::start_timer("zp", 1));
    def("s2", Action::to("zp"), "s3", Update::none());
    def("s3", Action::to("z"), "s4", Update::none());
    def("s1", Action::to("z"), "wsink", Update::none());
    def("s2", Action::to("z"), "wsink", Update::none());
    for (const char* s : {"s1", "s2", "s3", "s4", "wsink"})
        for (const auto& i : out.inputs)
            if (!out.delta.count({s, Action::in(i)}))
                def(s, Action::in(i), "wsink", Update::none());
    return out;
}

AutomatonWithTimers random_at(unsigned long long seed, int n_states, int n_timers,
                              int n_inputs, int max_constant) {
    if (n_states < 1 || n_timers < 0 || n_inputs < 1 || max_constant < 1)
        throw UsageError("random_at sizes must be positive");
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };

    AutomatonWithTimers at;
    for (int i = 0; i < n_states; ++i) at.states.push_back("q" + std::to_string(i));
    for (int i = 0; i < n_timers; ++i) at.timers.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < n_inputs; ++i) at.inputs.push_back("i" + std::to_string(i + 1));
    at.initial = at.states[0];

    at.active[at.states[0]] = {};
    for (int i = 1; i < n_states; ++i) {
        std::set<std::string> acc;
        for (const auto& x : at.timers)
            if (pick(2) == 1) acc.insert(x);
        at.active[at.states[i]] = acc;
    }

    auto starts_ok = [&](const std::string& q, const std::string& q2,
                         const std::string& x) {
        // start x: x active in q2, everything else in q2 already active in q.
        if (!at.active_of(q2).count(x)) return false;
        for (const auto& y : at.active_of(q2))
            if (y != x && !at.active_of(q).count(y)) return false;
        return true;
    };
    auto none_ok = [&](const std::string& q, const std::string& q2,
                       const std::string& dropped) {
        for (const auto& y : at.active_of(q2)) {
            if (!at.active_of(q).count(y)) return false;
            if (!dropped.empty() && y == dropped) return false;
        }
        return true;
    };

    for (const auto& q : at.states) {
        for (const auto& i : at.inputs) {
            // Gather legal (target, update) options; (q0, none) always works.
            std::vector<Transition> options;
            for (const auto& q2 : at.states) {
                if (none_ok(q, q2, "")) options.push_back({q2, Update::none()});
                for (const auto& x : at.timers)
                    if (starts_ok(q, q2, x))
                        options.push_back(
                            {q2, Update::start_timer(x, 1 + pick(max_constant))});
            }
            at.delta[{q, Action::in(i)}] = options[pick(static_cast<int>(options.size()))];
        }
        for (const auto& x : at.active_of(q)) {
            std::vector<Transition> options;
            for (const auto& q2 : at.states) {
                if (none_ok(q, q2, x)) options.push_back({q2, Update::none()});
                if (starts_ok(q, q2, x))
                    options.push_back({q2, Update::start_timer(x, 1 + pick(max_constant))});
            }
            at.delta[{q, Action::to(x)}] = options[pick(static_cast<int>(options.size()))];
        }
    }
    return at;
}

} // namespace awt
