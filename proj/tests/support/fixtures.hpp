#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "awt/generators.hpp"
#include "awt/io.hpp"

namespace fx {

using namespace awt;

inline std::string fixture_path(const std::string& name) {
    return std::string(AWT_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline AutomatonWithTimers two_timer() { return parse_at(slurp(fixture_path("two_timer.at"))); }

inline RunWord rho_word() { return parse_run_word("1 i 1 i 0 to:x1 2 to:x2 0.5"); }
inline RunWord sigma_word() {
    return parse_run_word("1 i 1 to:x1 0 i 1 to:x1 1 to:x2 0.5");
}
inline RunWord pi_word() { return parse_run_word("1 i 0 i 1 i 1 to:x2 0 to:x1 0.5"); }
inline RunWord tau_word() {
    return parse_run_word("1 i 0 i 0.5 i 1 to:x1 0.5 to:x2 0.5");
}
inline RunWord rho_prime_word() {
    return parse_run_word("1 i 0.5 i 0.5 to:x1 1.5 to:x2 1");
}

inline Configuration cfg(const std::string& q,
                         std::initializer_list<std::pair<const char*, Rat>> vals = {}) {
    Configuration c{q, {}};
    for (const auto& [x, v] : vals) c.val.emplace(x, v);
    return c;
}

/// Five blocks racing in a ring: four one-shot timers chained by zero
/// delays, closed by a long timer discarded at zero by the final timeout.
inline AutomatonWithTimers five_cycle_at() {
    std::string text =
        "timer z\n"
        "timer b1\ntimer b2\ntimer b3\ntimer b4\n"
        "input g\n"
        "state q0 initial\n"
        "state p1 active z\n"
        "state p2 active z b1\n"
        "state p3 active z\n"
        "state p4 active z b2\n"
        "state p5 active z\n"
        "state p6 active z b3\n"
        "state p7 active z\n"
        "state p8 active z b4\n"
        "state p9\n"
        "state sink\n"
        "trans q0 g p1 start z 4\n"
        "trans p1 g p2 start b1 1\n"
        "trans p2 to:b1 p3 none\n"
        "trans p3 g p4 start b2 1\n"
        "trans p4 to:b2 p5 none\n"
        "trans p5 g p6 start b3 1\n"
        "trans p6 to:b3 p7 none\n"
        "trans p7 g p8 start b4 1\n"
        "trans p8 to:b4 p9 none\n"
        "trans p2 g sink none\ntrans p4 g sink none\ntrans p6 g sink none\n"
        "trans p8 g sink none\ntrans p9 g sink none\ntrans sink g sink none\n"
        "trans p1 to:z sink none\ntrans p2 to:z sink none\ntrans p3 to:z sink none\n"
        "trans p4 to:z sink none\ntrans p5 to:z sink none\ntrans p6 to:z sink none\n"
        "trans p7 to:z sink none\ntrans p8 to:z sink none\n";
    return parse_at(text);
}

inline RunWord five_cycle_word() {
    return parse_run_word("1 g 0 g 1 to:b1 0 g 1 to:b2 0 g 1 to:b3 0 g 1 to:b4 0.5");
}

/// One transition silently stops a timer while it sits at zero; its kill
/// symbol lands next to an unrelated timeout. Exercises the word-level
/// matchers on an acyclic graph.
inline AutomatonWithTimers stop_at() {
    std::string text =
        "timer x\ntimer y\n"
        "input a\ninput b\ninput g\n"
        "state p0 initial\n"
        "state p1 active x\n"
        "state p2 active x y\n"
        "state p3 active x\n"
        "state p4\n"
        "state sink\n"
        "trans p0 a p1 start x 1\n"
        "trans p1 b p2 start y 1\n"
        "trans p2 g p3 none\n"
        "trans p3 to:x p4 none\n"
        "trans p1 to:x sink none\n"
        "trans p2 to:x sink none\ntrans p2 to:y sink none\n"
        "trans p0 b sink none\ntrans p0 g sink none\n"
        "trans p1 a sink none\ntrans p1 g sink none\n"
        "trans p2 a sink none\ntrans p2 b sink none\n"
        "trans p3 a sink none\ntrans p3 b sink none\ntrans p3 g sink none\n"
        "trans p4 a sink none\ntrans p4 b sink none\ntrans p4 g sink none\n"
        "trans sink a sink none\ntrans sink b sink none\ntrans sink g sink none\n";
    return parse_at(text);
}

inline AutomatonWithTimers single_state_at() {
    return parse_at("input a\nstate q0 initial\ntrans q0 a q0 none\n");
}

/// Two states, one timer; race-avoiding by the static criterion.
inline AutomatonWithTimers single_timer_at() {
    std::string text =
        "timer x\ninput a\n"
        "state q0 initial\n"
        "state q1 active x\n"
        "trans q0 a q1 start x 2\n"
        "trans q1 a q1 start x 1\n"
        "trans q1 to:x q0 none\n";
    return parse_at(text);
}

/// The two-timer model with the q2 self-loop and the q2 -to:x2-> q1 edge
/// redirected to a sink, so no block can both race forward and lose its
/// timer at zero.
inline AutomatonWithTimers two_timer_variant_at() {
    std::string text =
        "timer x1\ntimer x2\ninput i\n"
        "state q0 initial\n"
        "state q1 active x1\n"
        "state q2 active x1 x2\n"
        "state q3 active x2\n"
        "state qs\n"
        "trans q0 i q1 start x1 1\n"
        "trans q1 i q2 start x2 2\n"
        "trans q1 to:x1 q1 start x1 1\n"
        "trans q2 i qs none\n"
        "trans q2 to:x1 q3 none\n"
        "trans q2 to:x2 qs none\n"
        "trans q3 i q3 start x2 1\n"
        "trans q3 to:x2 q0 none\n"
        "trans qs i qs none\n";
    return parse_at(text);
}

inline bool runs_equal(const TimedRun& a, const TimedRun& b) {
    if (!(a.initial == b.initial) || !(a.final_config == b.final_config) ||
        a.final_delay != b.final_delay || a.steps.size() != b.steps.size())
        return false;
    for (size_t i = 0; i < a.steps.size(); ++i) {
        const auto& s = a.steps[i];
        const auto& t = b.steps[i];
        if (s.delay != t.delay || s.action != t.action || !(s.update == t.update) ||
            !(s.before == t.before) || !(s.after == t.after))
            return false;
    }
    return true;
}

inline std::vector<int> indices(const Block& b) { return b.action_indices; }

} // namespace fx
