#pragma once

#include "awt/model.hpp"

namespace awt {

/// Linear-bounded Turing machine over a tape of exactly |w| cells.
struct LBTM {
    struct Rule {
        std::string from;
        std::string read;   // alphabet symbol
        std::string write;  // alphabet symbol
        char move;          // 'L' or 'R'
        std::string to;
    };
    std::vector<std::string> alphabet; // a_1 .. a_k, in declaration order
    std::vector<std::string> states;
    std::string initial;
    std::string final_state;
    std::vector<Rule> rules;

    int symbol_index(const std::string& a) const; // 1-based, throws if unknown
    bool operator==(const LBTM& o) const;
};

/// The reachability reduction: an automaton that simulates m on w in phases
/// of 2k+2 time units, one timer per tape cell plus a sync timer. Its state
/// r_done is reachable iff m accepts w.
AutomatonWithTimers lbtm_to_at(const LBTM& m, const std::vector<std::string>& w);

/// Appends the two-timer widget whose only padded continuation past the
/// anchor races in a cycle. The anchor must have no active timers; the names
/// z, zp, s1..s4 and wsink must be free. A `go` input is reused when present
/// (the anchor's go transition is redirected) and added otherwise.
AutomatonWithTimers append_unwigglable_widget(const AutomatonWithTimers& at,
                                              const std::string& anchor);

/// Seed-deterministic valid model: active sets are drawn first, then the
/// transition map is completed with structurally legal choices only.
AutomatonWithTimers random_at(unsigned long long seed, int n_states, int n_timers,
                              int n_inputs, int max_constant);

} // namespace awt
