#pragma once

#include <map>
#include <string>
#include <vector>

#include "awt/model.hpp"
#include "awt/rational.hpp"

namespace awt {

/// Timer valuation; its domain always equals the active set of the owning
/// state. Sorted by timer name, so iteration and printing are deterministic.
using Valuation = std::map<std::string, Rat>;

struct Configuration {
    std::string state;
    Valuation val;
    bool operator==(const Configuration& o) const {
        return state == o.state && val == o.val;
    }
};

/// One discrete step of a run, together with the cached configurations just
/// before (after the preceding delay) and just after the action.
struct RunStep {
    Rat delay;       // delay taken before this action
    Action action;
    Update update;   // update performed by the transition
    Configuration before; // configuration at the instant of the action
    Configuration after;  // configuration right after the action
};

struct TimedRun {
    Configuration initial; // (q0, empty valuation)
    std::vector<RunStep> steps;
    Rat final_delay;
    Configuration final_config;

    int num_actions() const { return static_cast<int>(steps.size()); }
    /// Absolute time of action k (1-based): sum of delays d_1..d_k.
    Rat time_of_action(int k) const;
    /// Delay d_k for k in 1..n+1 (d_{n+1} is the final delay).
    const Rat& delay(int k) const;
};

struct UntimedTrace {
    std::vector<std::string> states;  // n+1 states
    std::vector<Action> actions;      // n actions
    std::string str() const;
    bool operator==(const UntimedTrace& o) const {
        return states == o.states && actions == o.actions;
    }
};

struct WordStep {
    Rat delay;
    Action action;
};

/// The (delay, action) word driving a run, plus the trailing delay.
struct RunWord {
    std::vector<WordStep> steps;
    Rat final_delay;
    bool operator==(const RunWord& o) const;
};

/// Elapses d time units: every active timer decreases by d.
/// Throws SemanticError(delay_too_large) naming the first violating timer.
Configuration delay_config(const Configuration& c, const Rat& d);

/// One discrete transition from c. Timeouts require the timer to be exactly
/// zero. Returns the successor and the update that was applied.
std::pair<Configuration, Update> discrete_step(const AutomatonWithTimers& at,
                                               const Configuration& c,
                                               const Action& a);

/// Runs the word from the initial configuration. On the first infeasible
/// step the error carries the 1-based step index; no partial run escapes.
TimedRun run_from_word(const AutomatonWithTimers& at, const RunWord& word);

/// The word a run was built from (delays plus actions).
RunWord word_of_run(const TimedRun& run);

UntimedTrace untimed_trace(const TimedRun& run);

/// True iff the first and last delays are positive and no active timer is
/// zero in the final configuration.
bool is_padded(const TimedRun& run);

} // namespace awt
