#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "awt/errors.hpp"

namespace awt {

enum class ActionKind { input, timeout };

/// Either an input symbol or the timeout of a timer.
struct Action {
    ActionKind kind;
    std::string name; // input name, or timer name for timeouts

    static Action in(std::string n) { return {ActionKind::input, std::move(n)}; }
    static Action to(std::string n) { return {ActionKind::timeout, std::move(n)}; }

    bool is_timeout() const { return kind == ActionKind::timeout; }
    std::string str() const { return is_timeout() ? "to:" + name : name; }

    bool operator==(const Action& o) const { return kind == o.kind && name == o.name; }
    bool operator!=(const Action& o) const { return !(*this == o); }
    bool operator<(const Action& o) const {
        if (kind != o.kind) return kind < o.kind; // inputs sort before timeouts
        return name < o.name;
    }
};

/// Timer update on a transition: either none or start(timer, value >= 1).
struct Update {
    std::optional<std::pair<std::string, long long>> start;

    static Update none() { return {}; }
    static Update start_timer(std::string x, long long c) {
        return {std::make_pair(std::move(x), c)};
    }

    bool starts() const { return start.has_value(); }
    bool starts_timer(const std::string& x) const {
        return start && start->first == x;
    }
    std::string str() const {
        if (!start) return "none";
        return "start " + start->first + " " + std::to_string(start->second);
    }
    bool operator==(const Update& o) const { return start == o.start; }
};

struct Transition {
    std::string target;
    Update update;
    bool operator==(const Transition& o) const {
        return target == o.target && update == o.update;
    }
};

/// Deterministic automaton with timers. Immutable once validated; every
/// analysis in this library shares it read-only.
struct AutomatonWithTimers {
    std::vector<std::string> timers; // declaration order
    std::vector<std::string> inputs;
    std::vector<std::string> states;
    std::string initial;
    std::map<std::string, std::set<std::string>> active; // state -> active timers
    std::map<std::pair<std::string, Action>, Transition> delta;

    bool has_timer(const std::string& x) const;
    bool has_input(const std::string& i) const;
    bool has_state(const std::string& q) const;
    const std::set<std::string>& active_of(const std::string& q) const;

    /// Largest constant used by any start update; 0 when there are none.
    long long max_constant() const;

    /// All actions available at q per the transition map, sorted.
    std::vector<Action> actions_of(const std::string& q) const;

    bool operator==(const AutomatonWithTimers& o) const;
};

struct Violation {
    std::string rule;   // short rule id, e.g. "initial-active"
    std::string locus;  // state or state/action the violation points at
    std::string message;
};

struct ValidationReport {
    bool ok;
    std::vector<Violation> violations;
};

/// Checks every structural clause a model must satisfy. Violations are data,
/// not exceptions; ok iff the list is empty.
ValidationReport validate_automaton(const AutomatonWithTimers& at);

/// Exact transition lookup. Returns nullopt when delta is undefined for the
/// pair; throws UsageError when the state or action name does not exist.
std::optional<Transition> transition(const AutomatonWithTimers& at,
                                     const std::string& q, const Action& a);

/// Timers of active(q) that the transition (q, a) stops or restarts.
/// Requires delta(q, a) to be defined.
std::set<std::string> discarded_timers(const AutomatonWithTimers& at,
                                       const std::string& q, const Action& a);

/// True iff the name matches [A-Za-z_][A-Za-z0-9_]*.
bool valid_identifier(const std::string& name);

/// Structural constructor checks: identifier syntax, uniqueness, disjoint
/// timer/input namespaces, resolved references. Throws UsageError.
void check_structure(const AutomatonWithTimers& at);

} // namespace awt
