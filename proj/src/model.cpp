#include "awt/model.hpp"

#include <algorithm>

namespace awt {

bool AutomatonWithTimers::has_timer(const std::string& x) const {
    return std::find(timers.begin(), timers.end(), x) != timers.end();
}

bool AutomatonWithTimers::has_input(const std::string& i) const {
    return std::find(inputs.begin(), inputs.end(), i) != inputs.end();
}

bool AutomatonWithTimers::has_state(const std::string& q) const {
    return std::find(states.begin(), states.end(), q) != states.end();
}

const std::set<std::string>& AutomatonWithTimers::active_of(const std::string& q) const {
    auto it = active.find(q);
    if (it == active.end()) throw UsageError("unknown state: " + q);
    return it->second;
}

long long AutomatonWithTimers::max_constant() const {
    long long c = 0;
    for (const auto& [key, tr] : delta)
        if (tr.update.start) c = std::max(c, tr.update.start->second);
    return c;
}

std::vector<Action> AutomatonWithTimers::actions_of(const std::string& q) const {
    std::vector<Action> out;
    for (const auto& [key, tr] : delta)
        if (key.first == q) out.push_back(key.second);
    std::sort(out.begin(), out.end());
    return out;
}

bool AutomatonWithTimers::operator==(const AutomatonWithTimers& o) const {
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    return sorted(timers) == sorted(o.timers) && sorted(inputs) == sorted(o.inputs) &&
           sorted(states) == sorted(o.states) && initial == o.initial &&
           active == o.active && delta == o.delta;
}

bool valid_identifier(const std::string& name) {
    if (name.empty()) return false;
    auto word = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9') || c == '_';
    };
    if (name[0] >= '0' && name[0] <= '9') return false;
    return std::all_of(name.begin(), name.end(), word);
}

void check_structure(const AutomatonWithTimers& at) {
    std::set<std::string> seen;
    for (const auto& x : at.timers) {
        if (!valid_identifier(x)) throw UsageError("bad timer name: " + x);
        if (!seen.insert(x).second) throw UsageError("duplicate timer: " + x);
    }
    for (const auto& i : at.inputs) {
        if (!valid_identifier(i)) throw UsageError("bad input name: " + i);
        if (!seen.insert(i).second)
            throw UsageError("input name not distinct from other names: " + i);
    }
    std::set<std::string> qs;
    for (const auto& q : at.states) {
        if (!valid_identifier(q)) throw UsageError("bad state name: " + q);
        if (!qs.insert(q).second) throw UsageError("duplicate state: " + q);
    }
    if (!at.has_state(at.initial)) throw UsageError("initial state not declared");
    for (const auto& [q, ts] : at.active) {
        if (!at.has_state(q)) throw UsageError("active set for unknown state: " + q);
        for (const auto& x : ts)
            if (!at.has_timer(x)) throw UsageError("active set uses unknown timer: " + x);
    }
    for (const auto& q : at.states)
        if (!at.active.count(q))
            throw UsageError("state without active set: " + q);
    for (const auto& [key, tr] : at.delta) {
        const auto& [q, a] = key;
        if (!at.has_state(q)) throw UsageError("transition from unknown state: " + q);
        if (!at.has_state(tr.target))
            throw UsageError("transition to unknown state: " + tr.target);
        if (a.is_timeout()) {
            if (!at.has_timer(a.name))
                throw UsageError("timeout of unknown timer: " + a.name);
        } else if (!at.has_input(a.name)) {
            throw UsageError("transition on unknown input: " + a.name);
        }
        if (tr.update.start) {
            if (!at.has_timer(tr.update.start->first))
                throw UsageError("update starts unknown timer: " + tr.update.start->first);
            if (tr.update.start->second < 1)
                throw UsageError("start value must be a positive integer");
        }
    }
}

ValidationReport validate_automaton(const AutomatonWithTimers& at) {
    check_structure(at);
    ValidationReport report{true, {}};
    auto flag = [&](std::string rule, std::string locus, std::string msg) {
        report.violations.push_back({std::move(rule), std::move(locus), std::move(msg)});
    };

    if (!at.active_of(at.initial).empty())
        flag("initial-active", at.initial, "the initial state must have no active timers");

    // Definedness: total on inputs, timeouts exactly for active timers.
    for (const auto& q : at.states) {
        for (const auto& i : at.inputs)
            if (!at.delta.count({q, Action::in(i)}))
                flag("input-total", q + "/" + i, "missing input transition");
        for (const auto& x : at.timers) {
            bool defined = at.delta.count({q, Action::to(x)}) != 0;
            bool is_active = at.active_of(q).count(x) != 0;
            if (defined && !is_active)
                flag("timeout-domain", q + "/to:" + x,
                     "timeout transition for a timer that is not active here");
            if (!defined && is_active)
                flag("timeout-domain", q + "/to:" + x,
                     "active timer without a timeout transition");
        }
    }

    for (const auto& [key, tr] : at.delta) {
        const auto& [q, a] = key;
        const std::string locus = q + "/" + a.str();
        const auto& src = at.active_of(q);
        const auto& dst = at.active_of(tr.target);
        if (a.is_timeout() && tr.update.start && tr.update.start->first != a.name)
            flag("timeout-restart", locus,
                 "a timeout may only restart its own timer, not " +
                     tr.update.start->first);
        if (!tr.update.start) {
            for (const auto& x : dst)
                if (!src.count(x))
                    flag("no-update-flow", locus,
                         "timer " + x + " active in target but not in source");
            if (a.is_timeout() && dst.count(a.name))
                flag("no-update-flow", locus,
                     "timer " + a.name + " timed out without restart but stays active");
        } else {
            const auto& x = tr.update.start->first;
            if (!dst.count(x))
                flag("start-flow", locus, "started timer " + x + " not active in target");
            for (const auto& y : dst)
                if (y != x && !src.count(y))
                    flag("start-flow", locus,
                         "timer " + y + " active in target but not in source");
        }
    }

    report.ok = report.violations.empty();
    return report;
}

std::optional<Transition> transition(const AutomatonWithTimers& at,
                                     const std::string& q, const Action& a) {
    if (!at.has_state(q)) throw UsageError("unknown state: " + q);
    if (a.is_timeout()) {
        if (!at.has_timer(a.name)) throw UsageError("unknown timer: " + a.name);
    } else if (!at.has_input(a.name)) {
        throw UsageError("unknown input: " + a.name);
    }
    auto it = at.delta.find({q, a});
    if (it == at.delta.end()) return std::nullopt;
    return it->second;
}

std::set<std::string> discarded_timers(const AutomatonWithTimers& at,
                                       const std::string& q, const Action& a) {
    auto tr = transition(at, q, a);
    if (!tr)
        throw SemanticError(SemanticError::Code::undefined_transition,
                            "undefined transition " + q + "/" + a.str());
    std::set<std::string> out;
    for (const auto& x : at.active_of(q)) {
        if (a.is_timeout() && a.name == x) continue;
        bool restarted = tr->update.starts_timer(x);
        bool stopped = !at.active_of(tr->target).count(x) && !restarted;
        if (restarted || stopped) out.insert(x);
    }
    return out;
}

} // namespace awt
