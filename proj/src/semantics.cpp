#include "awt/semantics.hpp"

namespace awt {

Rat TimedRun::time_of_action(int k) const {
    Rat t;
    for (int i = 0; i < k && i < static_cast<int>(steps.size()); ++i)
        t += steps[i].delay;
    return t;
}

const Rat& TimedRun::delay(int k) const {
    if (k >= 1 && k <= static_cast<int>(steps.size())) return steps[k - 1].delay;
    if (k == static_cast<int>(steps.size()) + 1) return final_delay;
    throw UsageError("delay index out of range: " + std::to_string(k));
}

std::string UntimedTrace::str() const {
    std::string out = states.empty() ? "" : states[0];
    for (size_t i = 0; i < actions.size(); ++i)
        out += " " + actions[i].str() + " " + states[i + 1];
    return out;
}

bool RunWord::operator==(const RunWord& o) const {
    if (final_delay != o.final_delay || steps.size() != o.steps.size()) return false;
    for (size_t i = 0; i < steps.size(); ++i)
        if (steps[i].delay != o.steps[i].delay || steps[i].action != o.steps[i].action)
            return false;
    return true;
}

Configuration delay_config(const Configuration& c, const Rat& d) {
    if (d.is_negative()) throw UsageError("negative delay");
    Configuration out{c.state, {}};
    for (const auto& [x, v] : c.val) {
        if (v < d)
            throw SemanticError(SemanticError::Code::delay_too_large,
                                "delay " + d.str() + " exceeds timer " + x + " = " + v.str());
        out.val.emplace(x, v - d);
    }
    return out;
}

std::pair<Configuration, Update> discrete_step(const AutomatonWithTimers& at,
                                               const Configuration& c,
                                               const Action& a) {
    auto tr = transition(at, c.state, a);
    if (!tr)
        throw SemanticError(SemanticError::Code::undefined_transition,
                            "undefined transition " + c.state + "/" + a.str());
    if (a.is_timeout()) {
        auto it = c.val.find(a.name);
        if (it == c.val.end() || !it->second.is_zero())
            throw SemanticError(SemanticError::Code::timeout_not_ripe,
                                "timeout of " + a.name + " with value " +
                                    (it == c.val.end() ? "-" : it->second.str()));
    }
    Configuration next{tr->target, {}};
    for (const auto& y : at.active_of(tr->target)) {
        if (tr->update.starts_timer(y)) {
            next.val.emplace(y, Rat(tr->update.start->second));
        } else {
            auto it = c.val.find(y);
            if (it == c.val.end())
                throw UsageError("carried timer " + y + " has no value; invalid model?");
            next.val.emplace(y, it->second);
        }
    }
    return {next, tr->update};
}

TimedRun run_from_word(const AutomatonWithTimers& at, const RunWord& word) {
    TimedRun run;
    run.initial = {at.initial, {}};
    Configuration cur = run.initial;
    int index = 0;
    for (const auto& ws : word.steps) {
        ++index;
        try {
            Configuration at_instant = delay_config(cur, ws.delay);
            auto [next, update] = discrete_step(at, at_instant, ws.action);
            run.steps.push_back({ws.delay, ws.action, update, at_instant, next});
            cur = next;
        } catch (const SemanticError& e) {
            throw SemanticError(e.code, e.what(), index);
        }
    }
    try {
        run.final_config = delay_config(cur, word.final_delay);
    } catch (const SemanticError& e) {
        throw SemanticError(e.code, e.what(), index + 1);
    }
    run.final_delay = word.final_delay;
    return run;
}

RunWord word_of_run(const TimedRun& run) {
    RunWord w;
    for (const auto& s : run.steps) w.steps.push_back({s.delay, s.action});
    w.final_delay = run.final_delay;
    return w;
}

UntimedTrace untimed_trace(const TimedRun& run) {
    UntimedTrace t;
    t.states.push_back(run.initial.state);
    for (const auto& s : run.steps) {
        t.actions.push_back(s.action);
        t.states.push_back(s.after.state);
    }
    return t;
}

bool is_padded(const TimedRun& run) {
    if (run.steps.empty()) {
        // Base-case run (q0) -d-> (q0): padded iff the single delay is positive.
        return !run.final_delay.is_zero();
    }
    if (run.steps.front().delay.is_zero()) return false;
    if (run.final_delay.is_zero()) return false;
    for (const auto& [x, v] : run.final_config.val)
        if (v.is_zero()) return false;
    return true;
}

} // namespace awt
