#include "awt/region.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace awt {

bool Region::has_timer(const std::string& x) const {
    for (const auto& [t, i] : ints)
        if (t == x) return true;
    return false;
}

long long Region::int_of(const std::string& x) const {
    for (const auto& [t, i] : ints)
        if (t == x) return i;
    throw UsageError("timer not in region: " + x);
}

bool Region::frac_zero(const std::string& x) const {
    return std::find(zero_class.begin(), zero_class.end(), x) != zero_class.end();
}

bool Region::value_zero(const std::string& x) const {
    return int_of(x) == 0 && frac_zero(x);
}

bool Region::has_zero_valued_timer() const {
    for (const auto& x : zero_class)
        if (int_of(x) == 0) return true;
    return false;
}

std::string Region::key() const {
    std::string k;
    for (const auto& [t, i] : ints) k += t + ":" + std::to_string(i) + ";";
    k += "z:";
    for (const auto& t : zero_class) k += t + ",";
    for (const auto& cls : frac_classes) {
        k += "|";
        for (const auto& t : cls) k += t + ",";
    }
    return k;
}

std::string Region::str() const {
    if (ints.empty()) return "-";
    std::string out;
    for (const auto& [t, i] : ints) {
        if (!out.empty()) out += " ";
        if (frac_zero(t))
            out += t + "=" + std::to_string(i);
        else
            out += std::to_string(i) + "<" + t + "<" + std::to_string(i + 1);
    }
    if (frac_classes.size() > 1 ||
        (frac_classes.size() == 1 && frac_classes[0].size() > 1)) {
        out += " frac:";
        for (size_t c = 0; c < frac_classes.size(); ++c) {
            if (c > 0) out += " <";
            for (size_t j = 0; j < frac_classes[c].size(); ++j)
                out += (j > 0 ? "=" : " ") + frac_classes[c][j];
        }
    }
    return out;
}

std::string ModifiedRegionState::key() const {
    std::string k = state + "|" + region.key() + "|D:";
    for (const auto& x : pending) k += x + ",";
    return k;
}

std::string RegionLabel::str() const {
    switch (kind) {
        case Kind::tau: return "tau";
        case Kind::kill: return "kill_" + kill_timer;
        case Kind::act:
            return "(" + action.str() + "," + (updated ? *updated : "-") + ")";
    }
    return "?";
}

Region region_of_valuation(const Valuation& v, long long max_const) {
    std::vector<std::pair<Rat, std::string>> by_frac;
    Region r;
    for (const auto& [x, val] : v) {
        if (val.is_negative()) throw UsageError("negative timer value");
        if (val > Rat(max_const))
            throw SemanticError(SemanticError::Code::value_exceeds_c,
                                "timer " + x + " = " + val.str() +
                                    " exceeds the maximum constant " +
                                    std::to_string(max_const));
        r.ints.emplace_back(x, val.floor());
        Rat f = val.frac();
        if (f.is_zero())
            r.zero_class.push_back(x);
        else
            by_frac.emplace_back(f, x);
    }
    std::sort(r.ints.begin(), r.ints.end());
    std::sort(r.zero_class.begin(), r.zero_class.end());
    std::sort(by_frac.begin(), by_frac.end());
    for (size_t i = 0; i < by_frac.size();) {
        size_t j = i;
        std::vector<std::string> cls;
        while (j < by_frac.size() && by_frac[j].first == by_frac[i].first)
            cls.push_back(by_frac[j++].second);
        std::sort(cls.begin(), cls.end());
        r.frac_classes.push_back(std::move(cls));
        i = j;
    }
    return r;
}

Region region_of(const Configuration& c, long long max_const) {
    return region_of_valuation(c.val, max_const);
}

bool timer_equivalent(const Valuation& k1, const Valuation& k2) {
    if (k1.size() != k2.size()) return false;
    long long cap = 0;
    for (const auto& [x, v] : k1) {
        if (!k2.count(x)) return false;
        cap = std::max(cap, v.floor() + 1);
    }
    for (const auto& [x, v] : k2) cap = std::max(cap, v.floor() + 1);
    return region_of_valuation(k1, cap) == region_of_valuation(k2, cap);
}

std::optional<Region> delay_successor(const Region& r) {
    if (r.empty()) return r; // no timers: time passes, nothing changes
    if (r.has_zero_valued_timer()) return std::nullopt;
    Region next;
    next.ints = r.ints;
    if (!r.zero_class.empty()) {
        // Timers on an integer boundary slip just below it and become the
        // topmost fraction class.
        for (auto& [t, i] : next.ints)
            if (r.frac_zero(t)) i -= 1;
        next.frac_classes = r.frac_classes;
        next.frac_classes.push_back(r.zero_class);
        return next;
    }
    // All fractions positive: the lowest class reaches its boundary.
    next.zero_class = r.frac_classes.front();
    next.frac_classes.assign(r.frac_classes.begin() + 1, r.frac_classes.end());
    return next;
}

std::optional<RegionState> delay_successor(const RegionState& rs) {
    auto r = delay_successor(rs.region);
    if (!r) return std::nullopt;
    return RegionState{rs.state, *r};
}

std::vector<Region> tau_closure(const Region& r) {
    std::vector<Region> out;
    if (r.empty()) {
        out.push_back(r);
        return out;
    }
    if (r.has_zero_valued_timer()) return out;
    if (r.zero_class.empty()) out.push_back(r); // small delays stay inside
    Region cur = r;
    while (true) {
        auto next = delay_successor(cur);
        if (!next || *next == cur) break;
        out.push_back(*next);
        if (next->has_zero_valued_timer()) break;
        cur = *next;
    }
    return out;
}

std::pair<ModifiedRegionState, RegionLabel>
discrete_successor(const AutomatonWithTimers& at, const ModifiedRegionState& mrs,
                   const Action& a) {
    if (!mrs.pending.empty())
        throw SemanticError(SemanticError::Code::pending_discards,
                            "state has pending discards to drain");
    auto tr = transition(at, mrs.state, a);
    if (!tr)
        throw SemanticError(SemanticError::Code::undefined_transition,
                            "undefined transition " + mrs.state + "/" + a.str());
    if (a.is_timeout() && !(mrs.region.has_timer(a.name) && mrs.region.value_zero(a.name)))
        throw SemanticError(SemanticError::Code::timeout_not_ripe,
                            "timeout of " + a.name + " in region " + mrs.region.str());

    ModifiedRegionState next;
    next.state = tr->target;
    const auto& dst_active = at.active_of(tr->target);

    // Carry surviving timers with their classes; a started timer lands on its
    // integer boundary.
    std::optional<std::string> started;
    if (tr->update.start) started = tr->update.start->first;
    auto keep = [&](const std::string& t) {
        return dst_active.count(t) && !(started && *started == t);
    };
    for (const auto& [t, i] : mrs.region.ints)
        if (keep(t)) next.region.ints.emplace_back(t, i);
    for (const auto& t : mrs.region.zero_class)
        if (keep(t)) next.region.zero_class.push_back(t);
    for (const auto& cls : mrs.region.frac_classes) {
        std::vector<std::string> kept;
        for (const auto& t : cls)
            if (keep(t)) kept.push_back(t);
        if (!kept.empty()) next.region.frac_classes.push_back(std::move(kept));
    }
    if (started) {
        next.region.ints.emplace_back(*started, tr->update.start->second);
        next.region.zero_class.push_back(*started);
        std::sort(next.region.ints.begin(), next.region.ints.end());
        std::sort(next.region.zero_class.begin(), next.region.zero_class.end());
    }

    // Timers this transition discards while their value is exactly zero.
    for (const auto& x : at.active_of(mrs.state)) {
        if (a.is_timeout() && a.name == x) continue;
        bool restarted = tr->update.starts_timer(x);
        bool stopped = !dst_active.count(x) && !restarted;
        if ((restarted || stopped) && mrs.region.value_zero(x)) next.pending.insert(x);
    }
    return {next, RegionLabel::act(a, started)};
}

std::pair<ModifiedRegionState, RegionLabel>
kill_step(const ModifiedRegionState& mrs, const std::string& x) {
    if (!mrs.pending.count(x))
        throw SemanticError(SemanticError::Code::not_pending,
                            "timer " + x + " is not pending a kill");
    ModifiedRegionState next = mrs;
    next.pending.erase(x);
    return {next, RegionLabel::kill(x)};
}

RegionRun region_run_of(const AutomatonWithTimers& at, const TimedRun& run,
                        RegionRunOptions opts) {
    const long long C = at.max_constant();
    RegionRun out;
    out.initial = {run.initial.state, region_of(run.initial, C), {}};
    ModifiedRegionState cur = out.initial;

    auto emit_delay = [&](const Configuration& before, const Rat& d,
                          const Configuration& after) {
        if (d.is_zero()) return;
        Region target = region_of(after, C);
        if (opts.collapsed) {
            cur = {before.state, target, {}};
            out.steps.emplace_back(RegionLabel::tau(), cur);
            return;
        }
        Region walk = cur.region;
        while (!(walk == target)) {
            auto next = delay_successor(walk);
            if (!next || *next == walk)
                throw std::logic_error("delay walk cannot reach the target region");
            walk = *next;
            cur = {before.state, walk, {}};
            out.steps.emplace_back(RegionLabel::tau(), cur);
        }
    };

    Configuration prev = run.initial;
    for (const auto& s : run.steps) {
        emit_delay(prev, s.delay, s.before);
        auto [next, label] = discrete_successor(at, cur, s.action);
        if (!opts.modified) {
            label.updated = std::nullopt;
            next.pending.clear();
        }
        cur = next;
        out.steps.emplace_back(label, cur);
        if (opts.modified) {
            while (!cur.pending.empty()) {
                auto [drained, kl] = kill_step(cur, *cur.pending.begin());
                cur = drained;
                out.steps.emplace_back(kl, cur);
            }
        }
        prev = s.after;
    }
    emit_delay(prev, run.final_delay, run.final_config);
    return out;
}

std::vector<RegionLabel> RegionRun::labels() const {
    std::vector<RegionLabel> out;
    for (const auto& [l, s] : steps) out.push_back(l);
    return out;
}

namespace {

Rat max_frac_of(const Configuration& c) {
    Rat m(0);
    for (const auto& [x, v] : c.val) m = std::max(m, v.frac());
    return m;
}

std::optional<Rat> min_pos_frac_of(const Configuration& c) {
    std::optional<Rat> m;
    for (const auto& [x, v] : c.val) {
        Rat f = v.frac();
        if (!f.is_zero() && (!m || f < *m)) m = f;
    }
    return m;
}

/// One delay crossing to the immediate successor region of cur's region.
Rat immediate_lift_delay(const Configuration& cur, const Region& here) {
    if (here.has_zero_valued_timer())
        throw std::logic_error("no positive delay from a zero-valued region");
    auto fmin = min_pos_frac_of(cur);
    if (here.zero_class.empty()) return *fmin; // lowest class hits its boundary
    Rat room = Rat(1) - max_frac_of(cur);
    return std::min(fmin ? *fmin : Rat(1), room) / Rat(2);
}

} // namespace

Rat advance_config_to_region(const AutomatonWithTimers& at, Configuration& cur,
                             const Region& target) {
    const long long C = at.max_constant();
    Rat total;
    Region here = region_of(cur, C);
    if (here == target) {
        // Positive delay that stays inside the region.
        Rat d;
        if (cur.val.empty()) {
            d = Rat(1);
        } else if (here.zero_class.empty()) {
            d = *min_pos_frac_of(cur) / Rat(2);
        } else {
            throw std::logic_error("cannot stay inside a boundary region");
        }
        cur = delay_config(cur, d);
        return d;
    }
    int guard = 0;
    while (!(here == target)) {
        Rat d = immediate_lift_delay(cur, here);
        cur = delay_config(cur, d);
        total += d;
        here = region_of(cur, C);
        if (++guard > 100000)
            throw std::logic_error("delay walk does not reach the target region");
    }
    return total;
}

long long region_count_bound(const AutomatonWithTimers& at) {
    const long long q = static_cast<long long>(at.states.size());
    const long long x = static_cast<long long>(at.timers.size());
    const long long c = at.max_constant();
    unsigned __int128 total = q;
    for (long long i = 2; i <= x; ++i) total *= i; // |X|!
    for (long long i = 0; i < x; ++i) total *= 2;  // 2^|X|
    for (long long i = 0; i < x; ++i) total *= static_cast<unsigned long long>(c + 1);
    if (total > static_cast<unsigned __int128>(INT64_MAX)) return INT64_MAX;
    return static_cast<long long>(total);
}

} // namespace awt
