#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "awt/semantics.hpp"

namespace awt {

/// Equivalence class of valuations: integer parts, which timers sit exactly
/// on an integer, and the order of the positive fractional parts. Stored
/// canonically so equality and hashing are structural.
struct Region {
    std::vector<std::pair<std::string, long long>> ints; // sorted by timer name
    std::vector<std::string> zero_class;                 // frac == 0, sorted
    std::vector<std::vector<std::string>> frac_classes;  // ascending fractions

    bool empty() const { return ints.empty(); }
    bool has_timer(const std::string& x) const;
    long long int_of(const std::string& x) const;
    bool frac_zero(const std::string& x) const;
    /// Timer value is exactly zero (integer part 0, fraction 0).
    bool value_zero(const std::string& x) const;
    bool has_zero_valued_timer() const;

    std::string key() const; // canonical encoding, also used for hashing
    std::string str() const; // human-readable, e.g. "x1=0 0<x2<1"
    bool operator==(const Region& o) const { return key() == o.key(); }
    bool operator<(const Region& o) const { return key() < o.key(); }
};

struct RegionState {
    std::string state;
    Region region;
    std::string key() const { return state + "|" + region.key(); }
    bool operator==(const RegionState& o) const { return key() == o.key(); }
};

/// Region-automaton state extended with the set of timers the incoming
/// transition discarded at value zero; it must be drained by kill steps
/// before anything else happens.
struct ModifiedRegionState {
    std::string state;
    Region region;
    std::set<std::string> pending; // discarded-at-zero timers, ascending
    std::string key() const;
    bool operator==(const ModifiedRegionState& o) const { return key() == o.key(); }
};

struct RegionLabel {
    enum class Kind { tau, act, kill } kind;
    Action action;                      // for act
    std::optional<std::string> updated; // for act: started timer, if any
    std::string kill_timer;             // for kill

    static RegionLabel tau() { return {Kind::tau, {}, std::nullopt, ""}; }
    static RegionLabel act(Action a, std::optional<std::string> upd) {
        return {Kind::act, std::move(a), std::move(upd), ""};
    }
    static RegionLabel kill(std::string x) {
        return {Kind::kill, {}, std::nullopt, std::move(x)};
    }
    std::string str() const;
    bool operator==(const RegionLabel& o) const { return str() == o.str(); }
};

/// Canonical region containing c. All values must be at most C.
Region region_of(const Configuration& c, long long max_const);
Region region_of_valuation(const Valuation& v, long long max_const);

/// Same domain, integer parts, zero-fraction flags and fraction order.
bool timer_equivalent(const Valuation& k1, const Valuation& k2);

/// The unique region reached by the smallest positive delay that changes the
/// region. none when some timer is exactly zero; an empty region is its own
/// successor.
std::optional<Region> delay_successor(const Region& r);
std::optional<RegionState> delay_successor(const RegionState& rs);

/// Every region reachable by some positive delay (the transitive closure of
/// immediate successors, plus the region itself when a small delay stays
/// inside it). Empty for regions with a zero-valued timer.
std::vector<Region> tau_closure(const Region& r);

/// Discrete step lifted to regions, with the discarded-at-zero set attached
/// to the successor. Requires the pending set to be empty.
std::pair<ModifiedRegionState, RegionLabel>
discrete_successor(const AutomatonWithTimers& at, const ModifiedRegionState& mrs,
                   const Action& a);

/// Removes one timer from the pending set.
std::pair<ModifiedRegionState, RegionLabel>
kill_step(const ModifiedRegionState& mrs, const std::string& x);

struct RegionRunOptions {
    // collapsed: one tau per positive delay. Expanded mode instead emits one
    // tau per immediate-successor step, so delays that stay inside one
    // region (timerless states, small moves inside an open region) emit
    // none.
    bool collapsed = true;
    bool modified = false; // annotate updates, emit kill symbols, track pending
};

struct RegionRun {
    ModifiedRegionState initial;
    std::vector<std::pair<RegionLabel, ModifiedRegionState>> steps;
    std::vector<RegionLabel> labels() const;
};

/// Abstraction of a concrete run.
RegionRun region_run_of(const AutomatonWithTimers& at, const TimedRun& run,
                        RegionRunOptions opts = {});

/// |Q| * |X|! * 2^|X| * (C+1)^|X|, saturated at the int64 maximum.
long long region_count_bound(const AutomatonWithTimers& at);

/// Advances cur by exact positive delays until its region equals target,
/// returning the total delay. When target equals the current region, applies
/// one positive delay that stays inside it (open or empty regions only).
Rat advance_config_to_region(const AutomatonWithTimers& at, Configuration& cur,
                             const Region& target);

} // namespace awt
