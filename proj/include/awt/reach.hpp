#pragma once

#include "awt/region.hpp"

namespace awt {

struct ReachabilityResult {
    bool reachable;
    /// Region path from s0 to the first hit, one entry per edge.
    std::optional<std::vector<std::pair<RegionLabel, RegionState>>> region_path;
    std::optional<TimedRun> witness_run;
    long long explored; // distinct region states visited
};

struct ReachOptions {
    bool build_witness = true;
    int jobs = 1; // level-synchronous parallel expansion when > 1
};

/// Breadth-first search over the region automaton with canonical-region
/// dedup. Deterministic for any job count: levels are expanded in canonical
/// order.
ReachabilityResult reachable(const AutomatonWithTimers& at, const std::string& target,
                             ReachOptions opts = {});

/// Concrete run whose abstraction follows the given expanded-mode path.
/// Delays are exact rationals picked inside each crossed region.
TimedRun lift_to_timed_run(const AutomatonWithTimers& at,
                           const std::vector<std::pair<RegionLabel, RegionState>>& path);

/// Enumerates the whole reachable region graph; returns the state count.
long long count_reachable_regions(const AutomatonWithTimers& at, int jobs = 1);

/// Reachable region graph edges for DOT emission: (from, label, to).
std::vector<std::tuple<RegionState, RegionLabel, RegionState>>
explore_region_graph(const AutomatonWithTimers& at);

} // namespace awt
