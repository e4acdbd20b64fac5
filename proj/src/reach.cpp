#include "awt/reach.hpp"

#include <algorithm>
#include <functional>
#include <thread>
#include <unordered_map>

namespace awt {

namespace {

/// Successors of a plain region state in canonical order: the immediate delay
/// successor first, then discrete steps sorted by action.
std::vector<std::pair<RegionLabel, RegionState>>
successors(const AutomatonWithTimers& at, const RegionState& rs) {
    std::vector<std::pair<RegionLabel, RegionState>> out;
    if (auto d = delay_successor(rs)) {
        if (!(d->region == rs.region))
            out.emplace_back(RegionLabel::tau(), *d);
    }
    ModifiedRegionState mrs{rs.state, rs.region, {}};
    std::vector<Action> acts;
    for (const auto& i : at.inputs) acts.push_back(Action::in(i));
    for (const auto& x : at.active_of(rs.state))
        if (rs.region.value_zero(x)) acts.push_back(Action::to(x));
    std::sort(acts.begin(), acts.end());
    for (const auto& a : acts) {
        if (!at.delta.count({rs.state, a})) continue;
        auto [next, label] = discrete_successor(at, mrs, a);
        label.updated = std::nullopt; // plain region automaton: bare actions
        out.emplace_back(label, RegionState{next.state, next.region});
    }
    return out;
}

struct SearchState {
    std::vector<RegionState> order; // discovery order
    std::unordered_map<std::string, int> index;
    std::vector<int> parent;
    std::vector<RegionLabel> via;
};

/// BFS until `stop` says to halt (or exhaustion). Returns the index of the
/// stopping state or -1.
int bfs(const AutomatonWithTimers& at, SearchState& ss, int jobs,
        const std::function<bool(const RegionState&)>& stop) {
    RegionState s0{at.initial, region_of_valuation({}, at.max_constant())};
    ss.order.push_back(s0);
    ss.index[s0.key()] = 0;
    ss.parent.push_back(-1);
    ss.via.push_back(RegionLabel::tau());
    if (stop(s0)) return 0;

    std::vector<int> level{0};
    while (!level.empty()) {
        // Expand the whole level, in parallel chunks when requested.
        std::vector<std::vector<std::pair<RegionLabel, RegionState>>> succ(level.size());
        auto expand = [&](size_t from, size_t to) {
            for (size_t i = from; i < to; ++i)
                succ[i] = successors(at, ss.order[level[i]]);
        };
        if (jobs > 1 && level.size() > 1) {
            std::vector<std::thread> pool;
            size_t chunk = (level.size() + jobs - 1) / jobs;
            for (size_t start = 0; start < level.size(); start += chunk)
                pool.emplace_back(expand, start, std::min(start + chunk, level.size()));
            for (auto& t : pool) t.join();
        } else {
            expand(0, level.size());
        }

        std::vector<int> next_level;
        for (size_t i = 0; i < level.size(); ++i) {
            for (auto& [label, rs] : succ[i]) {
                auto key = rs.key();
                if (ss.index.count(key)) continue;
                int id = static_cast<int>(ss.order.size());
                ss.index[key] = id;
                ss.order.push_back(rs);
                ss.parent.push_back(level[i]);
                ss.via.push_back(label);
                if (stop(rs)) return id;
                next_level.push_back(id);
            }
        }
        level = std::move(next_level);
    }
    return -1;
}

} // namespace

ReachabilityResult reachable(const AutomatonWithTimers& at, const std::string& target,
                             ReachOptions opts) {
    if (!at.has_state(target)) throw UsageError("unknown target state: " + target);
    SearchState ss;
    int hit = bfs(at, ss, opts.jobs,
                  [&](const RegionState& rs) { return rs.state == target; });
    ReachabilityResult res;
    res.explored = static_cast<long long>(ss.order.size());
    res.reachable = hit >= 0;
    if (hit < 0) return res;

    std::vector<std::pair<RegionLabel, RegionState>> path;
    for (int v = hit; v != 0; v = ss.parent[v])
        path.emplace_back(ss.via[v], ss.order[v]);
    std::reverse(path.begin(), path.end());
    res.region_path = path;
    if (opts.build_witness) res.witness_run = lift_to_timed_run(at, path);
    return res;
}

TimedRun lift_to_timed_run(const AutomatonWithTimers& at,
                           const std::vector<std::pair<RegionLabel, RegionState>>& path) {
    const long long C = at.max_constant();
    Configuration cur{at.initial, {}};
    RunWord word;
    Rat pending_delay;

    for (const auto& [label, rs] : path) {
        switch (label.kind) {
            case RegionLabel::Kind::tau:
                pending_delay += advance_config_to_region(at, cur, rs.region);
                break;
            case RegionLabel::Kind::act: {
                auto [next, update] = discrete_step(at, cur, label.action);
                word.steps.push_back({pending_delay, label.action});
                pending_delay = Rat(0);
                cur = next;
                if (!(region_of(cur, C) == rs.region))
                    throw std::logic_error("lift: discrete step missed its region");
                break;
            }
            case RegionLabel::Kind::kill:
                break; // bookkeeping only; nothing happens in the run
        }
    }

    // Trailing delay: positive when it can stay inside the final region, so
    // the expanded abstraction of the lifted run equals the path exactly.
    Rat final_d = pending_delay;
    if (final_d.is_zero()) {
        if (cur.val.empty()) {
            final_d = Rat(1);
        } else {
            Region here = region_of(cur, C);
            if (here.zero_class.empty()) {
                Rat fmin(1);
                for (const auto& [x, v] : cur.val) {
                    Rat f = v.frac();
                    if (!f.is_zero()) fmin = std::min(fmin, f);
                }
                final_d = fmin / Rat(2);
            }
        }
    }
    word.final_delay = final_d;
    return run_from_word(at, word);
}

long long count_reachable_regions(const AutomatonWithTimers& at, int jobs) {
    SearchState ss;
    bfs(at, ss, jobs, [](const RegionState&) { return false; });
    return static_cast<long long>(ss.order.size());
}

std::vector<std::tuple<RegionState, RegionLabel, RegionState>>
explore_region_graph(const AutomatonWithTimers& at) {
    std::vector<std::tuple<RegionState, RegionLabel, RegionState>> edges;
    SearchState ss;
    bfs(at, ss, 1, [](const RegionState&) { return false; });
    for (const auto& rs : ss.order)
        for (const auto& [label, next] : successors(at, rs))
            edges.emplace_back(rs, label, next);
    return edges;
}

} // namespace awt
