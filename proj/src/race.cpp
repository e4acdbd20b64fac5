#include "awt/race.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace awt {

std::string RegionWord::str() const {
    std::string out;
    for (const auto& l : labels) {
        if (!out.empty()) out += " ";
        out += l.str();
    }
    return out;
}

WordBlocks decode_word(const RegionWord& word) {
    auto malformed = [](const std::string& why) -> SemanticError {
        return SemanticError(SemanticError::Code::malformed_word, why);
    };
    WordBlocks wb;
    const int n = static_cast<int>(word.labels.size());
    wb.owner.assign(n + 1, -1);
    wb.window.assign(n + 1, -1);

    std::map<std::string, int> open;                // timer -> open block
    std::map<std::string, std::pair<int, int>> just_closed; // timer -> (block, at)
    int window = 0;
    bool window_used = false;
    int kill_context = -1; // position of the action the next kill belongs to

    for (int p = 1; p <= n; ++p) {
        const RegionLabel& l = word.labels[p - 1];
        if (l.kind == RegionLabel::Kind::tau) {
            if (window_used) { ++window; window_used = false; }
            kill_context = -1;
            continue;
        }
        wb.window[p] = window;
        window_used = true;
        if (l.kind == RegionLabel::Kind::kill) {
            const std::string& x = l.kill_timer;
            if (kill_context < 0)
                throw malformed("kill_" + x + " does not follow an action");
            int victim = -1;
            auto jc = just_closed.find(x);
            if (jc != just_closed.end() && jc->second.second == kill_context) {
                victim = jc->second.first;
            } else if (auto it = open.find(x); it != open.end()) {
                const RegionLabel& ctx = word.labels[kill_context - 1];
                if (wb.blocks[it->second].positions.front() == kill_context ||
                    (ctx.action.is_timeout() && ctx.action.name == x))
                    throw malformed("kill_" + x + " after an action that cannot discard it");
                victim = it->second;
                open.erase(it);
            }
            if (victim < 0) throw malformed("kill_" + x + " without an open chain");
            if (wb.blocks[victim].killed) throw malformed("chain of " + x + " killed twice");
            wb.blocks[victim].killed = true;
            wb.blocks[victim].kill_pos = p;
            wb.blocks[victim].discarder_pos = kill_context;
            wb.blocks[victim].positions.push_back(p);
            wb.owner[p] = victim;
            continue;
        }

        // Action label.
        const Action& a = l.action;
        just_closed.clear();
        kill_context = p;
        int id = -1;
        if (a.is_timeout()) {
            auto it = open.find(a.name);
            if (it == open.end())
                throw malformed("timeout of " + a.name + " without an open chain");
            if (l.updated && *l.updated != a.name)
                throw malformed("timeout of " + a.name + " restarting " + *l.updated);
            id = it->second;
            wb.blocks[id].positions.push_back(p);
            if (!l.updated) open.erase(it); // chain ends with fate bot
        } else {
            if (l.updated) {
                auto it = open.find(*l.updated);
                if (it != open.end()) { // restart discards the old chain
                    just_closed[*l.updated] = {it->second, p};
                    open.erase(it);
                }
            }
            id = static_cast<int>(wb.blocks.size());
            wb.blocks.push_back({l.updated, {p}, false, -1, -1});
            if (l.updated) open[*l.updated] = id;
        }
        wb.owner[p] = id;
    }
    return wb;
}

namespace {

struct WordGraph {
    int blocks;
    std::vector<std::pair<int, int>> edges;
};

WordGraph word_graph(const RegionWord& word, const WordBlocks& wb) {
    WordGraph g{static_cast<int>(wb.blocks.size()), {}};
    std::set<std::pair<int, int>> seen;
    auto add = [&](int from, int to) {
        if (from != to && seen.insert({from, to}).second) g.edges.push_back({from, to});
    };
    const int n = static_cast<int>(word.labels.size());
    auto is_action = [&](int p) {
        return word.labels[p - 1].kind == RegionLabel::Kind::act;
    };
    for (int p = 1; p <= n; ++p) {
        if (!is_action(p)) continue;
        for (int q = p + 1; q <= n && wb.window[q] == wb.window[p]; ++q)
            if (is_action(q)) add(wb.owner[p], wb.owner[q]);
    }
    for (const auto& b : wb.blocks)
        if (b.killed) add(wb.owner[b.discarder_pos],
                          static_cast<int>(&b - wb.blocks.data()));
    return g;
}

bool graph_cyclic(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) adj[a].push_back(b);
    std::vector<int> color(n, 0);
    std::function<bool(int)> dfs = [&](int v) {
        color[v] = 1;
        for (int w : adj[v]) {
            if (color[w] == 1) return true;
            if (color[w] == 0 && dfs(w)) return true;
        }
        color[v] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (color[v] == 0 && dfs(v)) return true;
    return false;
}

} // namespace

bool static_single_timer_check(const AutomatonWithTimers& at) {
    for (const auto& q : at.states)
        if (at.active_of(q).size() > 1) return false;
    return true;
}

bool block_graph_cyclic_word(const RegionWord& word) {
    WordBlocks wb = decode_word(word);
    WordGraph g = word_graph(word, wb);
    return graph_cyclic(g.blocks, g.edges);
}

bool phi_matches(const RegionWord& word) {
    const int n = static_cast<int>(word.labels.size());
    if (n == 0) return false;
    if (word.labels.front().kind != RegionLabel::Kind::tau ||
        word.labels.back().kind != RegionLabel::Kind::tau)
        return false;
    WordBlocks wb = decode_word(word);
    const int nblocks = static_cast<int>(wb.blocks.size());
    if (nblocks == 0 || nblocks > 62) return false;

    auto is_action = [&](int p) {
        return word.labels[p - 1].kind == RegionLabel::Kind::act;
    };
    // Candidate race pairs (p < q): two actions of one tau-free window, or a
    // discarding action with the kill it caused.
    std::vector<std::pair<int, int>> pairs;
    for (int p = 1; p <= n; ++p) {
        if (!is_action(p)) continue;
        for (int q = p + 1; q <= n && wb.window[q] == wb.window[p]; ++q)
            if (is_action(q) && wb.owner[q] != wb.owner[p]) pairs.push_back({p, q});
    }
    for (const auto& b : wb.blocks)
        if (b.killed) pairs.push_back({b.discarder_pos, b.kill_pos});
    std::sort(pairs.begin(), pairs.end());

    // Choose a non-overlapping increasing subsequence of pairs such that the
    // blocks of all chosen q positions are covered by blocks of chosen p's.
    std::map<std::tuple<size_t, int, uint64_t, uint64_t>, bool> memo;
    std::function<bool(size_t, int, uint64_t, uint64_t)> go =
        [&](size_t i, int min_pos, uint64_t need, uint64_t cover) -> bool {
        if ((need & ~cover) == 0 && (need | cover) != 0) return true;
        if (i == pairs.size()) return false;
        auto key = std::make_tuple(i, min_pos, need, cover);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool ok = false;
        // Skip this pair.
        ok = go(i + 1, min_pos, need, cover);
        // Or take it. The previous q may double as this pair's p: a block's
        // only action can take a race in and discard a timer out.
        if (!ok && pairs[i].first >= min_pos) {
            uint64_t need2 = need | (1ULL << wb.owner[pairs[i].second]);
            uint64_t cover2 = cover | (1ULL << wb.owner[pairs[i].first]);
            ok = go(i + 1, pairs[i].second, need2, cover2);
        }
        memo[key] = ok;
        return ok;
    };
    return go(0, 0, 0, 0);
}

// --- Bounded search for an unwigglable padded word -------------------------

namespace {

struct SearchNode {
    ModifiedRegionState mrs; // pending is always drained here
    bool tau_pending = false;
    std::vector<std::pair<RegionLabel, ModifiedRegionState>> path;
    // Word-level block graph so far.
    int next_block = 0;
    std::map<std::string, int> chains; // timer -> open block id
    std::set<int> window;              // blocks with an action in the open window
    std::vector<std::pair<int, int>> edges;
    bool cyclic = false;
};

struct Searcher {
    const AutomatonWithTimers& at;
    int budget = 0;
    // node key -> (explored budget, subtree hit the budget wall)
    std::unordered_map<std::string, std::pair<int, bool>> memo;
    std::vector<std::pair<RegionLabel, ModifiedRegionState>> found;
    // When set, every completed padded word is reported instead of searching.
    const std::function<bool(const RegionWord&,
                             const std::vector<std::pair<RegionLabel,
                                                         ModifiedRegionState>>&)>*
        collect = nullptr;
    bool stop_collecting = false;

    explicit Searcher(const AutomatonWithTimers& a) : at(a) {}

    std::string node_key(const SearchNode& nd) const {
        std::string k = nd.cyclic ? "C|" : "A|";
        k += nd.mrs.key();
        k += nd.tau_pending ? "|t|" : "|.|";
        if (nd.cyclic) return k;
        // Canonical live-block summary: open chains by timer name, then
        // window-only blocks in appearance order, plus their reachability.
        std::vector<int> live;
        for (const auto& [t, id] : nd.chains) live.push_back(id);
        std::vector<int> wonly(nd.window.begin(), nd.window.end());
        for (int id : wonly)
            if (std::find(live.begin(), live.end(), id) == live.end())
                live.push_back(id);
        std::map<int, std::vector<int>> adj;
        for (const auto& [a2, b2] : nd.edges) adj[a2].push_back(b2);
        auto reaches = [&](int from, int to) {
            std::vector<int> stack{from};
            std::set<int> seen{from};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : adj[v]) {
                    if (w == to) return true;
                    if (seen.insert(w).second) stack.push_back(w);
                }
            }
            return false;
        };
        for (size_t i = 0; i < live.size(); ++i) {
            const auto* timer = [&]() -> const std::string* {
                for (const auto& [t, id] : nd.chains)
                    if (id == live[i]) return &t;
                return nullptr;
            }();
            k += timer ? *timer : "~";
            k += nd.window.count(live[i]) ? "w" : ".";
            for (size_t j = 0; j < live.size(); ++j)
                k += (i != j && reaches(live[i], live[j])) ? "1" : "0";
            k += ";";
        }
        return k;
    }

    bool finishable(const SearchNode& nd) const {
        if (nd.mrs.region.has_zero_valued_timer()) return false;
        if (nd.tau_pending) return true;
        // A fresh positive delay can stay inside open or empty regions.
        return nd.mrs.region.empty() || nd.mrs.region.zero_class.empty();
    }

    std::vector<std::pair<RegionLabel, ModifiedRegionState>>
    finish(const SearchNode& nd) const {
        auto path = nd.path;
        path.emplace_back(RegionLabel::tau(), nd.mrs);
        return path;
    }

    /// Applies one action plus its forced kills; returns the label cost or -1
    /// if the budget does not allow it.
    int apply_action(SearchNode& nd, const Action& a, int remaining) {
        auto [next, label] = discrete_successor(at, nd.mrs, a);
        int cost = 1 + static_cast<int>(next.pending.size());
        if (cost > remaining) return -1;

        if (nd.tau_pending) {
            nd.path.emplace_back(RegionLabel::tau(), nd.mrs);
            nd.tau_pending = false;
            nd.window.clear();
        }
        // Resolve the acting block and close discarded chains.
        int id;
        std::map<std::string, int> victims; // killed timer -> closed chain
        if (a.is_timeout()) {
            id = nd.chains.at(a.name);
            if (!label.updated) nd.chains.erase(a.name);
        } else {
            id = nd.next_block++;
            if (label.updated) {
                auto it = nd.chains.find(*label.updated);
                if (it != nd.chains.end()) victims[*label.updated] = it->second;
                nd.chains[*label.updated] = id;
            }
        }
        // Silently stopped timers also close their chains.
        for (const auto& x : discarded_timers(at, nd.mrs.state, a)) {
            if (label.updated && *label.updated == x) continue;
            auto it = nd.chains.find(x);
            if (it != nd.chains.end()) {
                victims[x] = it->second;
                nd.chains.erase(it);
            }
        }
        for (int w : nd.window)
            if (w != id) nd.edges.push_back({w, id});
        nd.window.insert(id);

        ModifiedRegionState cur = next;
        nd.path.emplace_back(label, next);
        while (!cur.pending.empty()) {
            const std::string x = *cur.pending.begin();
            auto [drained, kl] = kill_step(cur, x);
            cur = drained;
            nd.path.emplace_back(kl, cur);
            auto v = victims.find(x);
            if (v == victims.end())
                throw std::logic_error("kill without a tracked chain");
            nd.edges.push_back({id, v->second});
        }
        nd.mrs = cur;
        nd.cyclic = nd.cyclic || graph_cyclic(nd.next_block, nd.edges);
        return cost;
    }

    /// Returns true when a witness was found. trunc_out reports whether some
    /// continuation of this subtree was cut off by the label budget.
    bool dfs(const SearchNode& nd, int used, bool& trunc_out) {
        if (stop_collecting) return false;
        const int remaining = budget - used;
        if (collect ? finishable(nd) : (nd.cyclic && finishable(nd))) {
            auto path = finish(nd);
            if (collect) {
                RegionWord w;
                for (const auto& [l, s] : path) w.labels.push_back(l);
                if (!(*collect)(w, path)) stop_collecting = true;
            } else {
                found = path;
                return true;
            }
        }

        std::string key;
        if (!collect) {
            key = node_key(nd);
            auto it = memo.find(key);
            if (it != memo.end() && it->second.first >= remaining) {
                trunc_out = trunc_out || it->second.second;
                return false;
            }
        }

        bool sub_trunc = false;
        // Discrete moves in canonical order.
        std::vector<Action> acts;
        for (const auto& i : at.inputs) acts.push_back(Action::in(i));
        for (const auto& x : at.active_of(nd.mrs.state))
            if (nd.mrs.region.value_zero(x)) acts.push_back(Action::to(x));
        std::sort(acts.begin(), acts.end());
        for (const auto& a : acts) {
            if (!at.delta.count({nd.mrs.state, a})) continue;
            SearchNode child = nd;
            int cost = apply_action(child, a, remaining);
            if (cost < 0) {
                sub_trunc = true;
                continue;
            }
            if (dfs(child, used + cost, sub_trunc)) return true;
        }
        // Delay move: one immediate successor step.
        if (!nd.mrs.region.empty() || !nd.tau_pending) {
            auto next = delay_successor(nd.mrs.region);
            if (next) {
                SearchNode child = nd;
                child.mrs.region = *next;
                child.tau_pending = true;
                child.window.clear();
                if (dfs(child, used, sub_trunc)) return true;
            }
        }

        if (!collect) {
            auto it = memo.find(key);
            if (it == memo.end() || it->second.first < remaining)
                memo[key] = {remaining, sub_trunc};
        }
        trunc_out = trunc_out || sub_trunc;
        return false;
    }

    SearchNode root() const {
        SearchNode nd;
        nd.mrs = {at.initial, region_of_valuation({}, at.max_constant()), {}};
        nd.tau_pending = true; // padded words start with a positive delay
        return nd;
    }
};

} // namespace

void enumerate_padded_words(
    const AutomatonWithTimers& at, int max_labels,
    const std::function<bool(const RegionWord&,
                             const std::vector<std::pair<RegionLabel,
                                                         ModifiedRegionState>>&)>& f) {
    Searcher s(at);
    s.budget = max_labels;
    s.collect = &f;
    bool trunc = false;
    s.dfs(s.root(), 0, trunc);
}

TimedRun lift_word_path(
    const AutomatonWithTimers& at,
    const std::vector<std::pair<RegionLabel, ModifiedRegionState>>& path) {
    Configuration cur{at.initial, {}};
    RunWord word;
    Rat pending;
    for (const auto& [label, mrs] : path) {
        switch (label.kind) {
            case RegionLabel::Kind::tau:
                pending += advance_config_to_region(at, cur, mrs.region);
                break;
            case RegionLabel::Kind::act: {
                auto [next, update] = discrete_step(at, cur, label.action);
                word.steps.push_back({pending, label.action});
                pending = Rat(0);
                cur = next;
                break;
            }
            case RegionLabel::Kind::kill:
                break;
        }
    }
    word.final_delay = pending;
    return run_from_word(at, word);
}

RaceAvoidanceVerdict search_unwigglable(const AutomatonWithTimers& at,
                                        int max_actions, RaceSearchOptions opts) {
    if (max_actions < 1) throw UsageError("max_actions must be at least 1");

    bool final_truncated = false;
    for (int bound = 1; bound <= max_actions; ++bound) {
        Searcher s(at);
        s.budget = bound;
        bool trunc = false;
        if (s.dfs(s.root(), 0, trunc)) {
            RaceAvoidanceVerdict v;
            v.kind = RaceVerdictKind::not_race_avoiding;
            v.max_actions = max_actions;
            RegionWord w;
            for (const auto& [l, st] : s.found) w.labels.push_back(l);
            v.word = w;
            v.witness = lift_word_path(at, s.found);
            BlockGraph g = block_graph(at, *v.witness);
            v.certificate = make_certificate(at, *v.witness, g);
            return v;
        }
        if (bound == max_actions) final_truncated = trunc;
    }

    RaceAvoidanceVerdict v;
    v.max_actions = max_actions;
    if (opts.use_static_check && static_single_timer_check(at))
        v.kind = RaceVerdictKind::race_avoiding_static;
    else if (!final_truncated)
        v.kind = RaceVerdictKind::race_avoiding_exhausted;
    else
        v.kind = RaceVerdictKind::unknown_beyond_bound;
    return v;
}

} // namespace awt
