#include "awt/blocks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace awt {

namespace {

void require_padded(const TimedRun& run) {
    if (!is_padded(run))
        throw SemanticError(SemanticError::Code::not_padded,
                            "block analysis is defined for padded runs only");
}

/// True iff the transition at action index l discards timer x.
bool action_discards(const TimedRun& run, int l, const std::string& x) {
    const RunStep& s = run.steps[l - 1];
    if (s.action.is_timeout() && s.action.name == x) return false;
    if (!s.before.val.count(x)) return false; // not active at the source
    bool restarted = s.update.starts_timer(x);
    bool stopped = !s.after.val.count(x) && !restarted;
    return restarted || stopped;
}

} // namespace

std::string fate_str(Fate f) {
    switch (f) {
        case Fate::bot: return "bot";
        case Fate::moon: return "moon";
        case Fate::cross: return "cross";
    }
    return "?";
}

bool Block::contains(int k) const {
    return std::find(action_indices.begin(), action_indices.end(), k) !=
           action_indices.end();
}

int BlockDecomposition::block_of(int k) const {
    for (size_t b = 0; b < blocks.size(); ++b)
        if (blocks[b].contains(k)) return static_cast<int>(b);
    return -1;
}

bool BlockGraph::has_edge(int from, int to) const {
    for (const auto& e : edges)
        if (e.from == from && e.to == to) return true;
    return false;
}

std::vector<int> BlockGraph::predecessors(int b) const {
    std::vector<int> out;
    for (const auto& e : edges)
        if (e.to == b) out.push_back(e.from);
    return out;
}

std::vector<int> BlockGraph::successors(int b) const {
    std::vector<int> out;
    for (const auto& e : edges)
        if (e.from == b) out.push_back(e.to);
    return out;
}

bool BlockGraph::cyclic() const {
    const int n = static_cast<int>(blocks.blocks.size());
    std::vector<int> color(n, 0);
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) adj[e.from].push_back(e.to);
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

bool triggers(const AutomatonWithTimers& at, const TimedRun& run, int k, int kp) {
    (void)at;
    const int n = run.num_actions();
    if (k < 1 || kp <= k || kp > n)
        throw UsageError("triggers: indices out of range");
    const RunStep& sk = run.steps[k - 1];
    if (!sk.update.starts()) return false;
    const std::string& x = sk.update.start->first;
    const RunStep& skp = run.steps[kp - 1];
    if (!skp.action.is_timeout() || skp.action.name != x) return false;
    for (int l = k + 1; l < kp; ++l) {
        const RunStep& sl = run.steps[l - 1];
        if (sl.action.is_timeout() && sl.action.name == x) return false;
        if (action_discards(run, l, x)) return false;
    }
    return true;
}

BlockDecomposition decompose_blocks(const AutomatonWithTimers& at, const TimedRun& run) {
    require_padded(run);
    const int n = run.num_actions();
    BlockDecomposition dec;
    std::vector<bool> used(n + 1, false);

    for (int k = 1; k <= n; ++k) {
        if (used[k]) continue;
        const RunStep& sk = run.steps[k - 1];
        if (sk.action.is_timeout()) continue; // consumed by some chain below
        used[k] = true;
        Block b;
        b.action_indices.push_back(k);
        if (!sk.update.starts()) {
            b.timer = std::nullopt;
            b.fate = Fate::bot;
            dec.blocks.push_back(std::move(b));
            continue;
        }
        const std::string x = sk.update.start->first;
        b.timer = x;
        // Follow the trigger chain while the timer keeps being restarted.
        int cur = k;
        while (true) {
            int next = 0;
            for (int kp = cur + 1; kp <= n; ++kp) {
                if (triggers(at, run, cur, kp)) { next = kp; break; }
            }
            if (next == 0) break;
            used[next] = true;
            b.action_indices.push_back(next);
            if (!run.steps[next - 1].update.starts()) break;
            cur = next;
        }
        // Timer fate of the chain's last action.
        const RunStep& last = run.steps[b.last() - 1];
        if (!last.update.starts()) {
            b.fate = Fate::bot;
        } else {
            b.fate = Fate::cross;
            for (int l = b.last() + 1; l <= n; ++l) {
                if (action_discards(run, l, x)) {
                    b.discard_index = l;
                    bool at_zero = run.steps[l - 1].before.val.at(x).is_zero();
                    b.fate = at_zero ? Fate::moon : Fate::cross;
                    break;
                }
            }
        }
        dec.blocks.push_back(std::move(b));
    }

    std::sort(dec.blocks.begin(), dec.blocks.end(),
              [](const Block& a, const Block& b) { return a.first() < b.first(); });
    return dec;
}

std::vector<RaceEdge> races(const AutomatonWithTimers& at, const TimedRun& run) {
    require_padded(run);
    BlockDecomposition dec = decompose_blocks(at, run);
    const int n = run.num_actions();

    std::vector<Rat> time(n + 1);
    for (int k = 1; k <= n; ++k) time[k] = run.time_of_action(k);

    std::map<std::pair<int, int>, RaceWitness> edge_map;
    auto add = [&](int from, int to, RaceWitness w) {
        if (from == to)
            throw std::logic_error("race between a block and itself; invalid run?");
        edge_map.emplace(std::make_pair(from, to), w);
    };

    // Zero total delay between two actions of different blocks.
    for (int i = 1; i <= n; ++i) {
        for (int ip = i + 1; ip <= n && time[ip] == time[i]; ++ip) {
            int bi = dec.block_of(i), bip = dec.block_of(ip);
            if (bi != bip)
                add(bi, bip, {RaceWitness::Kind::zero_delay, i, ip});
        }
    }
    // A moon-fated block lost its timer to the discarder at value zero.
    for (size_t b = 0; b < dec.blocks.size(); ++b) {
        const Block& blk = dec.blocks[b];
        if (blk.fate != Fate::moon) continue;
        int discarder = *blk.discard_index;
        int from = dec.block_of(discarder);
        add(from, static_cast<int>(b),
            {RaceWitness::Kind::moon_discard, discarder, blk.last()});
    }

    std::vector<RaceEdge> out;
    for (const auto& [key, w] : edge_map)
        out.push_back({key.first, key.second, w});
    return out;
}

BlockGraph block_graph(const AutomatonWithTimers& at, const TimedRun& run) {
    BlockGraph g;
    g.blocks = decompose_blocks(at, run);
    g.edges = races(at, run);
    return g;
}

std::optional<CanonicalCycle> find_canonical_cycle(const BlockGraph& g,
                                                   const AutomatonWithTimers& at,
                                                   const TimedRun& run) {
    const int n = static_cast<int>(g.blocks.blocks.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges) adj[e.from].push_back(e.to);
    for (auto& v : adj) std::sort(v.begin(), v.end());

    // Shortest directed cycle: BFS back to the start vertex, minimum over all
    // start vertices (ties resolved by the smaller start index).
    std::vector<int> best;
    for (int s = 0; s < n; ++s) {
        std::vector<int> parent(n, -2);
        std::vector<int> queue{s};
        parent[s] = -1;
        int found = -1;
        for (size_t qi = 0; qi < queue.size() && found < 0; ++qi) {
            int v = queue[qi];
            for (int w : adj[v]) {
                if (w == s) { found = v; break; }
                if (parent[w] == -2) {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if (found < 0) continue;
        std::vector<int> cyc;
        for (int v = found; v != -1; v = parent[v]) cyc.push_back(v);
        std::reverse(cyc.begin(), cyc.end()); // s .. found
        if (best.empty() || cyc.size() < best.size()) best = cyc;
    }
    if (best.empty()) return std::nullopt;

    // Rotate so the block with the smallest first action index leads.
    size_t lead = 0;
    for (size_t i = 1; i < best.size(); ++i)
        if (g.blocks.blocks[best[i]].first() < g.blocks.blocks[best[lead]].first())
            lead = i;
    std::rotate(best.begin(), best.begin() + lead, best.end());

    CanonicalCycle cyc;
    cyc.block_indices = best;
    const int k = static_cast<int>(best.size());
    for (int i = 0; i < k; ++i) {
        int from = best[i], to = best[(i + 1) % k];
        bool got = false;
        for (const auto& e : g.edges)
            if (e.from == from && e.to == to) { cyc.edges.push_back(e); got = true; break; }
        if (!got) throw std::logic_error("canonical cycle lost an edge");
    }

    // Validate the three canonical clauses; a failure indicates a bug since a
    // minimal cycle must satisfy them.
    if (k < 2) throw std::logic_error("canonical cycle shorter than 2");
    std::vector<int> sorted_blocks = best;
    std::sort(sorted_blocks.begin(), sorted_blocks.end());
    if (std::adjacent_find(sorted_blocks.begin(), sorted_blocks.end()) !=
        sorted_blocks.end())
        throw std::logic_error("canonical cycle repeats a block");
    std::vector<Rat> time(run.num_actions() + 1);
    for (int a = 1; a <= run.num_actions(); ++a) time[a] = run.time_of_action(a);
    for (const auto& e : cyc.edges) {
        if (e.witness.kind == RaceWitness::Kind::zero_delay) {
            if (time[e.witness.i] != time[e.witness.ip])
                throw std::logic_error("zero-delay witness does not re-validate");
            // Exactly two cycle blocks at this instant.
            for (int b : best) {
                if (b == e.from || b == e.to) continue;
                for (int a : g.blocks.blocks[b].action_indices)
                    if (time[a] == time[e.witness.i])
                        throw std::logic_error("third cycle block in a cycle race");
            }
        } else {
            const Block& victim = g.blocks.blocks[e.to];
            if (victim.fate != Fate::moon || !victim.discard_index ||
                *victim.discard_index != e.witness.i)
                throw std::logic_error("moon witness does not re-validate");
        }
    }
    // Single-action blocks must either be moon-fated or anchor both their
    // cycle races at that one action (zero delay in, discard out).
    for (int i = 0; i < k; ++i) {
        int b = best[i];
        const Block& blk = g.blocks.blocks[b];
        if (blk.action_indices.size() >= 2 || blk.fate == Fate::moon) continue;
        const RaceEdge& in = cyc.edges[(i + k - 1) % k];
        const RaceEdge& out = cyc.edges[i];
        bool anchored = in.witness.kind == RaceWitness::Kind::zero_delay &&
                        in.witness.ip == blk.first() && out.witness.i == blk.first();
        if (!anchored)
            throw std::logic_error("single-action cycle block without moon fate "
                                   "or a shared race anchor");
    }
    (void)at;
    return cyc;
}

ExtendedRun extend_run(const AutomatonWithTimers& at, const TimedRun& run) {
    require_padded(run);
    ExtendedRun ext;
    const int n = run.num_actions();
    for (int k = 1; k <= n; ++k) {
        const RunStep& s = run.steps[k - 1];
        ext.items.push_back({ExtendedRun::Item::Kind::action, s.delay, s.action, "", k});
        for (const auto& x : discarded_timers(at, s.before.state, s.action)) {
            bool at_zero = s.before.val.at(x).is_zero();
            ext.items.push_back({at_zero ? ExtendedRun::Item::Kind::moon
                                         : ExtendedRun::Item::Kind::cross,
                                 Rat(0), Action{}, x, k});
        }
    }
    ext.final_delay = run.final_delay;
    return ext;
}

Rat ExtendedRun::time_of(int p) const {
    if (p < 1 || p > static_cast<int>(items.size()))
        throw UsageError("extended-run position out of range");
    Rat t;
    for (int i = 0; i < p; ++i) t += items[i].delay;
    return t;
}

int ExtendedRun::position_of_action(int k) const {
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].kind == Item::Kind::action && items[i].base_index == k)
            return static_cast<int>(i) + 1;
    throw UsageError("no such action in extended run");
}

int ExtendedRun::position_of_marker(int k, const std::string& x) const {
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].kind != Item::Kind::action && items[i].base_index == k &&
            items[i].marker_timer == x)
            return static_cast<int>(i) + 1;
    throw UsageError("no such marker in extended run");
}

Rat reltime(const ExtendedRun& ext, const std::vector<int>& positions) {
    Rat total;
    for (size_t i = 0; i + 1 < positions.size(); ++i)
        total += ext.time_of(positions[i + 1]) - ext.time_of(positions[i]);
    return total;
}

} // namespace awt
