#include "awt/wiggle.hpp"

#include <algorithm>
#include <stdexcept>

namespace awt {

namespace {

/// Delay indices whose value the move changes. `grow` collects the delays
/// d + eps for a right move (d - eps for left), `shrink` the opposite set.
struct AffectedDelays {
    std::vector<int> before; // d'_{k} = d_k + eps (incl. d_1 when 1 in block)
    std::vector<int> after;  // d'_{k} = d_k - eps (incl. d_{n+1} when n in block)
};

AffectedDelays affected_delays(const TimedRun& run, const Block& b) {
    AffectedDelays out;
    const int n = run.num_actions();
    for (int k : b.action_indices) {
        if (k == 1)
            out.before.push_back(1);
        else if (!b.contains(k - 1))
            out.before.push_back(k);
        if (k == n)
            out.after.push_back(n + 1);
        else if (!b.contains(k + 1))
            out.after.push_back(k + 1);
    }
    return out;
}

} // namespace

TimedRun apply_wiggle(const AutomatonWithTimers& at, const TimedRun& run,
                      const WiggleMove& move) {
    if (!is_padded(run))
        throw SemanticError(SemanticError::Code::not_padded, "wiggle needs a padded run");
    BlockDecomposition dec = decompose_blocks(at, run);
    if (move.block < 0 || move.block >= static_cast<int>(dec.blocks.size()))
        throw UsageError("wiggle move names a block outside the decomposition");
    if (move.epsilon.is_zero())
        throw UsageError("wiggle move with zero epsilon");
    const Block& b = dec.blocks[move.block];
    const int n = run.num_actions();

    RunWord word = word_of_run(run);
    auto delay_at = [&](int k) -> Rat& {
        return k <= n ? word.steps[k - 1].delay : word.final_delay;
    };
    AffectedDelays aff = affected_delays(run, b);
    for (int k : aff.before) delay_at(k) += move.epsilon;
    for (int k : aff.after) delay_at(k) -= move.epsilon;

    for (int k = 1; k <= n + 1; ++k)
        if (delay_at(k).is_negative())
            throw SemanticError(SemanticError::Code::infeasible_move,
                                "delay d_" + std::to_string(k) + " would become negative");
    if (word.steps.front().delay.is_zero() || word.final_delay.is_zero())
        throw SemanticError(SemanticError::Code::infeasible_move,
                            "first or last delay would become zero");

    TimedRun moved;
    try {
        moved = run_from_word(at, word);
    } catch (const SemanticError& e) {
        throw SemanticError(SemanticError::Code::infeasible_move,
                            std::string("re-simulation failed: ") + e.what());
    }
    if (!(untimed_trace(moved) == untimed_trace(run)))
        throw SemanticError(SemanticError::Code::infeasible_move,
                            "move changes the untimed trace");
    if (!is_padded(moved))
        throw SemanticError(SemanticError::Code::infeasible_move,
                            "move leaves a zero-valued timer at the end of the run");
    return moved;
}

bool can_wiggle_block(const BlockGraph& g, int block) {
    return g.predecessors(block).empty() || g.successors(block).empty();
}

Rat choose_epsilon(const AutomatonWithTimers& at, const TimedRun& run,
                   const BlockGraph& g, int block, Direction dir) {
    const Block& b = g.blocks.blocks.at(block);
    (void)g; // a blocking race surfaces as zero slack below

    std::vector<Rat> slack;
    AffectedDelays aff = affected_delays(run, b);
    const auto& shrinking = dir == Direction::right ? aff.after : aff.before;
    for (int k : shrinking) slack.push_back(run.delay(k));

    if (dir == Direction::right) {
        // Values of timers this block discards must stay positive.
        for (int k : b.action_indices) {
            const RunStep& s = run.steps[k - 1];
            for (const auto& x : discarded_timers(at, s.before.state, s.action))
                slack.push_back(s.before.val.at(x));
        }
    } else {
        // The block's own timer must keep its cross fate and outlive the run.
        if (b.timer) {
            if (b.discard_index) {
                slack.push_back(run.steps[*b.discard_index - 1].before.val.at(*b.timer));
            } else if (run.steps[b.last() - 1].update.starts()) {
                auto it = run.final_config.val.find(*b.timer);
                if (it != run.final_config.val.end()) slack.push_back(it->second);
            }
        }
    }

    Rat s = slack.empty() ? Rat(2) : *std::min_element(slack.begin(), slack.end());
    if (s.is_zero())
        throw SemanticError(SemanticError::Code::no_slack,
                            "no slack to move the block " +
                                std::string(dir == Direction::left ? "left" : "right"));
    Rat eps = s / Rat(2);
    return dir == Direction::left ? -eps : eps;
}

UnwigglableCertificate make_certificate(const AutomatonWithTimers& at,
                                        const TimedRun& run, const BlockGraph& g) {
    auto cyc = find_canonical_cycle(g, at, run);
    if (!cyc) throw UsageError("certificate requested for an acyclic block graph");
    ExtendedRun ext = extend_run(at, run);

    // Walk the cycle: leave each block at its outgoing race action, enter the
    // next at the racing partner; moon races enter at the victim's marker.
    const int k = static_cast<int>(cyc->block_indices.size());
    std::vector<int> out_pos(k), in_pos(k);
    for (int i = 0; i < k; ++i) {
        const RaceEdge& e = cyc->edges[i];
        if (e.witness.kind == RaceWitness::Kind::zero_delay) {
            out_pos[i] = ext.position_of_action(e.witness.i);
            in_pos[(i + 1) % k] = ext.position_of_action(e.witness.ip);
        } else {
            const Block& victim = g.blocks.blocks[e.to];
            out_pos[i] = ext.position_of_action(e.witness.i);
            in_pos[(i + 1) % k] = ext.position_of_marker(*victim.discard_index,
                                                         *victim.timer);
        }
    }
    UnwigglableCertificate cert;
    cert.cycle = *cyc;
    cert.reltime_positions.push_back(out_pos[0]);
    for (int i = 0; i < k; ++i) {
        cert.reltime_positions.push_back(in_pos[(i + 1) % k]);
        cert.reltime_positions.push_back(out_pos[(i + 1) % k]);
    }
    for (size_t i = 0; i + 1 < cert.reltime_positions.size(); ++i)
        cert.reltime_terms.push_back(ext.time_of(cert.reltime_positions[i + 1]) -
                                     ext.time_of(cert.reltime_positions[i]));
    cert.reltime_total = reltime(ext, cert.reltime_positions);
    if (!cert.reltime_total.is_zero())
        throw std::logic_error("certificate reltime is not zero");
    return cert;
}

std::variant<TimedRun, UnwigglableCertificate>
wiggle_run(const AutomatonWithTimers& at, const TimedRun& run) {
    if (!is_padded(run))
        throw SemanticError(SemanticError::Code::not_padded, "wiggle needs a padded run");
    TimedRun cur = run;
    while (true) {
        BlockGraph g = block_graph(at, cur);
        if (g.edges.empty()) return cur;
        if (g.cyclic()) return make_certificate(at, cur, g);
        // Topologically greatest racing block: races but has no successor.
        int pick = -1;
        for (size_t b = 0; b < g.blocks.blocks.size(); ++b) {
            bool racing = !g.predecessors(static_cast<int>(b)).empty() ||
                          !g.successors(static_cast<int>(b)).empty();
            if (racing && g.successors(static_cast<int>(b)).empty()) {
                pick = static_cast<int>(b);
                break;
            }
        }
        if (pick < 0) throw std::logic_error("acyclic racing graph without a sink");
        Rat eps = choose_epsilon(at, cur, g, pick, Direction::right);
        size_t edges_before = g.edges.size();
        cur = apply_wiggle(at, cur, {pick, eps});
        if (races(at, cur).size() >= edges_before)
            throw std::logic_error("wiggle iteration failed to remove an edge");
    }
}

} // namespace awt
