#pragma once

#include <optional>
#include <string>
#include <vector>

#include "awt/model.hpp"
#include "awt/semantics.hpp"

namespace awt {

enum class Fate { bot, moon, cross };

std::string fate_str(Fate f);

/// Maximal trigger chain of a padded run: an input that starts a timer plus
/// the timeouts/restarts it induces. A no-update input forms a chain of one
/// action with no timer.
struct Block {
    std::vector<int> action_indices;   // 1-based, strictly increasing
    std::optional<std::string> timer;  // timer of the chain, if any
    Fate fate;
    std::optional<int> discard_index;  // action that discarded the timer

    int first() const { return action_indices.front(); }
    int last() const { return action_indices.back(); }
    bool contains(int k) const;
};

struct BlockDecomposition {
    std::vector<Block> blocks; // ordered by first action index
    /// Index of the block owning action k, or -1.
    int block_of(int k) const;
};

struct RaceWitness {
    enum class Kind { zero_delay, moon_discard } kind;
    int i;  // zero_delay: earlier action; moon_discard: discarding action
    int ip; // zero_delay: later action; moon_discard: last restart of the victim
};

/// Oriented race edge: from precedes to (written from < to in the text).
struct RaceEdge {
    int from; // index into BlockDecomposition::blocks
    int to;
    RaceWitness witness;
};

struct BlockGraph {
    BlockDecomposition blocks;
    std::vector<RaceEdge> edges;
    bool has_edge(int from, int to) const;
    std::vector<int> predecessors(int b) const;
    std::vector<int> successors(int b) const;
    bool cyclic() const;
};

/// A cycle whose races have the canonical shape: each block participates in
/// exactly two of its races, every race joins exactly two of its blocks, and
/// single-action blocks carry a moon fate.
struct CanonicalCycle {
    std::vector<int> block_indices;   // B_0 .. B_{k-1}
    std::vector<RaceEdge> edges;      // edge i: B_i -> B_{i+1 mod k}
};

/// Run with discard markers spliced in as zero-delay pseudo-actions right
/// after each discarding transition, in ascending timer-name order.
struct ExtendedRun {
    struct Item {
        enum class Kind { action, moon, cross } kind;
        Rat delay;               // delay before this item
        Action action;           // valid for kind == action
        std::string marker_timer; // valid for markers
        int base_index;          // 1-based index in the base run; markers share
                                 // the index of the discarding action
    };
    std::vector<Item> items;
    Rat final_delay;

    /// Absolute time of item p (1-based).
    Rat time_of(int p) const;
    /// Position of base action k among the items.
    int position_of_action(int k) const;
    /// Position of the marker for timer x emitted by the discard at action k.
    int position_of_marker(int k, const std::string& x) const;
};

/// True iff action k (re)starts a timer that k' times out, with nothing in
/// between timing it out or discarding it.
bool triggers(const AutomatonWithTimers& at, const TimedRun& run, int k, int kp);

BlockDecomposition decompose_blocks(const AutomatonWithTimers& at, const TimedRun& run);

std::vector<RaceEdge> races(const AutomatonWithTimers& at, const TimedRun& run);

BlockGraph block_graph(const AutomatonWithTimers& at, const TimedRun& run);

/// none iff the graph is acyclic; otherwise a shortest cycle validated
/// against the canonical-cycle clauses (a failed validation is a bug and
/// throws std::logic_error).
std::optional<CanonicalCycle> find_canonical_cycle(const BlockGraph& g,
                                                   const AutomatonWithTimers& at,
                                                   const TimedRun& run);

ExtendedRun extend_run(const AutomatonWithTimers& at, const TimedRun& run);

/// Signed relative elapsed time summed over consecutive position pairs;
/// negative legs run right-to-left.
Rat reltime(const ExtendedRun& ext, const std::vector<int>& positions);

} // namespace awt
