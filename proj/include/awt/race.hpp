#pragma once

#include <functional>

#include "awt/reach.hpp"
#include "awt/region.hpp"
#include "awt/wiggle.hpp"

namespace awt {

/// Label sequence of a path in the modified region automaton.
struct RegionWord {
    std::vector<RegionLabel> labels;
    std::string str() const;
};

/// Blocks decoded from a region word: per-timer trigger chains plus
/// no-update input singletons; kill symbols end the chain whose timer the
/// preceding action discarded at value zero.
struct WordBlocks {
    struct WBlock {
        std::optional<std::string> timer;
        std::vector<int> positions; // 1-based label positions, incl. the kill
        bool killed = false;
        int kill_pos = -1;
        int discarder_pos = -1; // action position that triggered the kill
    };
    std::vector<WBlock> blocks;
    std::vector<int> owner;     // per position: block id, -1 for tau
    std::vector<int> window;    // per position: tau-free segment id, -1 for tau
};

/// Throws SemanticError(malformed_word) on structurally impossible words.
WordBlocks decode_word(const RegionWord& word);

/// True iff every state keeps at most one active timer; such a model is
/// race-avoiding outright.
bool static_single_timer_check(const AutomatonWithTimers& at);

/// Word-level block graph: zero-delay edges between action positions of one
/// tau-free window, kill edges from the discarder's block to the killed one.
/// Returns whether that graph has a cycle.
bool block_graph_cyclic_word(const RegionWord& word);

/// Direct matcher for the unwigglability pattern: the word starts and ends
/// with tau and admits alternating position sets P1 = {p_1..p_m},
/// P2 = {q_1..q_m} with p_1 < q_1 < ... < p_m < q_m such that each pair
/// (p_k, q_k) witnesses a race (both actions in one tau-free window, or a
/// discarding action paired with the kill it caused) and every q_k shares a
/// decoded block with some action p_l.
bool phi_matches(const RegionWord& word);

enum class RaceVerdictKind {
    race_avoiding_static,    // at most one active timer anywhere
    race_avoiding_exhausted, // the word space was finite and fully explored
    not_race_avoiding,       // witness found
    unknown_beyond_bound,    // no witness up to the bound; longer words exist
};

struct RaceAvoidanceVerdict {
    RaceVerdictKind kind;
    int max_actions;
    std::optional<RegionWord> word;
    std::optional<TimedRun> witness;
    std::optional<UnwigglableCertificate> certificate;
};

struct RaceSearchOptions {
    bool use_static_check = true;
};

/// Bounded-complete decision procedure: enumerates padded words of the
/// modified region automaton with at most max_actions non-tau labels,
/// shortest first, and reports the first whose block graph is cyclic,
/// lifted to a concrete run with its certificate.
RaceAvoidanceVerdict search_unwigglable(const AutomatonWithTimers& at,
                                        int max_actions,
                                        RaceSearchOptions opts = {});

/// Enumerates padded words (with their region paths) up to the label bound,
/// in the same deterministic order the search uses. The callback returns
/// false to stop early.
void enumerate_padded_words(
    const AutomatonWithTimers& at, int max_labels,
    const std::function<bool(const RegionWord&,
                             const std::vector<std::pair<RegionLabel,
                                                         ModifiedRegionState>>&)>& f);

/// Concrete run following a padded word's recorded region path.
TimedRun lift_word_path(
    const AutomatonWithTimers& at,
    const std::vector<std::pair<RegionLabel, ModifiedRegionState>>& path);

} // namespace awt
