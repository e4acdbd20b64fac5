#pragma once

#include <variant>

#include "awt/blocks.hpp"

namespace awt {

/// Shift one block's actions uniformly by epsilon (< 0 left, > 0 right).
struct WiggleMove {
    int block; // index into the run's block decomposition
    Rat epsilon;
};

enum class Direction { left, right };

/// Evidence that a run cannot be wiggled: a canonical cycle plus the cyclic
/// action sequence over the extended run whose relative elapsed time is zero.
struct UnwigglableCertificate {
    CanonicalCycle cycle;
    std::vector<int> reltime_positions; // positions in extend_run(run)
    std::vector<Rat> reltime_terms;     // leg-by-leg relative elapsed times
    Rat reltime_total;                  // always zero
};

/// Applies the delay rewrite for the move, re-simulates, and verifies the
/// result is a padded run with the same untimed trace. Throws
/// SemanticError(infeasible_move) otherwise.
TimedRun apply_wiggle(const AutomatonWithTimers& at, const TimedRun& run,
                      const WiggleMove& move);

/// A block can be wiggled unless it has both a predecessor and a successor.
bool can_wiggle_block(const BlockGraph& g, int block);

/// Largest safe shift, halved: minimum over the boundary delays that shrink
/// under the move, the discard values that must stay positive, and the final
/// value of the block's timer when it survives to the end of the run.
/// Throws SemanticError(no_slack) when the minimum is zero.
Rat choose_epsilon(const AutomatonWithTimers& at, const TimedRun& run,
                   const BlockGraph& g, int block, Direction dir);

/// Removes every race by repeatedly moving the topologically greatest racing
/// block to the right, or returns a certificate when the block graph is
/// cyclic.
std::variant<TimedRun, UnwigglableCertificate>
wiggle_run(const AutomatonWithTimers& at, const TimedRun& run);

/// Certificate for a run whose block graph is already known to be cyclic.
UnwigglableCertificate make_certificate(const AutomatonWithTimers& at,
                                        const TimedRun& run,
                                        const BlockGraph& g);

} // namespace awt
