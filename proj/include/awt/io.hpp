#pragma once

#include <string>

#include "awt/blocks.hpp"
#include "awt/generators.hpp"
#include "awt/reach.hpp"

namespace awt {

/// Line format:
///   timer <name>
///   input <name>
///   state <name> [initial] [active <t1> <t2> ...]
///   trans <q> <action> <q'> (none | start <timer> <int>)
/// where <action> is an input name or to:<timer>. '#' starts a comment.
/// Order-insensitive; duplicate definitions are errors. The parsed model is
/// validated, and a failed validation is reported as a ParseError.
AutomatonWithTimers parse_at(const std::string& text);
std::string print_at(const AutomatonWithTimers& at);

/// Syntax and name resolution only; the caller decides when to validate.
AutomatonWithTimers parse_at_unvalidated(const std::string& text);

/// "d1 a1 d2 a2 ... dn an d_{n+1}" with rationals as p/q, integers or finite
/// decimals, and actions as input names or to:<timer>.
RunWord parse_run_word(const std::string& text);
std::string print_run_word(const RunWord& word);

/// Line format:
///   alphabet a1 a2 ...
///   state q [initial] [final]
///   ltrans q read a write b move L|R q'
LBTM parse_lbtm(const std::string& text);
std::string print_lbtm(const LBTM& m);

std::string emit_dot(const BlockGraph& g);
std::string emit_dot(
    const std::vector<std::tuple<RegionState, RegionLabel, RegionState>>& region_edges);

std::string print_configuration(const Configuration& c);
std::string print_run(const TimedRun& run);
std::string print_blocks(const BlockGraph& g);

} // namespace awt
