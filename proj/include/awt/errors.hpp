#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace awt {

/// Misuse of the API: unknown names, calls outside a documented precondition.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Positioned error from one of the text formats.
struct ParseError : std::runtime_error {
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

/// A semantic rule was violated while executing or analyzing a model.
struct SemanticError : std::runtime_error {
    enum class Code {
        delay_too_large,
        timeout_not_ripe,
        undefined_transition,
        not_padded,
        value_exceeds_c,
        pending_discards,
        not_pending,
        no_slack,
        infeasible_move,
        anchor_has_active_timers,
        malformed_word,
        name_clash,
    };

    SemanticError(Code code, const std::string& msg,
                  std::optional<int> step = std::nullopt)
        : std::runtime_error(step ? msg + " (at step " + std::to_string(*step) + ")"
                                  : msg),
          code(code), step_index(step) {}

    Code code;
    std::optional<int> step_index; // 1-based action index where a run failed
};

} // namespace awt
