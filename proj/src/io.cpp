#include "awt/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace awt {

namespace {

struct Token {
    std::string text;
    int line;
    int col;
};

/// Splits into whitespace-separated tokens, one vector per line; '#' starts
/// a comment running to the end of the line.
std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::vector<Token> toks;
        size_t i = 0;
        while (i < raw.size()) {
            if (raw[i] == '#') break;
            if (isspace(static_cast<unsigned char>(raw[i]))) { ++i; continue; }
            size_t start = i;
            while (i < raw.size() && !isspace(static_cast<unsigned char>(raw[i])) &&
                   raw[i] != '#')
                ++i;
            toks.push_back({raw.substr(start, i - start), lineno,
                            static_cast<int>(start) + 1});
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

Action parse_action_token(const Token& t) {
    if (t.text.rfind("to:", 0) == 0) {
        std::string x = t.text.substr(3);
        if (!valid_identifier(x)) throw ParseError(t.line, t.col, "bad timer in " + t.text);
        return Action::to(x);
    }
    if (!valid_identifier(t.text))
        throw ParseError(t.line, t.col, "bad action: " + t.text);
    return Action::in(t.text);
}

long long parse_int_token(const Token& t) {
    try {
        size_t pos = 0;
        long long v = std::stoll(t.text, &pos);
        if (pos != t.text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(t.line, t.col, "expected an integer, got " + t.text);
    }
}

Rat parse_rat_token(const Token& t) {
    try {
        Rat r = Rat::parse(t.text);
        if (r.is_negative()) throw std::invalid_argument("");
        return r;
    } catch (...) {
        throw ParseError(t.line, t.col, "expected a nonnegative rational, got " + t.text);
    }
}

} // namespace

AutomatonWithTimers parse_at_unvalidated(const std::string& text) {
    AutomatonWithTimers at;
    auto lines = tokenize(text);
    bool have_initial = false;

    // Declarations first so transitions may appear in any order.
    for (const auto& toks : lines) {
        const Token& head = toks[0];
        auto need = [&](size_t n) {
            if (toks.size() < n)
                throw ParseError(head.line, head.col, "truncated " + head.text + " line");
        };
        if (head.text == "timer") {
            need(2);
            if (at.has_timer(toks[1].text))
                throw ParseError(toks[1].line, toks[1].col, "duplicate timer");
            at.timers.push_back(toks[1].text);
        } else if (head.text == "input") {
            need(2);
            if (at.has_input(toks[1].text))
                throw ParseError(toks[1].line, toks[1].col, "duplicate input");
            at.inputs.push_back(toks[1].text);
        } else if (head.text == "state") {
            need(2);
            if (at.has_state(toks[1].text))
                throw ParseError(toks[1].line, toks[1].col, "duplicate state");
            at.states.push_back(toks[1].text);
            std::set<std::string> acc;
            size_t i = 2;
            if (i < toks.size() && toks[i].text == "initial") {
                if (have_initial)
                    throw ParseError(toks[i].line, toks[i].col, "second initial state");
                have_initial = true;
                at.initial = toks[1].text;
                ++i;
            }
            if (i < toks.size()) {
                if (toks[i].text != "active")
                    throw ParseError(toks[i].line, toks[i].col,
                                     "expected 'active', got " + toks[i].text);
                for (++i; i < toks.size(); ++i)
                    if (!acc.insert(toks[i].text).second)
                        throw ParseError(toks[i].line, toks[i].col, "duplicate active timer");
            }
            at.active[toks[1].text] = acc;
        } else if (head.text != "trans") {
            throw ParseError(head.line, head.col, "unknown directive: " + head.text);
        }
    }
    if (!have_initial) throw ParseError(1, 1, "no initial state declared");

    for (const auto& toks : lines) {
        if (toks[0].text != "trans") continue;
        if (toks.size() < 5)
            throw ParseError(toks[0].line, toks[0].col, "truncated trans line");
        Action a = parse_action_token(toks[2]);
        Update u;
        if (toks[4].text == "none") {
            if (toks.size() != 5)
                throw ParseError(toks[4].line, toks[4].col, "trailing tokens after none");
        } else if (toks[4].text == "start") {
            if (toks.size() != 7)
                throw ParseError(toks[4].line, toks[4].col, "start needs a timer and a value");
            long long c = parse_int_token(toks[6]);
            if (c < 1)
                throw ParseError(toks[6].line, toks[6].col, "start value must be >= 1");
            u = Update::start_timer(toks[5].text, c);
        } else {
            throw ParseError(toks[4].line, toks[4].col,
                             "expected none or start, got " + toks[4].text);
        }
        if (at.delta.count({toks[1].text, a}))
            throw ParseError(toks[0].line, toks[0].col,
                             "duplicate transition " + toks[1].text + "/" + a.str());
        at.delta[{toks[1].text, a}] = {toks[3].text, u};
    }

    try {
        check_structure(at);
    } catch (const UsageError& e) {
        throw ParseError(1, 1, e.what());
    }
    return at;
}

AutomatonWithTimers parse_at(const std::string& text) {
    AutomatonWithTimers at = parse_at_unvalidated(text);
    ValidationReport report = validate_automaton(at);
    if (!report.ok) {
        std::string msg = "model violates the timer rules:";
        for (const auto& v : report.violations)
            msg += "\n  [" + v.rule + "] " + v.locus + ": " + v.message;
        throw ParseError(1, 1, msg);
    }
    return at;
}

std::string print_at(const AutomatonWithTimers& at) {
    std::ostringstream out;
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    for (const auto& x : sorted(at.timers)) out << "timer " << x << "\n";
    for (const auto& i : sorted(at.inputs)) out << "input " << i << "\n";
    std::vector<std::string> states = sorted(at.states);
    std::stable_partition(states.begin(), states.end(),
                          [&](const std::string& q) { return q == at.initial; });
    for (const auto& q : states) {
        out << "state " << q;
        if (q == at.initial) out << " initial";
        if (!at.active_of(q).empty()) {
            out << " active";
            for (const auto& x : at.active_of(q)) out << " " << x;
        }
        out << "\n";
    }
    for (const auto& [key, tr] : at.delta)
        out << "trans " << key.first << " " << key.second.str() << " " << tr.target
            << " " << tr.update.str() << "\n";
    return out.str();
}

RunWord parse_run_word(const std::string& text) {
    auto lines = tokenize(text);
    std::vector<Token> toks;
    for (auto& l : lines) toks.insert(toks.end(), l.begin(), l.end());
    if (toks.empty()) throw ParseError(1, 1, "empty run word");
    if (toks.size() % 2 == 0)
        throw ParseError(toks.back().line, toks.back().col,
                         "run word must alternate delay action ... delay");
    RunWord w;
    for (size_t i = 0; i + 1 < toks.size(); i += 2)
        w.steps.push_back({parse_rat_token(toks[i]), parse_action_token(toks[i + 1])});
    w.final_delay = parse_rat_token(toks.back());
    return w;
}

std::string print_run_word(const RunWord& word) {
    std::string out;
    for (const auto& s : word.steps)
        out += s.delay.str() + " " + s.action.str() + " ";
    out += word.final_delay.str();
    return out;
}

LBTM parse_lbtm(const std::string& text) {
    LBTM m;
    bool have_initial = false, have_final = false, have_alphabet = false;
    for (const auto& toks : tokenize(text)) {
        const Token& head = toks[0];
        if (head.text == "alphabet") {
            if (have_alphabet) throw ParseError(head.line, head.col, "second alphabet line");
            have_alphabet = true;
            for (size_t i = 1; i < toks.size(); ++i) {
                if (std::find(m.alphabet.begin(), m.alphabet.end(), toks[i].text) !=
                    m.alphabet.end())
                    throw ParseError(toks[i].line, toks[i].col, "duplicate symbol");
                m.alphabet.push_back(toks[i].text);
            }
        } else if (head.text == "state") {
            if (toks.size() < 2) throw ParseError(head.line, head.col, "truncated state line");
            m.states.push_back(toks[1].text);
            for (size_t i = 2; i < toks.size(); ++i) {
                if (toks[i].text == "initial") {
                    if (have_initial)
                        throw ParseError(toks[i].line, toks[i].col, "second initial state");
                    have_initial = true;
                    m.initial = toks[1].text;
                } else if (toks[i].text == "final") {
                    if (have_final)
                        throw ParseError(toks[i].line, toks[i].col, "second final state");
                    have_final = true;
                    m.final_state = toks[1].text;
                } else {
                    throw ParseError(toks[i].line, toks[i].col,
                                     "expected initial or final");
                }
            }
        } else if (head.text == "ltrans") {
            // ltrans q read a write b move L|R q'
            if (toks.size() != 9 || toks[2].text != "read" || toks[4].text != "write" ||
                toks[6].text != "move")
                throw ParseError(head.line, head.col,
                                 "expected: ltrans q read a write b move L|R q'");
            if (toks[7].text != "L" && toks[7].text != "R")
                throw ParseError(toks[7].line, toks[7].col, "move must be L or R");
            m.rules.push_back({toks[1].text, toks[3].text, toks[5].text,
                               toks[7].text[0], toks[8].text});
        } else {
            throw ParseError(head.line, head.col, "unknown directive: " + head.text);
        }
    }
    if (!have_alphabet) throw ParseError(1, 1, "no alphabet line");
    if (!have_initial) throw ParseError(1, 1, "no initial state");
    if (!have_final) throw ParseError(1, 1, "no final state");
    return m;
}

std::string print_lbtm(const LBTM& m) {
    std::ostringstream out;
    out << "alphabet";
    for (const auto& a : m.alphabet) out << " " << a;
    out << "\n";
    for (const auto& q : m.states) {
        out << "state " << q;
        if (q == m.initial) out << " initial";
        if (q == m.final_state) out << " final";
        out << "\n";
    }
    for (const auto& r : m.rules)
        out << "ltrans " << r.from << " read " << r.read << " write " << r.write
            << " move " << r.move << " " << r.to << "\n";
    return out.str();
}

std::string emit_dot(const BlockGraph& g) {
    std::ostringstream out;
    out << "digraph blocks {\n";
    for (size_t b = 0; b < g.blocks.blocks.size(); ++b) {
        const Block& blk = g.blocks.blocks[b];
        out << "  b" << b + 1 << " [label=\"B" << b + 1 << ":"
            << (blk.timer ? *blk.timer : "-") << ":" << fate_str(blk.fate) << "\"];\n";
    }
    for (const auto& e : g.edges)
        out << "  b" << e.from + 1 << " -> b" << e.to + 1 << " [label=\""
            << (e.witness.kind == RaceWitness::Kind::zero_delay ? "zero_delay"
                                                                : "moon_discard")
            << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string emit_dot(
    const std::vector<std::tuple<RegionState, RegionLabel, RegionState>>& region_edges) {
    std::ostringstream out;
    out << "digraph regions {\n";
    std::map<std::string, int> ids;
    auto id_of = [&](const RegionState& rs) {
        auto [it, fresh] = ids.emplace(rs.key(), ids.size() + 1);
        if (fresh)
            out << "  n" << it->second << " [label=\"" << rs.state << " | "
                << rs.region.str() << "\"];\n";
        return it->second;
    };
    std::ostringstream edges;
    for (const auto& [from, label, to] : region_edges) {
        int a = id_of(from), b = id_of(to);
        edges << "  n" << a << " -> n" << b << " [label=\"" << label.str() << "\"];\n";
    }
    out << edges.str() << "}\n";
    return out.str();
}

std::string print_configuration(const Configuration& c) {
    std::string out = "(" + c.state;
    for (const auto& [x, v] : c.val) out += " " + x + "=" + v.str();
    return out + ")";
}

std::string print_run(const TimedRun& run) {
    std::ostringstream out;
    out << print_configuration(run.initial) << "\n";
    for (const auto& s : run.steps) {
        out << "  delay " << s.delay.str() << " -> " << print_configuration(s.before)
            << "\n";
        out << "  " << s.action.str() << " / " << s.update.str() << " -> "
            << print_configuration(s.after) << "\n";
    }
    out << "  delay " << run.final_delay.str() << " -> "
        << print_configuration(run.final_config) << "\n";
    return out.str();
}

std::string print_blocks(const BlockGraph& g) {
    std::ostringstream out;
    for (size_t b = 0; b < g.blocks.blocks.size(); ++b) {
        const Block& blk = g.blocks.blocks[b];
        out << "B" << b + 1 << ": actions";
        for (int k : blk.action_indices) out << " " << k;
        out << " timer " << (blk.timer ? *blk.timer : "-") << " fate "
            << fate_str(blk.fate);
        if (blk.discard_index) out << " discarded_at " << *blk.discard_index;
        out << "\n";
    }
    out << "races:\n";
    for (const auto& e : g.edges) {
        out << "  B" << e.from + 1 << " -> B" << e.to + 1 << " ";
        if (e.witness.kind == RaceWitness::Kind::zero_delay)
            out << "zero_delay(" << e.witness.i << "," << e.witness.ip << ")";
        else
            out << "moon_discard(" << e.witness.i << "," << e.witness.ip << ")";
        out << "\n";
    }
    return out.str();
}

} // namespace awt
