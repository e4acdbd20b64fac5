#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "awt/io.hpp"
#include "awt/race.hpp"

namespace {

// Exit codes: 0 ok / positive verdict, 1 negative verdict, 2 usage or parse
// error, 3 semantic error.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kSemantic = 3;

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw awt::UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Word arguments may be a file path or inline text.
std::string slurp_word(const std::string& arg) {
    std::ifstream in(arg, std::ios::binary);
    if (!in) return arg;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

awt::AutomatonWithTimers load_at(const std::string& path) {
    return awt::parse_at(slurp_file(path));
}

int run(int argc, char** argv) {
    CLI::App app{"Automata with timers: simulation, race analysis, reachability"};
    app.require_subcommand(1);
    app.fallthrough();
    int jobs = 1;
    app.add_option("--jobs", jobs, "parallel workers for reachability search");

    std::string at_path, word_arg, target, anchor, machine_path, out_path;
    bool dot = false;
    int max_actions = 12;
    unsigned long long seed = 1;
    int g_states = 3, g_timers = 2, g_inputs = 1, g_maxc = 2;

    auto* validate = app.add_subcommand("validate", "check a model against the timer rules");
    validate->add_option("at", at_path)->required();

    auto* simulate = app.add_subcommand("simulate", "run a timed word");
    simulate->add_option("at", at_path)->required();
    simulate->add_option("word", word_arg)->required();

    auto* blocks = app.add_subcommand("blocks", "block decomposition of a padded run");
    blocks->add_option("at", at_path)->required();
    blocks->add_option("word", word_arg)->required();

    auto* graph = app.add_subcommand("graph", "block graph of a padded run");
    graph->add_option("at", at_path)->required();
    graph->add_option("word", word_arg)->required();
    graph->add_flag("--dot", dot, "emit DOT");

    auto* wiggle = app.add_subcommand("wiggle", "remove races or certify impossibility");
    wiggle->add_option("at", at_path)->required();
    wiggle->add_option("word", word_arg)->required();

    auto* reach = app.add_subcommand("reach", "region-automaton reachability");
    reach->add_option("at", at_path)->required();
    reach->add_option("--target", target)->required();

    auto* stats = app.add_subcommand("region-stats", "reachable region statistics");
    stats->add_option("at", at_path)->required();
    stats->add_flag("--dot", dot, "emit the explored region graph as DOT");

    auto* race = app.add_subcommand("race-avoiding", "bounded race-avoidance decision");
    race->add_option("at", at_path)->required();
    race->add_option("--max-actions", max_actions);

    auto* gen = app.add_subcommand("gen", "generate models");
    auto* gen_lbtm = gen->add_subcommand("lbtm", "reduction from a linear-bounded machine");
    gen_lbtm->add_option("machine", machine_path)->required();
    gen_lbtm->add_option("word", word_arg)->required();
    auto* gen_widget = gen->add_subcommand("widget", "append the unwigglable widget");
    gen_widget->add_option("at", at_path)->required();
    gen_widget->add_option("anchor", anchor)->required();
    auto* gen_random = gen->add_subcommand("random", "seeded random valid model");
    gen_random->add_option("--seed", seed);
    gen_random->add_option("--states", g_states);
    gen_random->add_option("--timers", g_timers);
    gen_random->add_option("--inputs", g_inputs);
    gen_random->add_option("--max-const", g_maxc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (validate->parsed()) {
        auto at = awt::parse_at_unvalidated(slurp_file(at_path));
        auto report = awt::validate_automaton(at);
        if (!report.ok) {
            for (const auto& v : report.violations)
                std::cout << "[" << v.rule << "] " << v.locus << ": " << v.message
                          << "\n";
            std::cout << "invalid: " << report.violations.size() << " violations\n";
            return kNegative;
        }
        std::cout << "ok: " << at.states.size() << " states, " << at.timers.size()
                  << " timers, " << at.inputs.size() << " inputs, max constant "
                  << at.max_constant() << "\n";
        return kOk;
    }
    if (simulate->parsed()) {
        auto at = load_at(at_path);
        auto run = awt::run_from_word(at, awt::parse_run_word(slurp_word(word_arg)));
        std::cout << awt::print_run(run);
        std::cout << "trace: " << awt::untimed_trace(run).str() << "\n";
        std::cout << "padded: " << (awt::is_padded(run) ? "yes" : "no") << "\n";
        return kOk;
    }
    if (blocks->parsed() || graph->parsed()) {
        auto at = load_at(at_path);
        auto run = awt::run_from_word(at, awt::parse_run_word(slurp_word(word_arg)));
        auto g = awt::block_graph(at, run);
        if (graph->parsed() && dot)
            std::cout << awt::emit_dot(g);
        else
            std::cout << awt::print_blocks(g);
        if (graph->parsed())
            std::cout << "cyclic: " << (g.cyclic() ? "yes" : "no") << "\n";
        return kOk;
    }
    if (wiggle->parsed()) {
        auto at = load_at(at_path);
        auto run = awt::run_from_word(at, awt::parse_run_word(slurp_word(word_arg)));
        auto result = awt::wiggle_run(at, run);
        if (std::holds_alternative<awt::TimedRun>(result)) {
            const auto& fixed = std::get<awt::TimedRun>(result);
            std::cout << "wiggled word: " << awt::print_run_word(awt::word_of_run(fixed))
                      << "\n";
            std::cout << awt::print_run(fixed);
            return kOk;
        }
        const auto& cert = std::get<awt::UnwigglableCertificate>(result);
        std::cout << "unwigglable; cycle:";
        for (int b : cert.cycle.block_indices) std::cout << " B" << b + 1;
        std::cout << "\nreltime positions:";
        for (int p : cert.reltime_positions) std::cout << " " << p;
        std::cout << "\nreltime terms:";
        for (const auto& t : cert.reltime_terms) std::cout << " " << t.str();
        std::cout << "\nreltime total: " << cert.reltime_total.str() << "\n";
        return kNegative;
    }
    if (reach->parsed()) {
        auto at = load_at(at_path);
        awt::ReachOptions opts;
        opts.jobs = jobs;
        auto res = awt::reachable(at, target, opts);
        std::cout << "explored " << res.explored << " region states\n";
        if (!res.reachable) {
            std::cout << "unreachable: " << target << "\n";
            return kNegative;
        }
        std::cout << "reachable: " << target << "\n";
        if (res.witness_run) {
            std::cout << "witness word: "
                      << awt::print_run_word(awt::word_of_run(*res.witness_run)) << "\n";
            std::cout << "witness trace: " << awt::untimed_trace(*res.witness_run).str()
                      << "\n";
        }
        return kOk;
    }
    if (stats->parsed()) {
        auto at = load_at(at_path);
        std::cout << "region bound: " << awt::region_count_bound(at) << "\n";
        if (dot) {
            std::cout << awt::emit_dot(awt::explore_region_graph(at));
        } else {
            std::cout << "reachable regions: " << awt::count_reachable_regions(at, jobs)
                      << "\n";
        }
        return kOk;
    }
    if (race->parsed()) {
        auto at = load_at(at_path);
        auto verdict = awt::search_unwigglable(at, max_actions);
        switch (verdict.kind) {
            case awt::RaceVerdictKind::race_avoiding_static:
                std::cout << "race-avoiding (single active timer everywhere)\n";
                return kOk;
            case awt::RaceVerdictKind::race_avoiding_exhausted:
                std::cout << "race-avoiding (word space exhausted at bound "
                          << max_actions << ")\n";
                return kOk;
            case awt::RaceVerdictKind::unknown_beyond_bound:
                std::cout << "no unwigglable run up to " << max_actions
                          << " labels; longer words not explored\n";
                return kOk;
            case awt::RaceVerdictKind::not_race_avoiding:
                std::cout << "not race-avoiding\nwitness word: "
                          << verdict.word->str() << "\n";
                std::cout << "witness run word: "
                          << awt::print_run_word(awt::word_of_run(*verdict.witness))
                          << "\n";
                std::cout << "witness trace: "
                          << awt::untimed_trace(*verdict.witness).str() << "\n";
                return kNegative;
        }
        return kOk;
    }
    if (gen_lbtm->parsed()) {
        auto m = awt::parse_lbtm(slurp_file(machine_path));
        std::istringstream ws(slurp_word(word_arg));
        std::vector<std::string> w;
        std::string tok;
        while (ws >> tok) w.push_back(tok);
        std::cout << awt::print_at(awt::lbtm_to_at(m, w));
        return kOk;
    }
    if (gen_widget->parsed()) {
        auto at = load_at(at_path);
        std::cout << awt::print_at(awt::append_unwigglable_widget(at, anchor));
        return kOk;
    }
    if (gen_random->parsed()) {
        std::cout << awt::print_at(
            awt::random_at(seed, g_states, g_timers, g_inputs, g_maxc));
        return kOk;
    }
    return kUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const awt::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const awt::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const awt::SemanticError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSemantic;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kSemantic;
    }
}
