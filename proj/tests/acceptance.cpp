// Acceptance suite: one criterion per check, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "awt/io.hpp"
#include "awt/race.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace awt;

namespace {

struct Harness {
    int failures = 0;

    void run(int id, const std::string& name, double budget_seconds,
             const std::function<void()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        bool ok = error.empty() && secs <= budget_seconds;
        if (!ok) ++failures;
        std::printf("[%s] criterion %d: %s (%.2fs%s)\n", ok ? "PASS" : "FAIL", id,
                    name.c_str(), secs,
                    error.empty() ? "" : (std::string("; ") + error).c_str());
    }
};

void expect(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

template <typename T>
void expect_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) throw std::runtime_error(what + " mismatch");
}

Configuration cfg(const std::string& q,
                  std::initializer_list<std::pair<const char*, Rat>> vals = {}) {
    Configuration c{q, {}};
    for (const auto& [x, v] : vals) c.val.emplace(x, v);
    return c;
}

// --- criterion 1: golden reproduction of the worked runs --------------------

void criterion1() {
    auto at = parse_at(fx::slurp(fx::fixture_path("two_timer.at")));
    expect(validate_automaton(at).ok, "fixture must validate");

    auto rho = run_from_word(at, fx::rho_word());
    std::vector<Configuration> rho_expected = {
        cfg("q0"),
        cfg("q1", {{"x1", Rat(1)}}),
        cfg("q2", {{"x1", Rat(0)}, {"x2", Rat(2)}}),
        cfg("q3", {{"x2", Rat(2)}}),
        cfg("q0"),
    };
    std::vector<Configuration> rho_before = {
        cfg("q0"),
        cfg("q1", {{"x1", Rat(0)}}),
        cfg("q2", {{"x1", Rat(0)}, {"x2", Rat(2)}}),
        cfg("q3", {{"x2", Rat(0)}}),
    };
    for (int k = 0; k < 4; ++k) {
        expect(rho.steps[k].before == rho_before[k], "rho step before");
        expect(rho.steps[k].after == rho_expected[k + 1], "rho step after");
    }
    expect(rho.final_config == cfg("q0"), "rho final");
    expect_eq(untimed_trace(rho).str(), std::string("q0 i q1 i q2 to:x1 q3 to:x2 q0"),
              std::string("rho trace"));

    auto sigma = run_from_word(at, fx::sigma_word());
    expect(sigma.steps[1].before == cfg("q1", {{"x1", Rat(0)}}), "sigma ripeness");
    expect(sigma.steps[1].after == cfg("q1", {{"x1", Rat(1)}}), "sigma restart");
    expect(sigma.steps[2].after == cfg("q2", {{"x1", Rat(1)}, {"x2", Rat(2)}}),
           "sigma start x2");
    expect(sigma.steps[4].after == cfg("q0"), "sigma end");

    auto pi = run_from_word(at, fx::pi_word());
    expect(pi.steps[2].before == cfg("q2", {{"x1", Rat(0)}, {"x2", Rat(1)}}),
           "pi discard instant");
    expect(pi.steps[2].after == cfg("q2", {{"x1", Rat(1)}, {"x2", Rat(1)}}),
           "pi restart");
    expect(pi.steps[3].before == cfg("q2", {{"x1", Rat(0)}, {"x2", Rat(0)}}),
           "pi double zero");
    expect(pi.final_config == cfg("q1", {{"x1", Rat(1, 2)}}), "pi final");

    auto tau = run_from_word(at, fx::tau_word());
    expect(tau.steps[2].before == cfg("q2", {{"x1", Rat(1, 2)}, {"x2", Rat(3, 2)}}),
           "tau positive discard");
    expect(tau.steps[3].before == cfg("q2", {{"x1", Rat(0)}, {"x2", Rat(1, 2)}}),
           "tau to:x1 instant");
    expect(tau.final_config == cfg("q0"), "tau end");
}

// --- criterion 2: block and race decomposition ------------------------------

void criterion2() {
    auto at = fx::two_timer();
    auto check_block = [](const Block& b, std::vector<int> idx, const char* timer,
                          Fate fate) {
        expect(b.action_indices == idx, "block indices");
        expect(b.timer && *b.timer == timer, "block timer");
        expect(b.fate == fate, "block fate");
    };

    auto rho = run_from_word(at, fx::rho_word());
    auto d = decompose_blocks(at, rho);
    expect(d.blocks.size() == 2, "rho block count");
    check_block(d.blocks[0], {1, 3}, "x1", Fate::bot);
    check_block(d.blocks[1], {2, 4}, "x2", Fate::bot);
    auto e = races(at, rho);
    expect(e.size() == 1 && e[0].from == 1 && e[0].to == 0, "rho race B2->B1");

    auto sigma = run_from_word(at, fx::sigma_word());
    d = decompose_blocks(at, sigma);
    expect(d.blocks.size() == 2, "sigma block count");
    check_block(d.blocks[0], {1, 2, 4}, "x1", Fate::bot);
    check_block(d.blocks[1], {3, 5}, "x2", Fate::bot);
    e = races(at, sigma);
    expect(e.size() == 1 && e[0].from == 0 && e[0].to == 1, "sigma race B1->B2");

    auto pi = run_from_word(at, fx::pi_word());
    d = decompose_blocks(at, pi);
    expect(d.blocks.size() == 3, "pi block count");
    check_block(d.blocks[0], {1}, "x1", Fate::moon);
    check_block(d.blocks[1], {2, 4}, "x2", Fate::bot);
    check_block(d.blocks[2], {3, 5}, "x1", Fate::cross);
    e = races(at, pi);
    expect(e.size() == 3, "pi race count");
    expect(e[0].from == 0 && e[0].to == 1 &&
               e[0].witness.kind == RaceWitness::Kind::zero_delay,
           "pi B1->B2");
    expect(e[1].from == 1 && e[1].to == 2 &&
               e[1].witness.kind == RaceWitness::Kind::zero_delay,
           "pi B2->B3");
    expect(e[2].from == 2 && e[2].to == 0 &&
               e[2].witness.kind == RaceWitness::Kind::moon_discard,
           "pi B3->B1");

    auto tau = run_from_word(at, fx::tau_word());
    d = decompose_blocks(at, tau);
    expect(d.blocks.size() == 3, "tau block count");
    check_block(d.blocks[0], {1}, "x1", Fate::cross);
    check_block(d.blocks[1], {2, 5}, "x2", Fate::bot);
    check_block(d.blocks[2], {3, 4}, "x1", Fate::bot);
    e = races(at, tau);
    expect(e.size() == 1 && e[0].from == 0 && e[0].to == 1, "tau race B1->B2");

    expect(!block_graph(at, rho).cyclic(), "rho graph acyclic");
    expect(block_graph(at, pi).cyclic(), "pi graph cyclic");
}

// --- criterion 3: wiggling --------------------------------------------------

void criterion3() {
    auto at = fx::two_timer();
    auto rho = run_from_word(at, fx::rho_word());

    auto result = wiggle_run(at, rho);
    expect(std::holds_alternative<TimedRun>(result), "rho must wiggle");
    const auto& fixed = std::get<TimedRun>(result);
    expect(races(at, fixed).empty(), "wiggled rho has no races");
    expect(untimed_trace(fixed) == untimed_trace(rho), "wiggled rho keeps its trace");

    auto moved = apply_wiggle(at, rho, {1, Rat(-1, 2)});
    std::vector<Rat> want{Rat(1), Rat(1, 2), Rat(1, 2), Rat(3, 2), Rat(1)};
    std::vector<Rat> got;
    for (const auto& s : moved.steps) got.push_back(s.delay);
    got.push_back(moved.final_delay);
    expect(got == want, "worked delay vector");

    auto pi = run_from_word(at, fx::pi_word());
    auto cert_result = wiggle_run(at, pi);
    expect(std::holds_alternative<UnwigglableCertificate>(cert_result),
           "pi must certify");
    const auto& cert = std::get<UnwigglableCertificate>(cert_result);
    expect(cert.cycle.block_indices == std::vector<int>{0, 1, 2}, "pi cycle blocks");
    expect(cert.reltime_terms == std::vector<Rat>{Rat(0), Rat(2), Rat(0), Rat(-1),
                                                  Rat(0), Rat(-1)},
           "pi reltime terms");
    expect(cert.reltime_total == Rat(0), "pi reltime total");
}

// --- criterion 4: region automaton ------------------------------------------

void criterion4() {
    auto at = fx::two_timer();
    auto pi = run_from_word(at, fx::pi_word());

    auto rr = region_run_of(at, pi);
    std::vector<std::string> plain;
    for (const auto& l : rr.labels()) plain.push_back(l.str());
    expect(plain == std::vector<std::string>{"tau", "(i,-)", "(i,-)", "tau", "(i,-)",
                                             "tau", "(to:x2,-)", "(to:x1,-)", "tau"},
           "collapsed labels");
    expect(rr.steps.size() == 9, "ten region states, nine steps");
    expect(rr.steps[3].second.region.value_zero("x1"), "x1 reaches zero");
    expect(rr.steps[5].second.region.value_zero("x1") &&
               rr.steps[5].second.region.value_zero("x2"),
           "both timers at zero");
    const auto& last = rr.steps[8].second.region;
    expect(last.int_of("x1") == 0 && !last.frac_zero("x1"), "final open region");

    auto mr = region_run_of(at, pi, {.collapsed = true, .modified = true});
    std::vector<std::string> modified;
    for (const auto& l : mr.labels()) modified.push_back(l.str());
    expect(modified == std::vector<std::string>{"tau", "(i,x1)", "(i,x2)", "tau",
                                                "(i,x1)", "kill_x1", "tau", "(to:x2,-)",
                                                "(to:x1,x1)", "tau"},
           "modified labels");
    expect(mr.steps[4].second.pending == std::set<std::string>{"x1"}, "pending set");

    expect(region_count_bound(at) == 288, "bound formula");
    auto count = count_reachable_regions(at);
    expect(count <= 288, "reachable regions within the bound");
}

// --- criterion 5: bisimulation property --------------------------------------

void criterion5() {
    std::mt19937_64 rng(2024);
    long long checked = 0;
    for (unsigned long long seed = 1; checked < 1000; ++seed) {
        expect(seed <= 60, "needed too many models to reach 1000 pairs");
        auto at = random_at(seed, 3, 1 + static_cast<int>(seed % 3), 2, 3);
        expect(validate_automaton(at).ok, "random model validates");
        const long long C = std::max<long long>(1, at.max_constant());
        for (int trial = 0; trial < 40 && checked < 1000; ++trial) {
            const auto& q = at.states[rng() % at.states.size()];
            const auto& acc = at.active_of(q);
            if (acc.empty()) continue;
            Configuration c1{q, {}}, c2{q, {}};
            int rank = 0;
            for (const auto& x : acc) {
                long long ip = static_cast<long long>(rng() % C);
                ++rank;
                if (rng() % 2 == 0) {
                    c1.val.emplace(x, Rat(ip));
                    c2.val.emplace(x, Rat(ip));
                } else {
                    c1.val.emplace(x, Rat(ip) + Rat(rank, 10));
                    c2.val.emplace(x, Rat(ip) + Rat(rank, 12));
                }
            }
            expect(timer_equivalent(c1.val, c2.val), "pair construction");
            ++checked;
            std::vector<Action> acts;
            for (const auto& i : at.inputs) acts.push_back(Action::in(i));
            for (const auto& x : acc) acts.push_back(Action::to(x));
            for (const auto& a : acts) {
                bool e1 = true, e2 = true;
                Configuration n1, n2;
                try {
                    n1 = discrete_step(at, c1, a).first;
                } catch (const SemanticError&) { e1 = false; }
                try {
                    n2 = discrete_step(at, c2, a).first;
                } catch (const SemanticError&) { e2 = false; }
                expect(e1 == e2, "same enabled actions");
                if (e1) {
                    expect(n1.state == n2.state, "same successor state");
                    expect(timer_equivalent(n1.val, n2.val), "equivalent successors");
                }
            }
            Rat min1(C + 1);
            for (const auto& [x, v] : c1.val) min1 = std::min(min1, v);
            if (min1.is_zero()) continue;
            Rat d1 = min1 / Rat(2);
            Region target = region_of(delay_config(c1, d1), C);
            Configuration walk = c2;
            bool matched = region_of(walk, C) == target;
            for (int step = 0; step < 64 && !matched; ++step) {
                auto here = region_of(walk, C);
                if (here.has_zero_valued_timer()) break;
                advance_config_to_region(at, walk, delay_successor(here).value_or(here));
                matched = region_of(walk, C) == target;
            }
            expect(matched, "delay matching");
        }
    }
}

// --- criterion 6: reachability against the machine oracle --------------------

void criterion6() {
    int pairs = 0;
    auto check = [&](const LBTM& m, const std::vector<std::string>& w) {
        bool accepts = oracle::lbtm_accepts(m, w);
        auto at = lbtm_to_at(m, w);
        expect(validate_automaton(at).ok, "reduction validates");
        bool reached = reachable(at, "r_done", {.build_witness = false}).reachable;
        if (accepts != reached)
            throw std::runtime_error("oracle disagreement on pair " +
                                     std::to_string(pairs));
        ++pairs;
    };

    // Every subset of a rule pool over two symbols and three states.
    std::vector<LBTM::Rule> pool = {{"s0", "a1", "a2", 'R', "s1"},
                                    {"s1", "a1", "a1", 'L', "sF"},
                                    {"s1", "a2", "a1", 'R', "sF"},
                                    {"s0", "a2", "a1", 'R', "s0"}};
    for (int mask = 0; mask < 16; ++mask) {
        LBTM m;
        m.alphabet = {"a1", "a2"};
        m.states = {"s0", "s1", "sF"};
        m.initial = "s0";
        m.final_state = "sF";
        for (int b = 0; b < 4; ++b)
            if (mask & (1 << b)) m.rules.push_back(pool[b]);
        check(m, {"a1", "a1"});
        check(m, {"a1", "a2"});
        check(m, {"a2", "a1", "a1"});
    }
    // Corner machines: immediate accept, no rules, one-cell words.
    LBTM triv;
    triv.alphabet = {"a1"};
    triv.states = {"s0"};
    triv.initial = "s0";
    triv.final_state = "s0";
    check(triv, {"a1"});
    LBTM stuck;
    stuck.alphabet = {"a1", "a2"};
    stuck.states = {"s0", "sF"};
    stuck.initial = "s0";
    stuck.final_state = "sF";
    check(stuck, {"a1"});
    stuck.rules.push_back({"s0", "a1", "a2", 'R', "sF"});
    check(stuck, {"a1"});
    check(stuck, {"a1", "a1"});
    check(stuck, {"a2", "a2"});
    expect(pairs >= 50, "at least fifty machine/word pairs");
}

// --- criterion 7: race avoidance ---------------------------------------------

void criterion7() {
    auto at = fx::two_timer();
    auto verdict = search_unwigglable(at, 6);
    expect(verdict.kind == RaceVerdictKind::not_race_avoiding, "two_timer not race-avoiding");
    expect(verdict.witness.has_value() && is_padded(*verdict.witness),
           "witness is padded");
    expect(block_graph(at, *verdict.witness).cyclic(), "witness graph cyclic");
    expect(verdict.certificate->reltime_total == Rat(0), "certificate reltime");
    auto replay = run_from_word(at, word_of_run(*verdict.witness));
    expect(untimed_trace(replay) == untimed_trace(*verdict.witness),
           "witness re-simulates");

    for (const auto& base :
         {fx::single_state_at(), fx::two_timer(), fx::single_timer_at()}) {
        auto widget = append_unwigglable_widget(base, base.initial);
        expect(validate_automaton(widget).ok, "widget validates");
        auto wv = search_unwigglable(widget, 8);
        expect(wv.kind == RaceVerdictKind::not_race_avoiding,
               "widget forces a negative verdict");
    }

    for (const auto& one : {fx::single_timer_at(), fx::single_state_at()}) {
        expect(static_single_timer_check(one), "static check holds");
        auto forced = search_unwigglable(one, 12, {.use_static_check = false});
        expect(forced.kind != RaceVerdictKind::not_race_avoiding,
               "no witness at depth twelve");
        expect(!forced.witness.has_value(), "no witness produced");
    }

    int compared = 0, disagreements = 0, cyclic_seen = 0;
    auto widget = append_unwigglable_widget(fx::single_state_at(), "q0");
    for (const auto& src : {widget, fx::two_timer(), fx::stop_at()}) {
        int here = 0;
        enumerate_padded_words(src, 6, [&](const RegionWord& w, const auto&) {
            bool cyc = block_graph_cyclic_word(w);
            if (phi_matches(w) != cyc) ++disagreements;
            if (cyc) ++cyclic_seen;
            ++compared;
            return ++here < 2500;
        });
    }
    expect(compared >= 500, "at least five hundred words compared");
    expect(disagreements == 0, "matcher agrees with the graph check");
    expect(cyclic_seen > 0, "both outcomes exercised");
}

// --- criterion 8: structural properties on random runs -----------------------

void criterion8() {
    std::mt19937_64 rng(99);
    std::vector<AutomatonWithTimers> models{fx::two_timer()};
    for (unsigned long long seed = 1; seed <= 8; ++seed)
        models.push_back(random_at(seed, 3, 2, 2, 2));

    long long produced = 0;
    for (int trial = 0; produced < 1000; ++trial) {
        expect(trial < 40000, "run generation starved");
        const auto& at = models[trial % models.size()];
        auto maybe = oracle::random_padded_run(at, rng, 2 + static_cast<int>(rng() % 6));
        if (!maybe) continue;
        ++produced;
        const auto& run = *maybe;

        auto dec = decompose_blocks(at, run);
        std::set<int> all;
        for (const auto& b : dec.blocks) {
            Rat prev(-1);
            for (size_t j = 0; j < b.action_indices.size(); ++j) {
                expect(all.insert(b.action_indices[j]).second, "partition");
                Rat t = run.time_of_action(b.action_indices[j]);
                if (j > 0) expect(t > prev, "within-block spacing");
                prev = t;
            }
        }
        expect(static_cast<int>(all.size()) == run.num_actions(), "partition covers");

        auto ext = extend_run(at, run);
        int n = static_cast<int>(ext.items.size());
        std::vector<int> seq;
        int len = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < len; ++i) seq.push_back(1 + static_cast<int>(rng() % n));
        seq.push_back(seq.front());
        expect(reltime(ext, seq) == Rat(0), "cyclic reltime");

        auto g = block_graph(at, run);
        auto result = wiggle_run(at, run);
        if (g.cyclic()) {
            expect(std::holds_alternative<UnwigglableCertificate>(result),
                   "cyclic graph certifies");
            expect(std::get<UnwigglableCertificate>(result).reltime_total == Rat(0),
                   "certificate reltime zero");
        } else {
            expect(std::holds_alternative<TimedRun>(result), "acyclic graph wiggles");
            const auto& fixed = std::get<TimedRun>(result);
            expect(untimed_trace(fixed) == untimed_trace(run), "trace preserved");
            expect(races(at, fixed).empty(), "races removed");
            auto replay = run_from_word(at, word_of_run(fixed));
            expect(fx::runs_equal(replay, fixed), "wiggled run re-simulates");
        }
    }
}

// --- criterion 9: round-trips and byte determinism ----------------------------

std::string run_cli(const std::string& args) {
    std::string cmd = std::string(AWT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot spawn the CLI");
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    pclose(pipe);
    return out;
}

void criterion9() {
    auto two_timer = fx::two_timer();
    expect(parse_at(print_at(two_timer)) == two_timer, "model fixture round-trip");
    for (unsigned long long seed = 1; seed <= 100; ++seed) {
        auto at = random_at(seed, 1 + static_cast<int>(seed % 5), 2, 2, 3);
        expect(parse_at(print_at(at)) == at, "random model round-trip");
    }
    for (const auto& name : {"rho.run", "sigma.run", "pi.run", "tau.run"}) {
        auto w = parse_run_word(fx::slurp(fx::fixture_path(name)));
        expect(parse_run_word(print_run_word(w)) == w, "run word round-trip");
    }
    auto m = parse_lbtm(fx::slurp(fx::fixture_path("flip.lbtm")));
    expect(parse_lbtm(print_lbtm(m)) == m, "machine round-trip");

    std::string model_path = fx::fixture_path("two_timer.at");
    std::string pi_path = fx::fixture_path("pi.run");
    std::vector<std::string> invocations = {
        "validate " + model_path,
        "simulate " + model_path + " " + pi_path,
        "blocks " + model_path + " " + pi_path,
        "graph " + model_path + " " + pi_path + " --dot",
        "wiggle " + model_path + " " + pi_path,
        "reach " + model_path + " --target q3",
        "region-stats " + model_path,
        "race-avoiding " + model_path + " --max-actions 6",
        "gen random --seed 7 --states 4 --timers 2 --inputs 2 --max-const 2"};
    for (const auto& args : invocations) {
        auto a = run_cli(args);
        auto b = run_cli(args);
        expect(!a.empty(), "CLI produced output: " + args);
        expect(a == b, "CLI output byte-identical: " + args);
    }
}

} // namespace

int main() {
    Harness h;
    h.run(1, "worked-example runs replay exactly", 1.0, criterion1);
    h.run(2, "block and race decomposition matches the examples", 1.0, criterion2);
    h.run(3, "wiggling reproduces the worked move and certificate", 5.0, criterion3);
    h.run(4, "region abstraction matches the worked sequences", 5.0, criterion4);
    h.run(5, "timer equivalence is a bisimulation on 1000 pairs", 60.0, criterion5);
    h.run(6, "reachability equals machine acceptance on 50+ pairs", 300.0, criterion6);
    h.run(7, "race-avoidance verdicts, witnesses and word matchers", 60.0, criterion7);
    h.run(8, "structural properties hold on 1000 random padded runs", 120.0, criterion8);
    h.run(9, "round-trips and CLI byte determinism", 60.0, criterion9);
    if (h.failures > 0) {
        std::printf("%d criterion(s) failed\n", h.failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
