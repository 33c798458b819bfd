// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "support.hpp"
#include "sweep.hpp"

#include <alsp/checker.hpp>
#include <alsp/cli.hpp>
#include <alsp/netbill.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace alsp;
using namespace alsp::test;

namespace {

struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

int failed = 0;

void report(const char* id, const std::string& title, const std::function<std::string(Check&)>& body) {
    Check       c;
    std::string detail;
    try {
        detail = body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << title;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    for (std::size_t i = 0; i != c.failures.size() && i != 10; ++i) std::cout << "       - " << c.failures[i] << "\n";
}

struct CliRun {
    int         status = -1;
    std::string out;
    double      seconds = 0;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    auto               t0 = std::chrono::steady_clock::now();
    CliRun             r;
    r.status  = cli::run(args, out, err);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.out     = out.str() + err.str();
    return r;
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

// Independent stable-model oracle for programs whose atoms under negation
// are few: guess the negated atoms, compute the least model of the implied
// reduct naively, keep it if it agrees with the guess.
std::vector<Interpretation> guess_and_check(const GroundProgram& g) {
    std::vector<AtomId> neg;
    for (const auto& r : g.rules()) neg.insert(neg.end(), r.negative.begin(), r.negative.end());
    std::sort(neg.begin(), neg.end());
    neg.erase(std::unique(neg.begin(), neg.end()), neg.end());
    if (neg.size() > brute_force_atom_cap) throw std::runtime_error("too many negated atoms for the oracle");
    std::vector<Interpretation> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << neg.size()); ++mask) {
        std::vector<char> assumed(g.atom_count(), 0);
        for (std::size_t i = 0; i != neg.size(); ++i) assumed[neg[i]] = (mask >> i) & 1;
        std::vector<char> truth(g.atom_count(), 0);
        bool              violated = false;
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto& r : g.rules()) {
                bool blocked = std::any_of(r.negative.begin(), r.negative.end(), [&](AtomId a) { return assumed[a]; });
                bool body    = std::all_of(r.positive.begin(), r.positive.end(), [&](AtomId a) { return truth[a]; });
                if (blocked || !body) continue;
                if (!r.head) {
                    violated = true;
                } else if (!truth[*r.head]) {
                    truth[*r.head] = 1;
                    grew           = true;
                }
            }
        }
        bool agrees = std::all_of(neg.begin(), neg.end(), [&](AtomId a) { return truth[a] == assumed[a]; });
        if (violated || !agrees) continue;
        std::vector<AtomId> atoms;
        for (std::size_t a = 0; a != truth.size(); ++a) {
            if (truth[a]) atoms.push_back(static_cast<AtomId>(a));
        }
        out.emplace_back(atoms);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Interpretation> sorted_interpretations(const std::vector<StableModel>& ms) {
    std::vector<Interpretation> out;
    for (const auto& m : ms) out.push_back(m.interpretation);
    std::sort(out.begin(), out.end());
    return out;
}

bool holds_predicate(const GroundProgram& g, const Interpretation& m, std::string_view pred) {
    return std::any_of(m.begin(), m.end(), [&](AtomId a) { return g.atom(a).predicate == pred; });
}

// Every model produced for criteria 1-4, collected for criterion 5.
struct Produced {
    std::string   label;
    GroundProgram g;
    StableModel   model;
};
std::vector<Produced> produced;

void collect(const std::string& label, const GroundProgram& g, const std::vector<StableModel>& ms) {
    for (const auto& m : ms) produced.push_back({label, g, m});
}

GroundProgram netbill_ground(netbill::Honesty h, bool constrain) {
    auto s = netbill::default_scenario(h);
    auto p = netbill::encode_netbill(s);
    if (constrain) {
        Rule c;
        c.body.push_back(Literal::naf(s.goal));
        p.add(c);
    }
    return ground_program(p);
}

} // namespace

int main() {
    report("AC1", "honest vendor: MODEL GENERATED 0, SAFE, decryption succeeds", [](Check& c) {
        auto r = run_cli({"netbill", "--honesty", "honest", "--format", "text"});
        c.expect(r.status == cli::exit_ok, "exit status " + std::to_string(r.status));
        c.expect(contains(r.out, "MODEL GENERATED:      0\n"), "MODEL GENERATED: 0 line");
        c.expect(contains(r.out, "Attack(U)              : FALSE\n"), "Attack(U) : FALSE line");
        c.expect(contains(r.out, "verdict: SAFE\n"), "verdict SAFE");
        c.expect(contains(r.out, "(exhaustive)"), "exhaustive enumeration");
        c.expect(r.seconds < 10.0, "runtime under 10 s");

        auto report = check_goods_atomicity(netbill::default_scenario(netbill::Honesty::honest));
        c.expect(report.attack_models == 0 && report.verdict == Verdict::safe && report.exhaustive, "report fields");

        auto g      = netbill_ground(netbill::Honesty::honest, false);
        auto models = enumerate_stable_models(g);
        c.expect(!models.empty(), "unconstrained run has a model");
        for (const auto& m : models) {
            bool ok = false;
            for (auto a : m.interpretation) {
                const auto& atom = g.atom(a);
                ok |= atom.predicate == "userSuccessfullDecryption" && to_string(atom.args[0]) == "u1";
            }
            c.expect(ok, "userSuccessfullDecryption(u1, _) in every run");
            c.expect(!holds_predicate(g, m.interpretation, "attack"), "no attack atom");
        }
        collect("AC1", g, models);
        collect("AC1-constrained", netbill_ground(netbill::Honesty::honest, true),
                enumerate_stable_models(netbill_ground(netbill::Honesty::honest, true)));
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.3f s", r.seconds);
        return std::string(buf);
    });

    report("AC2", "dishonest vendor: MODEL GENERATED 1, ATTACK, witness shape", [](Check& c) {
        auto r = run_cli({"netbill", "--honesty", "dishonest"});
        c.expect(r.status == cli::exit_attack, "exit status " + std::to_string(r.status));
        c.expect(contains(r.out, "MODEL GENERATED:      1\n"), "MODEL GENERATED: 1 line");
        c.expect(contains(r.out, "Attack(U)              : TRUE\n"), "Attack(U) : TRUE line");
        c.expect(contains(r.out, "verdict: ATTACK\n"), "verdict ATTACK");
        c.expect(r.seconds < 10.0, "runtime under 10 s");

        auto report = check_goods_atomicity(netbill::default_scenario(netbill::Honesty::dishonest));
        c.expect(report.attack_models == 1 && report.verdict == Verdict::attack, "one attack model");
        c.expect(report.witness.has_value(), "witness present");
        if (report.witness) {
            c.expect(report.witness->contains_predicate("electronicPaymentOrder"), "EPO step");
            c.expect(report.witness->contains_predicate("knowsReceipt"), "knowsReceipt step");
            c.expect(!report.witness->contains_predicate("userSuccessfullDecryption"), "no decryption step");
        }
        auto g = netbill_ground(netbill::Honesty::dishonest, true);
        collect("AC2", g, enumerate_stable_models(g));
        auto u = netbill_ground(netbill::Honesty::dishonest, false);
        collect("AC2-unconstrained", u, enumerate_stable_models(u));
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.3f s", r.seconds);
        return std::string(buf);
    });

    report("AC3", "enumeration equals brute force on 1000 random programs", [](Check& c) {
        std::mt19937 rng(424242);
        std::size_t  mismatches = 0, models = 0;
        for (int i = 0; i != 1000; ++i) {
            auto g     = random_ground_program(rng, 12, 20);
            auto found = solve(g);
            if (sorted_interpretations(found.models) != brute_force_stable_models(g) || !found.exhausted) ++mismatches;
            models += found.models.size();
            if (i < 200) collect("AC3", g, found.models);
        }
        c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
        return "1000 programs, " + std::to_string(models) + " models, " + std::to_string(mismatches) + " mismatches";
    });

    report("AC4", "semantics unit suite", [](Check& c) {
        auto models = [&](const std::string& text) {
            auto g  = ground(text);
            auto ms = enumerate_stable_models(g);
            collect("AC4", g, ms);
            return model_names(g, ms);
        };
        using Set = std::set<std::set<std::string>>;
        c.expect(models("p :- not p.").empty(), "{p :- not p.} has no model");
        c.expect(models("p :- not q. q :- not p.") == Set{{"p"}, {"q"}}, "{p :- not q. q :- not p.} has {p},{q}");
        c.expect(models("q :- not p, s. s.") == Set{{"s", "q"}}, "q :- not p, s. with s has {s,q}");
        std::mt19937 rng(99);
        std::size_t  checked = 0;
        for (int i = 0; i != 500; ++i) {
            auto  g     = random_ground_program(rng);
            auto& rules = g.rules();
            rules.erase(std::remove_if(rules.begin(), rules.end(), [](const GroundRule& r) { return !r.head; }), rules.end());
            for (auto& r : rules) r.negative.clear();
            auto ms = enumerate_stable_models(g);
            bool ok = ms.size() == 1 && ms[0].interpretation == least_model(g).model;
            c.expect(ok, "positive program " + std::to_string(i) + " has exactly its least model");
            checked += ok;
        }
        return std::to_string(checked) + "/500 positive programs";
    });

    report("AC5", "minimality and justification of every produced model", [](Check& c) {
        std::size_t exhaustive = 0, large = 0;
        for (const auto& p : produced) {
            const auto& m   = p.model.interpretation;
            auto        red = reduct(p.g, m);
            if (m.size() <= 16) {
                c.expect(!has_smaller_model(red, m), p.label + ": proper subset models the reduct");
                ++exhaustive;
            } else {
                // the least model of a positive program lies inside every model of it
                auto lm = least_model(red);
                c.expect(lm.consistent && lm.model == m, p.label + ": not the least model of its reduct");
                c.expect(single_removal_minimal(red, m), p.label + ": single removal still models the reduct");
                ++large;
            }
            auto problem = justification_problem(p.g, p.model);
            c.expect(problem.empty(), p.label + ": " + problem);
        }
        c.expect(large > 0 && exhaustive > 0, "both model sizes covered");
        return std::to_string(produced.size()) + " models, " + std::to_string(exhaustive) + " exhaustive, " +
               std::to_string(large) + " via least model";
    });

    report("AC6", "precondition sweep over the 27 protocol states", [](Check& c) {
        auto        results = precondition_sweep();
        std::size_t pass    = 0;
        for (const auto& r : results) {
            pass += r.pass();
            if (!r.baseline) c.expect(false, r.label + ": not derivable before ablation");
            for (const auto& s : r.still_derivable) c.expect(false, r.label + ": still derivable without " + s);
        }
        c.expect(results.size() == 27, "27 states");
        return std::to_string(pass) + "/" + std::to_string(results.size());
    });

    report("AC7", "bundled files round-trip; goldens byte-stable", [](Check& c) {
        for (const char* name : {"netbill_honest", "netbill_dishonest", "netbill_choice", "two_models", "naf_fact", "no_models"}) {
            auto path = source_path(std::string("programs/") + name + ".alsp");
            auto p    = parse_file(path);
            auto text = format_program(p);
            c.expect(parse(text) == p, std::string(name) + " re-parses to an equal AST");
        }
        for (const char* h : {"honest", "dishonest", "choice"}) {
            c.expect(netbill::render_netbill_file(netbill::default_scenario(netbill::parse_honesty(h))) ==
                         read_text(source_path(std::string("programs/netbill_") + h + ".alsp")),
                     std::string("netbill_") + h + ".alsp matches the generator");
            for (const char* fmt : {"text", "json"}) {
                std::string ext    = std::string(fmt) == "json" ? ".json" : ".txt";
                auto        pinned = read_text(source_path(std::string("tests/golden/netbill_") + h + ext));
                auto        first  = run_cli({"netbill", "--honesty", h, "--format", fmt}).out;
                auto        second = run_cli({"netbill", "--honesty", h, "--format", fmt}).out;
                c.expect(first == second, std::string(h) + " " + fmt + " stable across runs");
                c.expect(first == pinned, std::string(h) + " " + fmt + " equals golden");
            }
        }
        auto two = run_cli({"solve", source_path("programs/two_models.alsp"), "--limit", "16"}).out;
        c.expect(two == read_text(source_path("tests/golden/two_models.txt")), "two_models golden");
        return std::string();
    });

    report("AC8", "free-choice vendor: attack and non-attack runs, checked by oracle", [](Check& c) {
        auto g      = netbill_ground(netbill::Honesty::free_choice, false);
        auto models = enumerate_stable_models(g);
        auto oracle = guess_and_check(g);
        c.expect(sorted_interpretations(models) == oracle, "enumeration equals the guess-and-check oracle");
        std::size_t attacks = 0;
        for (const auto& m : models) attacks += holds_predicate(g, m.interpretation, "attack");
        c.expect(models.size() >= 2, "at least two models");
        c.expect(attacks >= 1, "an attack model");
        c.expect(attacks < models.size(), "a non-attack model");
        auto r = run_cli({"netbill", "--honesty", "choice"});
        c.expect(r.status == cli::exit_attack, "netbill --honesty choice exits with ATTACK");
        // the oracle agrees on the fixed-honesty programs too
        for (auto h : {netbill::Honesty::honest, netbill::Honesty::dishonest}) {
            auto fixed = netbill_ground(h, false);
            c.expect(sorted_interpretations(enumerate_stable_models(fixed)) == guess_and_check(fixed),
                     std::string(netbill::to_string(h)) + " program agrees with the oracle");
        }
        return std::to_string(models.size()) + " models, " + std::to_string(attacks) + " with attack";
    });

    std::cout << (failed == 0 ? "all acceptance criteria passed\n" : std::to_string(failed) + " criteria failed\n");
    return failed == 0 ? 0 : 1;
}
