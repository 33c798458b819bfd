#include <alsp/cli.hpp>

#include <alsp/checker.hpp>
#include <alsp/grounder.hpp>
#include <alsp/netbill.hpp>
#include <alsp/parser.hpp>
#include <alsp/solver.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace alsp::cli {

namespace {

struct Flags {
    std::vector<std::string> inputs;
    std::string              goal;
    std::size_t              limit   = 16;
    std::size_t              horizon = 12;
    std::string              honesty = "honest";
    std::string              format  = "text";
    std::size_t              depth   = 3;
    bool                     seed_order = false;
    std::string              scenario;
    std::string              report;
    bool                     emit          = false;
    bool                     timing        = false;
    bool                     no_constraint = false;
};

Program load_inputs(const std::vector<std::string>& paths) {
    Program p;
    for (const auto& path : paths) p.append(parse_file(path));
    return p;
}

GroundingOptions grounding(const Flags& f) {
    GroundingOptions g;
    g.max_depth = f.depth;
    return g;
}

VerifyOptions verify_options(const Flags& f) {
    VerifyOptions v;
    v.limit          = f.limit;
    v.constrain_goal = !f.no_constraint;
    v.grounding      = grounding(f);
    return v;
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::safe:    return exit_ok;
        case Verdict::attack:  return exit_attack;
        case Verdict::unknown: return exit_unknown;
    }
    return exit_error;
}

Atom goal_of(const Flags& f) {
    if (f.goal.empty()) throw Error("--goal is required");
    return parse_ground_atom(f.goal, "--goal");
}

void print_report(const AttackReport& r, const Flags& f, std::ostream& out) {
    out << (f.format == "json" ? render_json(r, f.timing) : render_text(r, f.timing));
}

int cmd_check(const Flags& f, std::ostream& out, std::ostream& err) {
    int status = exit_ok;
    for (const auto& path : f.inputs) {
        Program p;
        try {
            p = parse_file(path);
        } catch (const ParseError& e) {
            err << e.what() << "\n";
            status = exit_error;
            continue;
        }
        auto violations = check_safety(p);
        auto conflicts  = check_arities(p);
        for (const auto& v : violations) err << v.message() << "\n";
        for (const auto& c : conflicts) err << c.message() << "\n";
        if (violations.empty() && conflicts.empty()) {
            out << path << ": ok (" << p.rules.size() << (p.rules.size() == 1 ? " rule)\n" : " rules)\n");
        } else {
            status = exit_error;
        }
    }
    return status;
}

int cmd_ground(const Flags& f, std::ostream& out) {
    out << format_ground_program(ground_program(load_inputs(f.inputs), grounding(f)));
    return exit_ok;
}

int cmd_solve(const Flags& f, std::ostream& out) {
    auto g   = ground_program(load_inputs(f.inputs), grounding(f));
    auto res = solve(g, f.limit);
    if (f.format == "json") {
        nlohmann::ordered_json j;
        j["models"] = nlohmann::ordered_json::array();
        for (const auto& m : res.models) {
            std::vector<std::string> atoms;
            for (auto a : m.interpretation) atoms.push_back(to_string(g.atom(a)));
            std::sort(atoms.begin(), atoms.end());
            j["models"].push_back(atoms);
        }
        j["exhaustive"] = res.exhausted;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    std::size_t n = 0;
    for (const auto& m : res.models) {
        out << "Answer: " << ++n << "\n"
            << "Stable Model: " << format_interpretation(g, m.interpretation) << "\n";
    }
    out << "Models: " << res.models.size() << (res.exhausted ? " (exhaustive)" : " (limit reached)") << "\n";
    return exit_ok;
}

int cmd_verify(const Flags& f, std::ostream& out) {
    auto report = verify(load_inputs(f.inputs), goal_of(f), verify_options(f));
    print_report(report, f, out);
    return exit_for(report.verdict);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_trace(const Flags& f, std::ostream& out) {
    std::optional<Trace> trace;
    if (!f.report.empty()) {
        trace = trace_from_json(read_file(f.report));
    } else {
        if (f.inputs.empty()) throw Error("trace needs input files or --report");
        trace = verify(load_inputs(f.inputs), goal_of(f), verify_options(f)).witness;
    }
    if (!trace || trace->empty()) {
        out << "no witness\n";
        return exit_ok;
    }
    if (f.format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& s : trace->steps) j.push_back({{"rank", s.rank}, {"atom", to_string(s.atom)}, {"rule", s.rule}});
        out << j.dump(2) << "\n";
    } else {
        out << render_trace(*trace);
    }
    return exit_ok;
}

int cmd_netbill(const Flags& f, bool honesty_given, bool horizon_given, std::ostream& out) {
    netbill::Scenario s = f.scenario.empty() ? netbill::default_scenario(netbill::parse_honesty(f.honesty))
                                             : netbill::load_scenario(f.scenario);
    if (honesty_given) s.vendor_honesty = netbill::parse_honesty(f.honesty);
    if (horizon_given) s.horizon = f.horizon;
    netbill::validate(s);
    if (f.emit) {
        out << netbill::render_netbill_file(s);
        return exit_ok;
    }
    auto report = check_goods_atomicity(s, verify_options(f));
    print_report(report, f, out);
    return exit_for(report.verdict);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Answer-set verification of protocol models", "alsp"};
    app.require_subcommand(1);
    Flags f;

    auto positive = CLI::PositiveNumber;
    auto inputs   = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("inputs", f.inputs, ".alsp input files")->check(CLI::ExistingFile);
        if (required) o->required();
    };
    auto depth = [&](CLI::App* c) {
        c->add_option("--depth", f.depth, "maximum term depth")->capture_default_str();
        c->add_flag("--seed-order", f.seed_order, "fixed search order (reserved)");
    };
    auto format = [&](CLI::App* c) {
        c->add_option("--format", f.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    };
    auto limit = [&](CLI::App* c) {
        c->add_option("--limit", f.limit, "maximum number of stable models")->check(positive)->capture_default_str();
    };
    auto goal = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("--goal", f.goal, "goal atom, e.g. attack(u1)");
        if (required) o->required();
    };
    auto verification = [&](CLI::App* c) {
        c->add_flag("--no-goal-constraint", f.no_constraint, "scan all models instead of requiring the goal");
        c->add_flag("--timing", f.timing, "report wall-clock time");
    };

    auto* check = app.add_subcommand("check", "parse and safety-check programs");
    inputs(check, true);
    depth(check);

    auto* ground = app.add_subcommand("ground", "print the ground program");
    inputs(ground, true);
    depth(ground);

    auto* solve_cmd = app.add_subcommand("solve", "enumerate stable models");
    inputs(solve_cmd, true);
    depth(solve_cmd);
    limit(solve_cmd);
    format(solve_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "check whether any stable model contains the goal");
    inputs(verify_cmd, true);
    goal(verify_cmd, true);
    depth(verify_cmd);
    limit(verify_cmd);
    format(verify_cmd);
    verification(verify_cmd);

    auto* trace = app.add_subcommand("trace", "print the witness trace of a fresh verify or a saved report");
    inputs(trace, false);
    goal(trace, false);
    trace->add_option("--report", f.report, "JSON report written by verify --format json")->check(CLI::ExistingFile);
    depth(trace);
    limit(trace);
    format(trace);
    verification(trace);

    auto* nb = app.add_subcommand("netbill", "encode and check the NetBill scenario");
    auto* honesty = nb->add_option("--honesty", f.honesty, "vendor behaviour")
                        ->check(CLI::IsMember({"honest", "dishonest", "choice"}))
                        ->capture_default_str();
    auto* horizon = nb->add_option("--horizon", f.horizon, "number of time ticks")->capture_default_str();
    nb->add_option("--scenario", f.scenario, "scenario JSON file")->check(CLI::ExistingFile);
    nb->add_flag("--emit", f.emit, "print the generated program instead of checking it");
    depth(nb);
    limit(nb);
    format(nb);
    verification(nb);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run with --help for usage\n";
        return exit_error;
    }

    try {
        if (*check) return cmd_check(f, out, err);
        if (*ground) return cmd_ground(f, out);
        if (*solve_cmd) return cmd_solve(f, out);
        if (*verify_cmd) return cmd_verify(f, out);
        if (*trace) return cmd_trace(f, out);
        if (*nb) return cmd_netbill(f, honesty->count() > 0, horizon->count() > 0, out);
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return exit_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}

} // namespace alsp::cli
