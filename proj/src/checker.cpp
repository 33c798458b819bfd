#include <alsp/checker.hpp>

#include <alsp/parser.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace alsp {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::safe:    return "SAFE";
        case Verdict::attack:  return "ATTACK";
        case Verdict::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

bool Trace::contains_predicate(std::string_view predicate) const {
    return std::any_of(steps.begin(), steps.end(), [&](const TraceStep& s) { return s.atom.predicate == predicate; });
}

namespace {

bool mentions_predicate(const Program& p, const std::string& predicate) {
    for (const auto& r : p.rules) {
        if (r.head && r.head->predicate == predicate) return true;
        for (const auto& l : r.body) {
            if (l.atom.predicate == predicate) return true;
        }
    }
    return false;
}

struct Run {
    GroundProgram ground;
    SolveResult   result;
};

Run ground_and_solve(const Program& p, std::size_t limit, const GroundingOptions& opts) {
    Run run;
    run.ground = ground_program(p, opts);
    run.result = solve(run.ground, limit);
    return run;
}

bool holds(const GroundProgram& g, const Interpretation& m, const Atom& a) {
    auto id = g.find(a);
    return id && m.contains(*id);
}

bool holds_predicate(const GroundProgram& g, const Interpretation& m, std::string_view predicate) {
    return std::any_of(m.begin(), m.end(), [&](AtomId a) { return g.atom(a).predicate == predicate; });
}

struct Verified {
    AttackReport report;
    Run          run;
};

Verified verify_impl(const Program& program, const Atom& goal, const VerifyOptions& options) {
    auto started = std::chrono::steady_clock::now();
    if (!goal.is_ground() || goal.is_equality()) throw UnknownGoal("goal '" + to_string(goal) + "' is not a ground atom");
    if (!mentions_predicate(program, goal.predicate)) {
        throw UnknownGoal("goal predicate '" + goal.predicate + "' does not occur in the program");
    }
    auto violations = check_safety(program);
    if (!violations.empty()) throw UnsafeProgram(std::move(violations));

    Program p = program;
    if (options.constrain_goal) {
        Rule c;
        c.body.push_back(Literal::naf(goal));
        p.add(std::move(c));
    }

    Verified v;
    v.run = ground_and_solve(p, options.limit, options.grounding);
    auto& r   = v.report;
    r.goal    = goal;
    r.exhaustive     = v.run.result.exhausted;
    r.models_checked = v.run.result.models.size();
    const StableModel* first_attack = nullptr;
    for (const auto& m : v.run.result.models) {
        if (!holds(v.run.ground, m.interpretation, goal)) continue;
        ++r.attack_models;
        if (!first_attack) first_attack = &m;
    }
    if (first_attack) {
        r.verdict = Verdict::attack;
        r.witness = extract_trace(v.run.ground, *first_attack, default_trace_filter(program, goal));
    } else {
        r.verdict = r.exhaustive ? Verdict::safe : Verdict::unknown;
    }
    r.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return v;
}

std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

} // namespace

AttackReport verify(const Program& program, const Atom& goal, const VerifyOptions& options) {
    return verify_impl(program, goal, options).report;
}

std::set<std::string> default_trace_filter(const Program& program, const Atom& goal) {
    std::set<std::string> out;
    for (const auto& r : program.rules) {
        if (r.head && !r.is_fact()) out.insert(r.head->predicate);
    }
    out.insert(goal.predicate);
    return out;
}

Trace extract_trace(const GroundProgram& g, const StableModel& model, const std::set<std::string>& filter) {
    Trace t;
    for (const auto& node : model.justification.nodes()) {
        const Atom& a = g.atom(node.atom);
        if (!filter.count(a.predicate)) continue;
        TraceStep s;
        s.rank       = node.rank;
        s.atom       = a;
        s.rule_index = node.rule;
        s.rule       = format_ground_rule(g, g.rules().at(node.rule));
        t.steps.push_back(std::move(s));
    }
    std::sort(t.steps.begin(), t.steps.end(), [](const TraceStep& x, const TraceStep& y) {
        if (x.rank != y.rank) return x.rank < y.rank;
        return x.atom < y.atom;
    });
    return t;
}

std::string goods_atomicity_verdict(const AttackReport& report) {
    if (report.goal.predicate != "attack" || report.goal.arity() != 1) {
        throw WrongGoal("goods atomicity is judged on attack/1, not '" + to_string(report.goal) + "'");
    }
    switch (report.verdict) {
        case Verdict::safe:
            return "goods-atomic within the modeled behaviors";
        case Verdict::attack:
            return "not goods atomic: payment debited without successful decryption (in the encoded model)";
        case Verdict::unknown:
            break;
    }
    return "inconclusive: the model limit was reached before the search was exhausted, no attack found so far";
}

AttackReport check_goods_atomicity(const netbill::Scenario& scenario, const VerifyOptions& options) {
    Program  program = netbill::encode_netbill(scenario);
    Verified v       = verify_impl(program, scenario.goal, options);
    auto&    report  = v.report;
    report.scenario  = scenario.summary();

    VerifyOptions free = options;
    free.constrain_goal = false;
    Verified all        = options.constrain_goal ? verify_impl(program, scenario.goal, free) : v;
    report.runs         = all.run.result.models.size();

    // reference run: the witness if there is one, else the first run of the protocol
    const Run*         ref   = nullptr;
    const StableModel* model = nullptr;
    for (const auto& m : v.run.result.models) {
        if (holds(v.run.ground, m.interpretation, scenario.goal)) {
            ref   = &v.run;
            model = &m;
            break;
        }
    }
    if (!model && !all.run.result.models.empty()) {
        ref   = &all.run;
        model = &all.run.result.models.front();
    }
    bool decrypted = model && holds_predicate(ref->ground, model->interpretation, "userSuccessfullDecryption");
    bool attacked  = model && holds(ref->ground, model->interpretation, scenario.goal);
    report.observations = {{"userSuccessfullDecryption(U, Goods)", decrypted}, {"Attack(U)", attacked}};
    return report;
}

std::string render_trace(const Trace& trace) {
    std::ostringstream out;
    for (const auto& s : trace.steps) {
        out << "  " << std::setw(3) << s.rank << "  " << to_string(s.atom) << "\n"
            << "       by " << s.rule << "\n";
    }
    return out.str();
}

std::string render_text(const AttackReport& r, bool timing) {
    std::ostringstream out;
    if (!r.scenario.empty()) out << "scenario: " << r.scenario << "\n";
    out << "goal: " << to_string(r.goal) << "\n";
    out << "MODEL GENERATED:      " << r.attack_models << "\n";
    for (const auto& o : r.observations) {
        out << std::left << std::setw(22) << o.label << " : " << (o.value ? "TRUE" : "FALSE") << "\n";
    }
    out << std::right;
    out << "models checked: " << r.models_checked << (r.exhaustive ? " (exhaustive)" : " (limit reached)") << "\n";
    if (r.runs) out << "protocol runs: " << *r.runs << "\n";
    out << "verdict: " << to_string(r.verdict) << "\n";
    if (r.goal.predicate == "attack" && r.goal.arity() == 1) out << "atomicity: " << goods_atomicity_verdict(r) << "\n";
    if (r.witness) {
        out << "witness:\n" << render_trace(*r.witness);
    }
    if (timing) out << "time: " << format_ms(r.duration_ms) << " ms\n";
    return out.str();
}

std::string render_json(const AttackReport& r, bool timing) {
    nlohmann::ordered_json j;
    j["scenario"]       = r.scenario;
    j["goal"]           = to_string(r.goal);
    j["verdict"]        = std::string(to_string(r.verdict));
    j["attack_models"]  = r.attack_models;
    j["models_checked"] = r.models_checked;
    j["exhaustive"]     = r.exhaustive;
    j["observations"]   = nlohmann::ordered_json::array();
    for (const auto& o : r.observations) j["observations"].push_back({{"label", o.label}, {"value", o.value}});
    if (r.runs) j["runs"] = *r.runs;
    if (r.goal.predicate == "attack" && r.goal.arity() == 1) j["atomicity"] = goods_atomicity_verdict(r);
    j["witness"] = nlohmann::ordered_json::array();
    if (r.witness) {
        for (const auto& s : r.witness->steps) {
            j["witness"].push_back({{"rank", s.rank}, {"atom", to_string(s.atom)}, {"rule", s.rule}});
        }
    }
    j["duration_ms"] = timing ? r.duration_ms : 0.0;
    return j.dump(2) + "\n";
}

Trace trace_from_json(std::string_view text) {
    Trace t;
    try {
        auto j = nlohmann::json::parse(text);
        for (const auto& s : j.at("witness")) {
            TraceStep step;
            step.rank = s.at("rank").get<std::size_t>();
            step.atom = parse_ground_atom(s.at("atom").get<std::string>(), "report witness");
            step.rule = s.at("rule").get<std::string>();
            t.steps.push_back(std::move(step));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
    return t;
}

} // namespace alsp
