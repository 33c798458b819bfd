#pragma once

#include <alsp/grounder.hpp>
#include <alsp/netbill.hpp>
#include <alsp/solver.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace alsp {

class UnknownGoal : public Error {
public:
    using Error::Error;
};

class WrongGoal : public Error {
public:
    using Error::Error;
};

enum class Verdict { safe, attack, unknown };

std::string_view to_string(Verdict v) noexcept; // "SAFE", "ATTACK", "UNKNOWN"

struct TraceStep {
    std::size_t rank = 0;
    Atom        atom;
    std::string rule;            // deriving ground rule, as text
    std::size_t rule_index = 0;  // index in the ground program
};

struct Trace {
    std::vector<TraceStep> steps;

    bool        empty() const noexcept { return steps.empty(); }
    bool        contains_predicate(std::string_view predicate) const;
};

struct VerifyOptions {
    std::size_t      limit          = 16;
    bool             constrain_goal = true; // add `:- not goal.` before solving
    GroundingOptions grounding;
};

struct Observation {
    std::string label;
    bool        value = false;
};

struct AttackReport {
    std::string              scenario;
    Atom                     goal;
    std::size_t              models_checked = 0;
    std::size_t              attack_models  = 0;
    Verdict                  verdict        = Verdict::unknown;
    bool                     exhaustive     = false;
    std::optional<Trace>     witness;
    std::vector<Observation> observations;
    std::optional<std::size_t> runs; // unconstrained stable models, when computed
    double                   duration_ms = 0;
};

/// Grounds `program`, optionally restricted to goal-containing models, and
/// enumerates up to `limit` stable models. Throws UnknownGoal when the goal
/// predicate does not occur in the program.
AttackReport verify(const Program& program, const Atom& goal, const VerifyOptions& options = {});

/// Predicates that head a non-fact rule, plus the goal predicate.
std::set<std::string> default_trace_filter(const Program& program, const Atom& goal);

/// Model atoms whose predicate is in `filter`, by justification rank then atom.
Trace extract_trace(const GroundProgram& g, const StableModel& model, const std::set<std::string>& filter);

/// Throws WrongGoal unless the report's goal is an attack/1 atom.
std::string goods_atomicity_verdict(const AttackReport& report);

/// verify() on the encoded scenario, plus the decryption and attack truth
/// lines of a reference run (the witness, or the first unconstrained model).
AttackReport check_goods_atomicity(const netbill::Scenario& scenario, const VerifyOptions& options = {});

/// With `timing` off the duration is left out (text) or written as 0 (JSON),
/// so the output is byte-stable.
std::string render_text(const AttackReport& report, bool timing = false);
std::string render_json(const AttackReport& report, bool timing = false);
/// Reads the witness back from a JSON report.
Trace trace_from_json(std::string_view text);
std::string render_trace(const Trace& trace);

} // namespace alsp
