#pragma once

#include <alsp/logic.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace alsp {

using AtomId  = std::uint32_t;
using Binding = std::map<std::string, Term>;

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& var)
        : Error("unbound variable '" + var + "'"), variable(var) {}
    std::string variable;
};

/// A variable that does not occur in any positive, non-built-in body literal.
struct Violation {
    std::size_t    rule_index = 0;
    SourceLocation location;
    std::string    variable;

    std::string message() const;
    friend bool operator==(const Violation& a, const Violation& b) {
        return a.rule_index == b.rule_index && a.variable == b.variable;
    }
};

class UnsafeProgram : public Error {
public:
    explicit UnsafeProgram(std::vector<Violation> v);
    std::vector<Violation> violations;
};

class UniverseOverflow : public Error {
public:
    using Error::Error;
};

struct ArityConflict {
    std::string    predicate;
    std::size_t    expected = 0;
    std::size_t    found    = 0;
    SourceLocation first_use;
    SourceLocation location;

    std::string message() const;
};

class ArityError : public Error {
public:
    explicit ArityError(std::vector<ArityConflict> c);
    std::vector<ArityConflict> conflicts;
};

/// Replaces every variable of `rule` by its binding.
/// Throws UnboundVariable if the binding misses a rule variable.
Rule substitute(const Rule& rule, const Binding& binding);
Term substitute(const Term& term, const Binding& binding);
Atom substitute(const Atom& atom, const Binding& binding);

std::vector<Violation>     check_safety(const Program& p);
std::vector<ArityConflict> check_arities(const Program& p);

/// All ground terms built from the constants and functors of `p`, up to
/// term depth `max_depth`, sorted. Throws UniverseOverflow past `max_terms`.
std::vector<Term> herbrand_universe(const Program& p, std::size_t max_depth = 3,
                                    std::size_t max_terms = 1'000'000);

struct GroundingOptions {
    std::size_t max_depth     = 3;
    std::size_t max_instances = 1'000'000;
};

struct GroundRule {
    std::optional<AtomId> head; // none = integrity constraint
    std::vector<AtomId>   positive;
    std::vector<AtomId>   negative;
    std::size_t           source_rule = 0; // index into the originating Program

    bool is_fact() const noexcept { return head && positive.empty() && negative.empty(); }
    friend bool operator==(const GroundRule& a, const GroundRule& b) {
        return a.head == b.head && a.positive == b.positive && a.negative == b.negative;
    }
};

/// A variable-free normal program over a dense atom index.
class GroundProgram {
public:
    AtomId                intern(const Atom& a);
    std::optional<AtomId> find(const Atom& a) const;
    const Atom&           atom(AtomId id) const { return atoms_.at(id); }
    std::size_t           atom_count() const noexcept { return atoms_.size(); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    void add_rule(GroundRule r) { rules_.push_back(std::move(r)); }
    /// Convenience for hand-built programs; interns the atoms on the fly.
    void add_rule(const std::optional<Atom>& head, const std::vector<Atom>& positive,
                  const std::vector<Atom>& negative = {});

    const std::vector<GroundRule>& rules() const noexcept { return rules_; }
    std::vector<GroundRule>&       rules() noexcept { return rules_; }
    bool                           is_positive() const noexcept;

    friend bool operator==(const GroundProgram& a, const GroundProgram& b) {
        return a.atoms_ == b.atoms_ && a.rules_ == b.rules_;
    }

private:
    std::vector<Atom>        atoms_;
    std::map<Atom, AtomId>   index_;
    std::vector<GroundRule>  rules_;
};

/// Domain-restricted grounding: instantiates each rule only with bindings
/// whose positive body atoms are potentially derivable. Built-in equality
/// is evaluated and removed. Atom ids follow the ground-atom ordering.
GroundProgram ground_program(const Program& p, const GroundingOptions& options = {});

std::string format_ground_rule(const GroundProgram& g, const GroundRule& r);
/// One ground rule per line, in program order.
std::string format_ground_program(const GroundProgram& g);

/// Ground terms occurring anywhere in `g` (including subterms), sorted.
std::vector<Term> ground_terms(const GroundProgram& g);

} // namespace alsp
