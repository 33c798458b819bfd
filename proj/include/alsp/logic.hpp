#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alsp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceLocation {
    std::string origin;
    std::size_t line   = 0; // 1-based; 0 = unknown
    std::size_t column = 0;

    bool known() const noexcept { return line != 0; }
    std::string str() const;
};

/// A constant, a variable, or a compound term `f(t1, ..., tn)`.
///
/// Constants and compound terms share one representation (a functor with
/// zero or more arguments), which gives the ground-term ordering for free:
/// functor name, then arity, then arguments left to right. Variables sort
/// before every non-variable term.
class Term {
public:
    static Term constant(std::string name);
    static Term variable(std::string name);
    static Term compound(std::string functor, std::vector<Term> args);

    bool is_variable() const noexcept { return variable_; }
    bool is_constant() const noexcept { return !variable_ && args_.empty(); }
    bool is_compound() const noexcept { return !variable_ && !args_.empty(); }

    const std::string&       name() const noexcept { return name_; }
    const std::vector<Term>& args() const noexcept { return args_; }
    std::size_t              arity() const noexcept { return args_.size(); }

    bool        is_ground() const noexcept;
    /// Constants have depth 0, `f(a)` depth 1, `f(g(a), b)` depth 2.
    std::size_t depth() const noexcept;

    friend bool                 operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    Term(bool variable, std::string name, std::vector<Term> args);

    bool              variable_ = false;
    std::string       name_;
    std::vector<Term> args_;
};

/// Name of the built-in syntactic equality predicate.
inline constexpr const char* equality_predicate = "=";

struct Atom {
    std::string       predicate;
    std::vector<Term> args;

    Atom() = default;
    Atom(std::string pred, std::vector<Term> arguments = {});

    static Atom equality(Term lhs, Term rhs);

    std::size_t arity() const noexcept { return args.size(); }
    bool        is_equality() const noexcept { return predicate == equality_predicate && args.size() == 2; }
    bool        is_ground() const noexcept;
    std::size_t depth() const noexcept;

    friend bool                 operator==(const Atom& a, const Atom& b);
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct Literal {
    Atom atom;
    bool negated = false; // negation as failure

    static Literal pos(Atom a) { return {std::move(a), false}; }
    static Literal naf(Atom a) { return {std::move(a), true}; }

    bool is_builtin() const noexcept { return atom.is_equality(); }

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// `head :- body.`; a missing head makes an integrity constraint.
struct Rule {
    std::optional<Atom>  head;
    std::vector<Literal> body;
    SourceLocation       location;

    bool is_fact() const noexcept { return head && body.empty(); }
    bool is_constraint() const noexcept { return !head.has_value(); }

    static Rule fact(Atom a) { return {std::move(a), {}, {}}; }

    /// Structural equality; source locations are ignored.
    friend bool operator==(const Rule& a, const Rule& b) { return a.head == b.head && a.body == b.body; }
};

struct Program {
    std::vector<Rule> rules;

    void append(const Program& other);
    void add(Rule r) { rules.push_back(std::move(r)); }

    friend bool operator==(const Program& a, const Program& b) { return a.rules == b.rules; }
};

/// Variables of a rule in order of first occurrence (head first).
std::vector<std::string> rule_variables(const Rule& r);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Rule& r);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Atom& a);
std::ostream& operator<<(std::ostream& os, const Rule& r);

bool is_constant_name(std::string_view s) noexcept;
bool is_variable_name(std::string_view s) noexcept;

} // namespace alsp
