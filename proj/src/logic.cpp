#include <alsp/logic.hpp>

#include <algorithm>
#include <cctype>
#include <ostream>

namespace alsp {

namespace {
bool is_ident_tail(char c) noexcept {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool all_tail(std::string_view s) noexcept { return std::all_of(s.begin() + 1, s.end(), is_ident_tail); }
} // namespace

bool is_constant_name(std::string_view s) noexcept {
    return !s.empty() && s[0] >= 'a' && s[0] <= 'z' && all_tail(s);
}

bool is_variable_name(std::string_view s) noexcept {
    return !s.empty() && s[0] >= 'A' && s[0] <= 'Z' && all_tail(s);
}

std::string SourceLocation::str() const {
    std::string out = origin.empty() ? std::string("<input>") : origin;
    if (known()) {
        out += ':' + std::to_string(line) + ':' + std::to_string(column);
    }
    return out;
}

Term::Term(bool variable, std::string name, std::vector<Term> args)
    : variable_(variable), name_(std::move(name)), args_(std::move(args)) {}

Term Term::constant(std::string name) {
    if (!is_constant_name(name)) {
        throw Error("invalid constant name '" + name + "'");
    }
    return Term(false, std::move(name), {});
}

Term Term::variable(std::string name) {
    if (!is_variable_name(name)) {
        throw Error("invalid variable name '" + name + "'");
    }
    return Term(true, std::move(name), {});
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    if (!is_constant_name(functor)) {
        throw Error("invalid functor name '" + functor + "'");
    }
    if (args.empty()) {
        throw Error("compound term '" + functor + "' needs at least one argument");
    }
    return Term(false, std::move(functor), std::move(args));
}

bool Term::is_ground() const noexcept {
    if (variable_) return false;
    return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_ground(); });
}

std::size_t Term::depth() const noexcept {
    std::size_t d = 0;
    for (const auto& a : args_) d = std::max(d, a.depth() + 1);
    return d;
}

bool operator==(const Term& a, const Term& b) {
    return a.variable_ == b.variable_ && a.name_ == b.name_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.variable_ != b.variable_) {
        return a.variable_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
    for (std::size_t i = 0; i != a.args_.size(); ++i) {
        if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

Atom::Atom(std::string pred, std::vector<Term> arguments) : predicate(std::move(pred)), args(std::move(arguments)) {}

Atom Atom::equality(Term lhs, Term rhs) {
    std::vector<Term> args;
    args.push_back(std::move(lhs));
    args.push_back(std::move(rhs));
    return Atom(equality_predicate, std::move(args));
}

bool Atom::is_ground() const noexcept {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

std::size_t Atom::depth() const noexcept {
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return d;
}

bool operator==(const Atom& a, const Atom& b) { return a.predicate == b.predicate && a.args == b.args; }

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
    for (std::size_t i = 0; i != a.args.size(); ++i) {
        if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

void Program::append(const Program& other) {
    rules.insert(rules.end(), other.rules.begin(), other.rules.end());
}

namespace {
void collect(const Term& t, std::vector<std::string>& out) {
    if (t.is_variable()) {
        if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect(a, out);
}
void collect(const Atom& a, std::vector<std::string>& out) {
    for (const auto& t : a.args) collect(t, out);
}

void write_args(std::string& out, const std::vector<Term>& args);

void write_term(std::string& out, const Term& t) {
    out += t.name();
    if (!t.args().empty()) write_args(out, t.args());
}

void write_args(std::string& out, const std::vector<Term>& args) {
    out += '(';
    for (std::size_t i = 0; i != args.size(); ++i) {
        if (i) out += ", ";
        write_term(out, args[i]);
    }
    out += ')';
}
} // namespace

std::vector<std::string> rule_variables(const Rule& r) {
    std::vector<std::string> out;
    if (r.head) collect(*r.head, out);
    for (const auto& l : r.body) collect(l.atom, out);
    return out;
}

std::string to_string(const Term& t) {
    std::string out;
    write_term(out, t);
    return out;
}

std::string to_string(const Atom& a) {
    if (a.is_equality()) {
        return to_string(a.args[0]) + " = " + to_string(a.args[1]);
    }
    std::string out = a.predicate;
    if (!a.args.empty()) write_args(out, a.args);
    return out;
}

std::string to_string(const Literal& l) {
    return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

std::string to_string(const Rule& r) {
    std::string out;
    if (r.head) out += to_string(*r.head);
    if (!r.body.empty()) {
        out += r.head ? " :- " : ":- ";
        for (std::size_t i = 0; i != r.body.size(); ++i) {
            if (i) out += ", ";
            out += to_string(r.body[i]);
        }
    }
    out += '.';
    return out;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << to_string(a); }
std::ostream& operator<<(std::ostream& os, const Rule& r) { return os << to_string(r); }

} // namespace alsp
