#include <alsp/grounder.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

namespace alsp {

std::string Violation::message() const {
    return location.str() + ": unsafe variable '" + variable + "' in rule " + std::to_string(rule_index + 1) +
           " (no positive body occurrence)";
}

namespace {
std::string join_messages(const auto& items) {
    std::string out;
    for (const auto& i : items) {
        if (!out.empty()) out += '\n';
        out += i.message();
    }
    return out;
}
} // namespace

UnsafeProgram::UnsafeProgram(std::vector<Violation> v) : Error(join_messages(v)), violations(std::move(v)) {}

std::string ArityConflict::message() const {
    return location.str() + ": predicate '" + predicate + "' used with arity " + std::to_string(found) +
           ", but with arity " + std::to_string(expected) + " at " + first_use.str();
}

ArityError::ArityError(std::vector<ArityConflict> c) : Error(join_messages(c)), conflicts(std::move(c)) {}

Term substitute(const Term& term, const Binding& binding) {
    if (term.is_variable()) {
        auto it = binding.find(term.name());
        if (it == binding.end()) throw UnboundVariable(term.name());
        return it->second;
    }
    if (term.is_constant()) return term;
    std::vector<Term> args;
    args.reserve(term.arity());
    for (const auto& a : term.args()) args.push_back(substitute(a, binding));
    return Term::compound(term.name(), std::move(args));
}

Atom substitute(const Atom& atom, const Binding& binding) {
    Atom out;
    out.predicate = atom.predicate;
    out.args.reserve(atom.args.size());
    for (const auto& a : atom.args) out.args.push_back(substitute(a, binding));
    return out;
}

Rule substitute(const Rule& rule, const Binding& binding) {
    Rule out;
    out.location = rule.location;
    if (rule.head) out.head = substitute(*rule.head, binding);
    out.body.reserve(rule.body.size());
    for (const auto& l : rule.body) out.body.push_back({substitute(l.atom, binding), l.negated});
    return out;
}

std::vector<Violation> check_safety(const Program& p) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i != p.rules.size(); ++i) {
        const Rule& r = p.rules[i];
        Rule positive_part;
        for (const auto& l : r.body) {
            if (!l.negated && !l.is_builtin()) positive_part.body.push_back(l);
        }
        auto bound = rule_variables(positive_part);
        for (const auto& v : rule_variables(r)) {
            if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
                out.push_back({i, r.location, v});
            }
        }
    }
    return out;
}

std::vector<ArityConflict> check_arities(const Program& p) {
    std::map<std::string, std::pair<std::size_t, SourceLocation>> seen;
    std::vector<ArityConflict> out;
    auto visit = [&](const Atom& a, const SourceLocation& loc) {
        if (a.is_equality()) return;
        auto [it, inserted] = seen.try_emplace(a.predicate, a.arity(), loc);
        if (!inserted && it->second.first != a.arity()) {
            out.push_back({a.predicate, it->second.first, a.arity(), it->second.second, loc});
        }
    };
    for (const auto& r : p.rules) {
        if (r.head) visit(*r.head, r.location);
        for (const auto& l : r.body) visit(l.atom, r.location);
    }
    return out;
}

namespace {

void collect_signature(const Term& t, std::set<Term>& constants, std::set<std::pair<std::string, std::size_t>>& functors) {
    if (t.is_variable()) return;
    if (t.is_constant()) {
        constants.insert(t);
        return;
    }
    functors.emplace(t.name(), t.arity());
    for (const auto& a : t.args()) collect_signature(a, constants, functors);
}

} // namespace

std::vector<Term> herbrand_universe(const Program& p, std::size_t max_depth, std::size_t max_terms) {
    std::set<Term> constants;
    std::set<std::pair<std::string, std::size_t>> functors;
    for (const auto& r : p.rules) {
        if (r.head) {
            for (const auto& t : r.head->args) collect_signature(t, constants, functors);
        }
        for (const auto& l : r.body) {
            for (const auto& t : l.atom.args) collect_signature(t, constants, functors);
        }
    }
    if (constants.size() > max_terms) throw UniverseOverflow("Herbrand universe exceeds " + std::to_string(max_terms) + " terms");

    // upto holds every term of depth < d; the first previous_size of them have depth < d-1.
    std::vector<Term> upto(constants.begin(), constants.end());
    std::size_t       previous_size = 0; // |terms of depth < d-1|
    for (std::size_t d = 1; d <= max_depth && !functors.empty(); ++d) {
        long double fresh = 0;
        for (const auto& [name, n] : functors) {
            fresh += std::pow(static_cast<long double>(upto.size()), n) -
                     std::pow(static_cast<long double>(previous_size), n);
        }
        if (static_cast<long double>(upto.size()) + fresh > static_cast<long double>(max_terms)) {
            throw UniverseOverflow("Herbrand universe exceeds " + std::to_string(max_terms) + " terms at depth " +
                                   std::to_string(d));
        }
        std::vector<Term> level;
        for (const auto& [name, n] : functors) {
            std::vector<std::size_t> idx(n, 0);
            if (upto.empty()) break;
            while (true) {
                // at least one argument must come from the newest level
                bool newest = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= previous_size; });
                if (newest) {
                    std::vector<Term> args;
                    args.reserve(n);
                    for (auto i : idx) args.push_back(upto[i]);
                    level.push_back(Term::compound(name, std::move(args)));
                }
                std::size_t k = n;
                while (k > 0 && ++idx[k - 1] == upto.size()) {
                    idx[k - 1] = 0;
                    --k;
                }
                if (k == 0) break;
            }
        }
        previous_size = upto.size();
        if (level.empty()) break;
        upto.insert(upto.end(), level.begin(), level.end());
    }
    std::sort(upto.begin(), upto.end());
    return upto;
}

AtomId GroundProgram::intern(const Atom& a) {
    auto [it, inserted] = index_.try_emplace(a, static_cast<AtomId>(atoms_.size()));
    if (inserted) atoms_.push_back(a);
    return it->second;
}

std::optional<AtomId> GroundProgram::find(const Atom& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void GroundProgram::add_rule(const std::optional<Atom>& head, const std::vector<Atom>& positive,
                             const std::vector<Atom>& negative) {
    GroundRule r;
    if (head) r.head = intern(*head);
    for (const auto& a : positive) r.positive.push_back(intern(a));
    for (const auto& a : negative) r.negative.push_back(intern(a));
    r.source_rule = rules_.size();
    rules_.push_back(std::move(r));
}

bool GroundProgram::is_positive() const noexcept {
    return std::all_of(rules_.begin(), rules_.end(), [](const GroundRule& r) { return r.negative.empty(); });
}

namespace {

bool match(const Term& pattern, const Term& ground, Binding& b) {
    if (pattern.is_variable()) {
        auto [it, inserted] = b.try_emplace(pattern.name(), ground);
        return inserted || it->second == ground;
    }
    if (pattern.name() != ground.name() || pattern.arity() != ground.arity()) return false;
    for (std::size_t i = 0; i != pattern.arity(); ++i) {
        if (!match(pattern.args()[i], ground.args()[i], b)) return false;
    }
    return true;
}

bool match(const Atom& pattern, const Atom& ground, Binding& b) {
    if (pattern.args.size() != ground.args.size()) return false;
    for (std::size_t i = 0; i != pattern.args.size(); ++i) {
        if (!match(pattern.args[i], ground.args[i], b)) return false;
    }
    return true;
}

/// Potentially derivable atoms grouped by predicate, each group sorted.
class DomainIndex {
public:
    bool contains(const Atom& a) const { return all_.count(a) != 0; }
    void insert(const std::vector<Atom>& fresh) {
        for (const auto& a : fresh) {
            if (all_.insert(a).second) by_predicate_[a.predicate].push_back(a);
        }
        for (auto& [_, v] : by_predicate_) std::sort(v.begin(), v.end());
    }
    const std::vector<Atom>& candidates(const std::string& predicate) const {
        static const std::vector<Atom> none;
        auto it = by_predicate_.find(predicate);
        return it == by_predicate_.end() ? none : it->second;
    }

private:
    std::set<Atom>                             all_;
    std::map<std::string, std::vector<Atom>>   by_predicate_;
};

struct PreparedRule {
    const Rule*              rule = nullptr;
    std::vector<const Atom*> positive;
    std::vector<const Atom*> negative;
    std::vector<const Atom*> equalities;
};

PreparedRule prepare(const Rule& r) {
    PreparedRule p;
    p.rule = &r;
    for (const auto& l : r.body) {
        if (l.is_builtin()) {
            p.equalities.push_back(&l.atom);
        } else if (l.negated) {
            p.negative.push_back(&l.atom);
        } else {
            p.positive.push_back(&l.atom);
        }
    }
    return p;
}

/// Calls `f(binding)` for every binding that matches the positive body
/// against `domain` and satisfies all equality literals.
void for_each_binding(const PreparedRule& r, const DomainIndex& domain, const std::function<void(const Binding&)>& f) {
    std::function<void(std::size_t, const Binding&)> step = [&](std::size_t i, const Binding& b) {
        if (i == r.positive.size()) {
            for (const Atom* eq : r.equalities) {
                if (substitute(eq->args[0], b) != substitute(eq->args[1], b)) return;
            }
            f(b);
            return;
        }
        const Atom& pattern = *r.positive[i];
        for (const auto& cand : domain.candidates(pattern.predicate)) {
            Binding next = b;
            if (match(pattern, cand, next)) step(i + 1, next);
        }
    };
    step(0, Binding{});
}

struct Instance {
    std::optional<Atom> head;
    std::vector<Atom>   positive;
    std::vector<Atom>   negative;
    std::size_t         source_rule;

};

} // namespace

GroundProgram ground_program(const Program& p, const GroundingOptions& options) {
    if (auto v = check_safety(p); !v.empty()) throw UnsafeProgram(std::move(v));
    if (auto c = check_arities(p); !c.empty()) throw ArityError(std::move(c));
    for (const auto& r : p.rules) {
        if (r.head && r.head->is_equality()) {
            throw Error(r.location.str() + ": built-in equality cannot appear in a rule head");
        }
    }

    std::vector<PreparedRule> rules;
    rules.reserve(p.rules.size());
    for (const auto& r : p.rules) rules.push_back(prepare(r));

    auto overflow = [&] {
        return UniverseOverflow("grounding exceeds " + std::to_string(options.max_instances) + " rule instances");
    };

    // Least fixpoint of the program with negative literals ignored.
    DomainIndex domain;
    while (true) {
        std::vector<Atom> fresh;
        std::size_t       work = 0;
        for (const auto& r : rules) {
            if (!r.rule->head) continue;
            for_each_binding(r, domain, [&](const Binding& b) {
                if (++work > options.max_instances) throw overflow();
                Atom h = substitute(*r.rule->head, b);
                if (h.depth() > options.max_depth || domain.contains(h)) return;
                fresh.push_back(std::move(h));
            });
        }
        if (fresh.empty()) break;
        domain.insert(fresh);
    }

    std::vector<Instance> instances;
    std::set<std::tuple<std::optional<Atom>, std::vector<Atom>, std::vector<Atom>>> seen;
    for (std::size_t i = 0; i != rules.size(); ++i) {
        const auto& r = rules[i];
        for_each_binding(r, domain, [&](const Binding& b) {
            Instance inst;
            inst.source_rule = i;
            if (r.rule->head) {
                inst.head = substitute(*r.rule->head, b);
                if (inst.head->depth() > options.max_depth) return;
            }
            for (const Atom* a : r.positive) inst.positive.push_back(substitute(*a, b));
            for (const Atom* a : r.negative) inst.negative.push_back(substitute(*a, b));
            if (!seen.emplace(inst.head, inst.positive, inst.negative).second) return;
            if (instances.size() == options.max_instances) throw overflow();
            instances.push_back(std::move(inst));
        });
    }

    std::set<Atom> atoms;
    for (const auto& inst : instances) {
        if (inst.head) atoms.insert(*inst.head);
        atoms.insert(inst.positive.begin(), inst.positive.end());
        atoms.insert(inst.negative.begin(), inst.negative.end());
    }
    GroundProgram g;
    for (const auto& a : atoms) g.intern(a);
    for (const auto& inst : instances) {
        GroundRule gr;
        gr.source_rule = inst.source_rule;
        if (inst.head) gr.head = *g.find(*inst.head);
        for (const auto& a : inst.positive) gr.positive.push_back(*g.find(a));
        for (const auto& a : inst.negative) gr.negative.push_back(*g.find(a));
        g.add_rule(std::move(gr));
    }
    return g;
}

std::string format_ground_rule(const GroundProgram& g, const GroundRule& r) {
    std::string out;
    if (r.head) out += to_string(g.atom(*r.head));
    if (!r.positive.empty() || !r.negative.empty()) {
        out += r.head ? " :- " : ":- ";
        bool first = true;
        for (auto id : r.positive) {
            if (!first) out += ", ";
            first = false;
            out += to_string(g.atom(id));
        }
        for (auto id : r.negative) {
            if (!first) out += ", ";
            first = false;
            out += "not " + to_string(g.atom(id));
        }
    } else if (!r.head) {
        out += ":- ";
    }
    out += '.';
    return out;
}

std::string format_ground_program(const GroundProgram& g) {
    std::string out;
    for (const auto& r : g.rules()) {
        out += format_ground_rule(g, r);
        out += '\n';
    }
    return out;
}

std::vector<Term> ground_terms(const GroundProgram& g) {
    std::set<Term> terms;
    std::function<void(const Term&)> visit = [&](const Term& t) {
        terms.insert(t);
        for (const auto& a : t.args()) visit(a);
    };
    for (const auto& a : g.atoms()) {
        for (const auto& t : a.args) visit(t);
    }
    return {terms.begin(), terms.end()};
}

} // namespace alsp
