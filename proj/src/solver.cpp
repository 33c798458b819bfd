#include <alsp/solver.hpp>

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace alsp {

Interpretation::Interpretation(std::vector<AtomId> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool Interpretation::contains(AtomId a) const noexcept {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

namespace {

Interpretation from_mask(const std::vector<char>& mask) {
    std::vector<AtomId> atoms;
    for (std::size_t i = 0; i != mask.size(); ++i) {
        if (mask[i]) atoms.push_back(static_cast<AtomId>(i));
    }
    return Interpretation(std::move(atoms));
}

/// Counter-based least fixpoint over the rules selected by `enabled`,
/// ignoring their negative bodies. Records the stage of every atom when
/// `stage` is non-null.
class Fixpoint {
public:
    explicit Fixpoint(const GroundProgram& g) : g_(g), occurs_(g.atom_count()) {
        for (std::size_t r = 0; r != g.rules().size(); ++r) {
            for (auto a : g.rules()[r].positive) occurs_[a].push_back(r);
        }
    }

    /// Returns the derived mask; `fired_constraint` reports whether an
    /// enabled headless rule had its positive body satisfied.
    std::vector<char> run(const std::vector<char>& enabled, bool& fired_constraint,
                          std::vector<std::size_t>* stage = nullptr) const {
        const auto&             rules = g_.rules();
        std::vector<char>       truth(g_.atom_count(), 0);
        std::vector<std::size_t> missing(rules.size(), 0);
        std::vector<std::pair<AtomId, std::size_t>> queue; // (atom, stage)
        fired_constraint = false;
        for (std::size_t r = 0; r != rules.size(); ++r) {
            missing[r] = rules[r].positive.size();
            if (enabled[r] && missing[r] == 0) fire(r, 0, truth, queue, fired_constraint);
        }
        if (stage) stage->assign(g_.atom_count(), 0);
        // breadth-first so that stages equal fixpoint iteration counts
        for (std::size_t head = 0; head != queue.size(); ++head) {
            auto [a, s] = queue[head];
            if (stage) (*stage)[a] = s;
            for (auto r : occurs_[a]) {
                // duplicate body atoms are counted once per occurrence
                if (--missing[r] == 0 && enabled[r]) fire(r, s + 1, truth, queue, fired_constraint);
            }
        }
        return truth;
    }

private:
    void fire(std::size_t r, std::size_t s, std::vector<char>& truth,
              std::vector<std::pair<AtomId, std::size_t>>& queue, bool& fired_constraint) const {
        const auto& rule = g_.rules()[r];
        if (!rule.head) {
            fired_constraint = true;
            return;
        }
        if (!truth[*rule.head]) {
            truth[*rule.head] = 1;
            queue.emplace_back(*rule.head, s);
        }
    }

    const GroundProgram&                  g_;
    std::vector<std::vector<std::size_t>> occurs_;
};

} // namespace

GroundProgram reduct(const GroundProgram& g, const Interpretation& m) {
    GroundProgram out;
    for (const auto& a : g.atoms()) out.intern(a);
    for (std::size_t r = 0; r != g.rules().size(); ++r) {
        const auto& rule = g.rules()[r];
        if (std::any_of(rule.negative.begin(), rule.negative.end(), [&](AtomId a) { return m.contains(a); })) {
            continue;
        }
        GroundRule kept;
        kept.head        = rule.head;
        kept.positive    = rule.positive;
        kept.source_rule = r;
        out.add_rule(std::move(kept));
    }
    return out;
}

LeastModel least_model(const GroundProgram& g) {
    if (!g.is_positive()) throw NotPositiveProgram();
    Fixpoint          fp(g);
    bool              fired = false;
    std::vector<char> enabled(g.rules().size(), 1);
    auto              truth = fp.run(enabled, fired);
    return {from_mask(truth), !fired};
}

bool is_stable(const GroundProgram& g, const Interpretation& m) {
    if (!m.empty() && m.atoms().back() >= g.atom_count()) return false;
    auto lm = least_model(reduct(g, m));
    return lm.consistent && lm.model == m;
}

JustificationGraph::JustificationGraph(std::vector<JustificationNode> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end(), [](const auto& a, const auto& b) { return a.atom < b.atom; });
}

const JustificationNode* JustificationGraph::find(AtomId a) const noexcept {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), a, [](const auto& n, AtomId x) { return n.atom < x; });
    return it != nodes_.end() && it->atom == a ? &*it : nullptr;
}

JustificationGraph justify(const GroundProgram& g, const Interpretation& m) {
    if (!is_stable(g, m)) throw NotStable();
    GroundProgram            red = reduct(g, m);
    Fixpoint                 fp(red);
    bool                     fired = false;
    std::vector<std::size_t> stage;
    auto truth = fp.run(std::vector<char>(red.rules().size(), 1), fired, &stage);

    std::vector<JustificationNode> nodes;
    nodes.reserve(m.size());
    for (auto a : m) {
        assert(truth[a]);
        const GroundRule* chosen = nullptr;
        for (const auto& r : red.rules()) {
            if (r.head != a) continue;
            bool earlier = std::all_of(r.positive.begin(), r.positive.end(),
                                       [&](AtomId b) { return truth[b] && stage[b] < stage[a]; });
            if (earlier) {
                chosen = &r;
                break;
            }
        }
        assert(chosen != nullptr);
        JustificationNode n;
        n.atom       = a;
        n.rule       = chosen->source_rule;
        n.depends_on = chosen->positive;
        std::sort(n.depends_on.begin(), n.depends_on.end());
        n.depends_on.erase(std::unique(n.depends_on.begin(), n.depends_on.end()), n.depends_on.end());
        n.rank = stage[a];
        nodes.push_back(std::move(n));
    }
    return JustificationGraph(std::move(nodes));
}

namespace {

enum class Value : signed char { open = -1, no = 0, yes = 1 };

class Search {
public:
    Search(const GroundProgram& g, std::size_t limit) : g_(g), fp_(g), limit_(limit) {
        std::vector<char> under_negation(g.atom_count(), 0);
        for (const auto& r : g.rules()) {
            for (auto a : r.negative) under_negation[a] = 1;
        }
        for (std::size_t a = 0; a != under_negation.size(); ++a) {
            if (under_negation[a]) guesses_.push_back(static_cast<AtomId>(a));
        }
    }

    SolveResult run() {
        std::vector<Value> assign(g_.atom_count(), Value::open);
        exhausted_ = true;
        descend(assign);
        return {std::move(found_), exhausted_};
    }

private:
    // Rules applicable for sure (lower) and possibly (upper) under a partial
    // assignment of the negated atoms.
    bool propagate(std::vector<Value>& assign, std::vector<char>& lower) const {
        const auto& rules = g_.rules();
        std::vector<char> certain(rules.size()), possible(rules.size());
        while (true) {
            for (std::size_t r = 0; r != rules.size(); ++r) {
                const auto& neg = rules[r].negative;
                certain[r]  = std::all_of(neg.begin(), neg.end(), [&](AtomId a) { return assign[a] == Value::no; });
                possible[r] = std::none_of(neg.begin(), neg.end(), [&](AtomId a) { return assign[a] == Value::yes; });
            }
            bool fired_lower = false, fired_upper = false;
            lower      = fp_.run(certain, fired_lower);
            auto upper = fp_.run(possible, fired_upper);
            if (fired_lower) return false;
            bool changed = false;
            for (auto a : guesses_) {
                if (assign[a] == Value::yes && !upper[a]) return false;
                if (assign[a] == Value::no && lower[a]) return false;
                if (assign[a] != Value::open) continue;
                if (lower[a]) {
                    assign[a] = Value::yes;
                    changed   = true;
                } else if (!upper[a]) {
                    assign[a] = Value::no;
                    changed   = true;
                }
            }
            if (!changed) return true;
        }
    }

    /// Returns false once the search must stop.
    bool descend(std::vector<Value> assign) {
        std::vector<char> lower;
        if (!propagate(assign, lower)) return true;
        auto open = std::find_if(guesses_.begin(), guesses_.end(), [&](AtomId a) { return assign[a] == Value::open; });
        if (open == guesses_.end()) {
            Interpretation m = from_mask(lower);
            assert(is_stable(g_, m));
            if (found_.size() == limit_) {
                exhausted_ = false;
                return false;
            }
            found_.push_back({m, justify(g_, m)});
            return true;
        }
        for (Value v : {Value::no, Value::yes}) {
            auto next  = assign;
            next[*open] = v;
            if (!descend(std::move(next))) return false;
        }
        return true;
    }

    const GroundProgram&     g_;
    Fixpoint                 fp_;
    std::size_t              limit_;
    std::vector<AtomId>      guesses_;
    std::vector<StableModel> found_;
    bool                     exhausted_ = true;
};

} // namespace

SolveResult solve(const GroundProgram& g, std::size_t limit) {
    if (limit == 0) throw std::invalid_argument("model limit must be at least 1");
    return Search(g, limit).run();
}

std::vector<StableModel> enumerate_stable_models(const GroundProgram& g, std::size_t limit) {
    return solve(g, limit).models;
}

std::vector<Interpretation> brute_force_stable_models(const GroundProgram& g) {
    const std::size_t n = g.atom_count();
    if (n > brute_force_atom_cap) {
        throw TooLarge("brute force limited to " + std::to_string(brute_force_atom_cap) + " atoms, program has " +
                       std::to_string(n));
    }
    std::vector<Interpretation> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<AtomId> atoms;
        for (std::size_t i = 0; i != n; ++i) {
            if (mask & (std::uint64_t{1} << i)) atoms.push_back(static_cast<AtomId>(i));
        }
        Interpretation m(std::move(atoms));
        if (is_stable(g, m)) out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_model_of_positive(const GroundProgram& g, const Interpretation& candidate) {
    for (const auto& r : g.rules()) {
        bool body = std::all_of(r.positive.begin(), r.positive.end(), [&](AtomId a) { return candidate.contains(a); });
        if (!body) continue;
        if (!r.head || !candidate.contains(*r.head)) return false;
    }
    return true;
}

std::string format_interpretation(const GroundProgram& g, const Interpretation& m) {
    std::vector<const Atom*> atoms;
    for (auto a : m) atoms.push_back(&g.atom(a));
    std::sort(atoms.begin(), atoms.end(), [](const Atom* a, const Atom* b) { return *a < *b; });
    std::string out;
    for (const Atom* a : atoms) {
        if (!out.empty()) out += ' ';
        out += to_string(*a);
    }
    return out;
}

} // namespace alsp
