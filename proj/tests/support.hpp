#pragma once

#include <alsp/grounder.hpp>
#include <alsp/parser.hpp>
#include <alsp/solver.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace alsp::test {

inline std::string source_path(const std::string& rel) { return std::string(ALSP_SOURCE_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Program parse(const std::string& text) { return parse_program({text, "<test>"}); }

inline GroundProgram ground(const std::string& text, GroundingOptions opts = {}) {
    return ground_program(parse(text), opts);
}

/// Atom names of an interpretation, sorted as strings.
inline std::set<std::string> names(const GroundProgram& g, const Interpretation& m) {
    std::set<std::string> out;
    for (auto a : m) out.insert(to_string(g.atom(a)));
    return out;
}

inline std::set<std::set<std::string>> model_names(const GroundProgram& g, const std::vector<StableModel>& ms) {
    std::set<std::set<std::string>> out;
    for (const auto& m : ms) out.insert(names(g, m.interpretation));
    return out;
}

/// Random ground program over atoms a0..a{n-1}.
inline GroundProgram random_ground_program(std::mt19937& rng, std::size_t max_atoms = 12, std::size_t max_rules = 20) {
    std::uniform_int_distribution<std::size_t> atoms_d(1, max_atoms), rules_d(0, max_rules), body_d(0, 3);
    std::size_t   n = atoms_d(rng);
    GroundProgram g;
    for (std::size_t i = 0; i != n; ++i) g.intern(Atom("a" + std::to_string(i), {}));
    std::uniform_int_distribution<AtomId> atom_d(0, static_cast<AtomId>(n - 1));
    std::uniform_int_distribution<int>    pct(0, 99);
    std::size_t                           rules = rules_d(rng);
    for (std::size_t r = 0; r != rules; ++r) {
        GroundRule rule;
        if (pct(rng) >= 10) rule.head = atom_d(rng);
        for (std::size_t k = body_d(rng); k > 0; --k) rule.positive.push_back(atom_d(rng));
        for (std::size_t k = body_d(rng); k > 0; --k) rule.negative.push_back(atom_d(rng));
        g.add_rule(std::move(rule));
    }
    return g;
}

/// True if some proper subset of `m` satisfies the positive program `red`.
inline bool has_smaller_model(const GroundProgram& red, const Interpretation& m) {
    const auto& atoms = m.atoms();
    const std::size_t n = atoms.size();
    for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        std::vector<AtomId> sub;
        for (std::size_t i = 0; i != n; ++i) {
            if (mask & (std::uint64_t{1} << i)) sub.push_back(atoms[i]);
        }
        if (is_model_of_positive(red, Interpretation(sub))) return true;
    }
    return false;
}

/// Dropping any single atom breaks the reduct; the cheap check for large models.
inline bool single_removal_minimal(const GroundProgram& red, const Interpretation& m) {
    for (std::size_t skip = 0; skip != m.size(); ++skip) {
        std::vector<AtomId> sub;
        for (std::size_t i = 0; i != m.size(); ++i) {
            if (i != skip) sub.push_back(m.atoms()[i]);
        }
        if (is_model_of_positive(red, Interpretation(sub))) return false;
    }
    return true;
}

/// Empty string when the justification is valid, else the first problem.
inline std::string justification_problem(const GroundProgram& g, const StableModel& sm) {
    const auto& m = sm.interpretation;
    if (sm.justification.size() != m.size()) return "node count differs from model size";
    for (const auto& n : sm.justification.nodes()) {
        if (!m.contains(n.atom)) return "node for atom outside the model";
        if (n.rule >= g.rules().size()) return "rule index out of range";
        const auto& r = g.rules()[n.rule];
        if (r.head != n.atom) return "cited rule does not derive the atom";
        for (auto b : r.positive) {
            if (!m.contains(b)) return "positive body atom outside the model";
            const auto* dep = sm.justification.find(b);
            if (!dep || dep->rank >= n.rank) return "dependency rank not smaller";
        }
        for (auto b : r.negative) {
            if (m.contains(b)) return "naf body atom inside the model";
        }
        if (n.rank == 0 && !r.positive.empty()) return "rank 0 atom with positive body";
    }
    return {};
}

} // namespace alsp::test
