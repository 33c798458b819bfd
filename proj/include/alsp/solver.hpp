#pragma once

#include <alsp/grounder.hpp>

#include <compare>
#include <limits>
#include <vector>

namespace alsp {

class NotPositiveProgram : public Error {
public:
    NotPositiveProgram() : Error("program contains negation-as-failure literals") {}
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class NotStable : public Error {
public:
    NotStable() : Error("interpretation is not a stable model of the program") {}
};

/// A set of ground atoms, kept sorted by id.
class Interpretation {
public:
    Interpretation() = default;
    explicit Interpretation(std::vector<AtomId> atoms);

    bool        contains(AtomId a) const noexcept;
    std::size_t size() const noexcept { return atoms_.size(); }
    bool        empty() const noexcept { return atoms_.empty(); }
    auto        begin() const noexcept { return atoms_.begin(); }
    auto        end() const noexcept { return atoms_.end(); }
    const std::vector<AtomId>& atoms() const noexcept { return atoms_; }

    friend bool operator==(const Interpretation&, const Interpretation&) = default;
    friend auto operator<=>(const Interpretation&, const Interpretation&) = default;

private:
    std::vector<AtomId> atoms_;
};

/// Gelfond-Lifschitz reduct: drops every rule with `not a` for a in `m`,
/// then strips the remaining naf literals. `source_rule` of each kept rule
/// is its index in `g`.
GroundProgram reduct(const GroundProgram& g, const Interpretation& m);

struct LeastModel {
    Interpretation model;
    bool           consistent = true; // false if an integrity constraint fires
};

/// Least Herbrand model of a positive program. Throws NotPositiveProgram.
LeastModel least_model(const GroundProgram& g);

bool is_stable(const GroundProgram& g, const Interpretation& m);

struct JustificationNode {
    AtomId              atom = 0;
    std::size_t         rule = 0; // index of the deriving rule in the ground program
    std::vector<AtomId> depends_on;
    std::size_t         rank = 0; // fixpoint stage; facts are 0
};

class JustificationGraph {
public:
    JustificationGraph() = default;
    explicit JustificationGraph(std::vector<JustificationNode> nodes);

    const std::vector<JustificationNode>& nodes() const noexcept { return nodes_; }
    const JustificationNode*              find(AtomId a) const noexcept;
    std::size_t                           size() const noexcept { return nodes_.size(); }

private:
    std::vector<JustificationNode> nodes_; // sorted by atom
};

/// Derivation of every atom of a stable model. Throws NotStable.
JustificationGraph justify(const GroundProgram& g, const Interpretation& m);

struct StableModel {
    Interpretation     interpretation;
    JustificationGraph justification;
};

inline constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

struct SolveResult {
    std::vector<StableModel> models;
    bool                     exhausted = true; // search space fully explored
};

/// Up to `limit` stable models, depth-first: branch on the lowest-id open
/// atom that occurs under negation, false first. `exhausted` is true when
/// no further model exists beyond those returned.
SolveResult solve(const GroundProgram& g, std::size_t limit = unlimited);

std::vector<StableModel> enumerate_stable_models(const GroundProgram& g, std::size_t limit = unlimited);

inline constexpr std::size_t brute_force_atom_cap = 24;

/// Test oracle: is_stable over every subset of the atom base.
/// Throws TooLarge above brute_force_atom_cap atoms.
std::vector<Interpretation> brute_force_stable_models(const GroundProgram& g);

/// True if `candidate` satisfies every rule of the positive program `g`.
bool is_model_of_positive(const GroundProgram& g, const Interpretation& candidate);

std::string format_interpretation(const GroundProgram& g, const Interpretation& m);

} // namespace alsp
