#pragma once

#include <alsp/netbill.hpp>
#include <alsp/solver.hpp>

#include <string>
#include <vector>

namespace alsp::test {

struct SweepResult {
    std::string              label;
    bool                     baseline = false; // state derivable before ablation
    std::vector<std::string> ablated;           // predicates removed one at a time
    std::vector<std::string> still_derivable;   // ablations that failed to disable the state

    bool pass() const { return baseline && !ablated.empty() && still_derivable.empty(); }
};

inline bool derivable(const Program& p, const std::string& predicate) {
    auto g = ground_program(p);
    for (const auto& m : enumerate_stable_models(g)) {
        for (auto a : m.interpretation) {
            if (g.atom(a).predicate == predicate) return true;
        }
    }
    return false;
}

/// Ablates each precondition of every protocol state on the default honest
/// scenario. States without preconditions ablate their sort guards instead.
/// The optional phase only runs when the receipt never reaches the user, so
/// its baseline also drops the receipt delivery rule.
inline std::vector<SweepResult> precondition_sweep() {
    const auto scenario = netbill::default_scenario(netbill::Honesty::honest);
    const auto full     = netbill::encode_netbill(scenario);
    std::vector<SweepResult> out;
    for (const auto& st : netbill::protocol_states()) {
        SweepResult r;
        r.label      = st.label() + " " + st.predicate;
        Program base = st.ref.phase == netbill::Phase::optional ? netbill::ablate(full, "receiveUserReceipt") : full;
        r.baseline   = derivable(base, st.predicate);
        std::vector<std::string> targets;
        for (const auto& pre : st.preconditions) targets.push_back(netbill::state(pre).predicate);
        if (targets.empty()) targets = {"user", "vendor", "quotereq"};
        for (const auto& t : targets) {
            r.ablated.push_back(t);
            if (derivable(netbill::ablate(base, t), st.predicate)) r.still_derivable.push_back(t);
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace alsp::test
