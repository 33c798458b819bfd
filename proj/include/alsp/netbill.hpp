#pragma once

#include <alsp/logic.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace alsp::netbill {

class InvalidScenario : public Error {
public:
    using Error::Error;
};

enum class Honesty { honest, dishonest, free_choice };
enum class Phase { negotiation, delivery, payment, optional };

std::string_view to_string(Honesty h) noexcept;
std::string_view to_string(Phase p) noexcept;
/// Accepts "honest", "dishonest", "choice" (or "free-choice").
Honesty parse_honesty(std::string_view text);

struct Goods {
    std::string description; // GD
    std::string price;       // quote / EPO amount
    std::string content;     // the information goods themselves
};

struct Scenario {
    std::vector<std::string> users;
    std::vector<std::string> vendors;
    std::string              server;
    std::size_t              horizon        = 12;
    Honesty                  vendor_honesty = Honesty::honest;
    std::vector<Goods>       goods;
    Atom                     goal;

    std::string summary() const;
};

/// The vendor's receipt reaches the user at this tick, one per payment-phase state.
inline constexpr std::size_t receipt_arrival_tick = 10;
inline constexpr std::size_t minimum_horizon      = receipt_arrival_tick;

/// One user u1, vendor v1, server t1, goods (gd1, price10, g1), horizon 12,
/// goal attack(u1).
Scenario default_scenario(Honesty honesty);

/// Throws InvalidScenario. `full_protocol` additionally requires the
/// horizon to cover the payment phase.
void validate(const Scenario& s, bool full_protocol = true);

/// Sort and pairing facts for the scenario's agents, goods, keys and clock.
Program encode_sort_facts(const Scenario& s);
/// The rule schemas realising every state of one protocol phase.
Program encode_phase(Phase phase, const Scenario& s);
/// Key-forwarding behaviour of honest, dishonest and undecided vendors.
Program encode_honesty_axioms();
/// Decryption check and the goods-atomicity attack goal.
Program encode_attack_rules();
/// Everything above, in that order.
Program encode_netbill(const Scenario& s);

/// encode_netbill as an annotated .alsp file; parses back to the same program.
std::string render_netbill_file(const Scenario& s);

/// Scenario as JSON text and back; unknown keys are rejected.
std::string scenario_to_json(const Scenario& s);
Scenario    scenario_from_json(std::string_view text);
Scenario    load_scenario(const std::string& path);

/// A protocol state: its phase, its position in the phase, the predicate
/// its rule derives, and the states it requires.
struct StateRef {
    Phase       phase;
    std::size_t number;
    friend bool operator==(const StateRef&, const StateRef&) = default;
};

struct ProtocolState {
    StateRef              ref;
    std::string           predicate;
    std::string           description;
    std::vector<StateRef> preconditions;

    std::string label() const; // e.g. "P/P 4"
};

/// All 27 states of the four phases in protocol order.
const std::vector<ProtocolState>& protocol_states();
const ProtocolState&              state(StateRef ref);

/// Removes every rule deriving `predicate`, which disables the state.
Program ablate(const Program& p, std::string_view predicate);

} // namespace alsp::netbill
