#include <alsp/netbill.hpp>

#include <alsp/parser.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace alsp::netbill {

namespace {

// Negotiation: the price quote exchange. Carries no security content but
// gates every later phase through acceptsTransaction.
constexpr const char* negotiation_rules = R"(
% N/P 1: U -> V price quote request
sendQuoterequest(U, V, QuoteRequest) :- user(U), vendor(V), quotereq(QuoteRequest).
% N/P 2: V receives the quote request
receivedQuoterequest(V, QuoteRequest) :- sendQuoterequest(U, V, QuoteRequest),
    vendor(V), user(U), quotereq(QuoteRequest).
% N/P 3: V synthesizes a price quote
synthesizePriceQuote(V, Price) :- receivedQuoterequest(V, QuoteRequest),
    vendor(V), priceValue(Price), quotereq(QuoteRequest).
% N/P 4: V -> U quote
sendQuote(V, U, Price) :- synthesizePriceQuote(V, Price), receivedQuoterequest(V, QuoteRequest),
    user(U), vendor(V), priceValue(Price).
% N/P 5: U receives the quote
receiveQuote(U, V, Price) :- sendQuote(V, U, Price), user(U), vendor(V), priceValue(Price).
% N/P 6: U accepts the transaction
acceptsTransaction(U, V) :- receiveQuote(U, V, Price), user(U), vendor(V), priceValue(Price).
)";

constexpr const char* delivery_rules = R"(
% D/P 1: U -> V purchase request
purchaseRequest(U, V, GD) :- acceptsTransaction(U, V), user(U), vendor(V), goodsdescr(GD).
% D/P 2: V receives the purchase request
receivePurchaseRequest(V, U, GD) :- purchaseRequest(U, V, GD), vendor(V), user(U), goodsdescr(GD).
% D/P 3: V stores the purchase request
storePurchaseRequest(V, U, GD) :- receivePurchaseRequest(V, U, GD), vendor(V), user(U), goodsdescr(GD).
% D/P 4: V generates a random key
generatesKey(V, K) :- storePurchaseRequest(V, U, GD), vendor(V), goodsKey(GD, K), key(K).
% D/P 5: V encrypts the ordered goods
vendorEncryptsGoods(V, U, encryptGoods(K, Goods)) :- storePurchaseRequest(V, U, GD), generatesKey(V, K),
    goodsKey(GD, K), describesGoods(GD, Goods), goods(Goods).
% D/P 6: V hashes the encrypted goods
vendorGeneratesHash(V, U, Hash) :- vendorEncryptsGoods(V, U, EncGood), encryptedGoodHashPair(EncGood, Hash),
    vendor(V), user(U).
% D/P 7: V -> U encrypted goods and hash
sendEncryptedGoods(V, U, EncGood, Hash) :- vendorEncryptsGoods(V, U, EncGood), vendorGeneratesHash(V, U, Hash),
    encryptedGoodHashPair(EncGood, Hash), vendor(V), user(U).
% D/P 8: U receives the encrypted goods and the hash
receiveEncryptedGoods(U, V, EncGood, Hash) :- sendEncryptedGoods(V, U, EncGood, Hash), user(U), vendor(V).
userKnowsEncryptedGoods(U, EncGood) :- receiveEncryptedGoods(U, V, EncGood, Hash).
userKnowsHash(U, Hash) :- receiveEncryptedGoods(U, V, EncGood, Hash).
% D/P 9: U compares the hash with the encrypted goods
comparesHash(U) :- userKnowsEncryptedGoods(U, EncGood), userKnowsHash(U, Hash),
    encryptedGoodHashPair(EncGood, Hash), user(U).
)";

constexpr const char* payment_rules = R"(
% P/P 1: U generates the electronic payment order
electronicPaymentOrder(sk(U), GD, Price, hash(f, encryptGoods(K, Goods))) :- comparesHash(U),
    acceptsTransaction(U, V),
    userKnowsEncryptedGoods(U, encryptGoods(K, Goods)),
    userKnowsHash(U, hash(f, encryptGoods(K, Goods))),
    describesGoods(GD, Goods), goodsDescriptionQuotePair(GD, Price).
% P/P 2: U -> V EPO
sendEPO(U, V, GD) :- electronicPaymentOrder(sk(U), GD, Price, Hash), user(U), vendor(V).
% P/P 3: V receives the EPO
receiveEPO(V, U, GD) :- sendEPO(U, V, GD), vendor(V), user(U), goodsdescr(GD).
% P/P 4: V signs EPO + key; the key is the encryption key only if V forwards it faithfully
vendorSignsEpoKey(V, GD, K) :- receiveEPO(V, U, GD), receivePurchaseRequest(V, U, GD),
    goodsKey(GD, K), sameKeyForwarded(V, K).
vendorSignsEpoKey(V, GD, Bogus) :- receiveEPO(V, U, GD), receivePurchaseRequest(V, U, GD),
    goodsKey(GD, K), differentKeyForwarded(V, K), bogusKey(Bogus).
% P/P 5: V -> T Sv(EPO, Key)
sendSignedEpoKey(V, T, K) :- vendorSignsEpoKey(V, GD, K), vendor(V), server(T).
% P/P 6: T receives Sv(EPO, Key)
serverReceivesSigned(T, V, K) :- sendSignedEpoKey(V, T, K), server(T), vendor(V), key(K).
% P/P 7: T signs the key
serverSignsKey(T, K) :- serverReceivesSigned(T, V, K), server(T), key(K).
% P/P 8: T -> V ST(receipt, Key); the signed receipt stands for the credit to V
serverSendsReceipt(T, V, receipt(sk(T), K, computedReceipt(R))) :- serverReceivesSigned(T, V, K),
    serverSignsKey(T, K), receiptValue(R).
serverKnowsReceipt(T, Receipt) :- serverSendsReceipt(T, V, Receipt).
% P/P 9: V receives the signed key from T
vendorReceivesSignedKey(V, T, Receipt) :- serverSendsReceipt(T, V, Receipt), vendor(V), server(T).
% P/P 10: V -> U ST(receipt, Key)
vendorForwardsReceipt(V, U, Receipt) :- vendorReceivesSignedKey(V, T, Receipt), vendor(V), user(U).
receiveUserReceipt(U, Receipt, Time) :- vendorForwardsReceipt(V, U, Receipt), receiptDue(Due), notBefore(Time, Due).
knowsReceipt(U, sk(T), K, computedReceipt(R)) :- receiveUserReceipt(U, receipt(sk(T), K, computedReceipt(R)), Time).
)";

constexpr const char* optional_rules = R"(
% O/P 1: U -> T transaction enquiry when the receipt has not arrived by the deadline
transactionEnquiry(U, T, transactionenquiry, Time) :-
    vendorForwardsReceipt(V, U, receipt(sk(T), K, computedReceipt(R))), deadline(Time),
    not receiveUserReceipt(U, receipt(sk(T), K, computedReceipt(R)), Time).
% O/P 2: T -> U ST(receipt, Key)
serverResendsReceipt(T, U, Receipt) :- transactionEnquiry(U, T, transactionenquiry, Time),
    serverKnowsReceipt(T, Receipt), server(T), user(U).
knowsReceipt(U, sk(T), K, computedReceipt(R)) :- serverResendsReceipt(T, U, receipt(sk(T), K, computedReceipt(R))).
)";

// An undecided vendor (neither honest nor dishonest) chooses freely.
constexpr const char* honesty_rules = R"(
sameKeyForwarded(V, K) :- honest(V), generatesKey(V, K).
differentKeyForwarded(V, K) :- dishonest(V), generatesKey(V, K).
sameKeyForwarded(V, K) :- generatesKey(V, K), not differentKeyForwarded(V, K), not honest(V), not dishonest(V).
differentKeyForwarded(V, K) :- generatesKey(V, K), not sameKeyForwarded(V, K), not honest(V), not dishonest(V).
)";

constexpr const char* attack_rules = R"(
% the key in the server's receipt must be the key the goods were encrypted with
userSuccessfullDecryption(U, Goods) :- knowsReceipt(U, sk(T), K1, computedReceipt(R)),
    userKnowsEncryptedGoods(U, encryptGoods(K, Goods)), K1 = K.
% paid (EPO issued, debit receipt held) but cannot decrypt
attack(U) :- electronicPaymentOrder(sk(U), GD, Price, hash(f, encryptGoods(K, Goods))),
    knowsReceipt(U, sk(T), K1, computedReceipt(R)),
    not userSuccessfullDecryption(U, Goods).
)";

constexpr const char* hash_function = "f";
constexpr const char* bogus_key     = "kbogus";
constexpr const char* quote_request = "qr1";
constexpr const char* receipt_value = "r1";

Program parse_fixed(const char* text, const char* label) {
    return parse_program({text, std::string("netbill:") + label});
}

Term c(const std::string& name) { return Term::constant(name); }

Rule fact(std::string pred, std::vector<Term> args) { return Rule::fact(Atom(std::move(pred), std::move(args))); }

std::string tick(std::size_t i) { return "tick" + std::to_string(i); }
std::string key_name(std::size_t goods_index) { return "k" + std::to_string(goods_index + 1); }

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

} // namespace

std::string_view to_string(Honesty h) noexcept {
    switch (h) {
        case Honesty::honest:      return "honest";
        case Honesty::dishonest:   return "dishonest";
        case Honesty::free_choice: return "choice";
    }
    return "honest";
}

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::negotiation: return "negotiation";
        case Phase::delivery:    return "delivery";
        case Phase::payment:     return "payment";
        case Phase::optional:    return "optional";
    }
    return "negotiation";
}

Honesty parse_honesty(std::string_view text) {
    if (text == "honest") return Honesty::honest;
    if (text == "dishonest") return Honesty::dishonest;
    if (text == "choice" || text == "free-choice") return Honesty::free_choice;
    throw InvalidScenario("unknown vendor honesty '" + std::string(text) + "' (expected honest, dishonest or choice)");
}

std::string Scenario::summary() const {
    return "users=[" + join(users) + "] vendors=[" + join(vendors) + "] server=" + server +
           " horizon=" + std::to_string(horizon) + " honesty=" + std::string(to_string(vendor_honesty));
}

Scenario default_scenario(Honesty honesty) {
    Scenario s;
    s.users          = {"u1"};
    s.vendors        = {"v1"};
    s.server         = "t1";
    s.horizon        = 12;
    s.vendor_honesty = honesty;
    s.goods          = {{"gd1", "price10", "g1"}};
    s.goal           = Atom("attack", {c("u1")});
    return s;
}

void validate(const Scenario& s, bool full_protocol) {
    auto fail = [](const std::string& m) { throw InvalidScenario("invalid scenario: " + m); };
    if (s.users.empty()) fail("at least one user is required");
    if (s.vendors.empty()) fail("at least one vendor is required");
    if (s.server.empty()) fail("exactly one server is required");
    if (s.goods.empty()) fail("at least one goods item is required");
    std::set<std::string> agents;
    auto add_agent = [&](const std::string& name, const char* role) {
        if (!is_constant_name(name)) fail(std::string(role) + " name '" + name + "' is not a valid constant");
        if (!agents.insert(name).second) fail("agent '" + name + "' appears in more than one role");
    };
    for (const auto& u : s.users) add_agent(u, "user");
    for (const auto& v : s.vendors) add_agent(v, "vendor");
    add_agent(s.server, "server");
    for (const auto& g : s.goods) {
        for (const auto* name : {&g.description, &g.price, &g.content}) {
            if (!is_constant_name(*name)) fail("goods field '" + *name + "' is not a valid constant");
        }
    }
    if (full_protocol && s.horizon < minimum_horizon) {
        fail("horizon " + std::to_string(s.horizon) + " is shorter than the " + std::to_string(minimum_horizon) +
             " payment-phase states");
    }
    if (!s.goal.is_ground() || s.goal.is_equality() || !is_constant_name(s.goal.predicate)) {
        fail("goal must be a ground atom");
    }
}

Program encode_sort_facts(const Scenario& s) {
    validate(s, false);
    Program p;
    for (const auto& u : s.users) p.add(fact("user", {c(u)}));
    for (const auto& v : s.vendors) p.add(fact("vendor", {c(v)}));
    p.add(fact("server", {c(s.server)}));
    p.add(fact("quotereq", {c(quote_request)}));
    std::set<std::string> descriptions, prices, contents;
    for (std::size_t i = 0; i != s.goods.size(); ++i) {
        const auto& g = s.goods[i];
        if (descriptions.insert(g.description).second) p.add(fact("goodsdescr", {c(g.description)}));
        if (prices.insert(g.price).second) p.add(fact("priceValue", {c(g.price)}));
        if (contents.insert(g.content).second) p.add(fact("goods", {c(g.content)}));
        p.add(fact("goodsDescriptionQuotePair", {c(g.description), c(g.price)}));
        p.add(fact("describesGoods", {c(g.description), c(g.content)}));
        p.add(fact("key", {c(key_name(i))}));
        p.add(fact("goodsKey", {c(g.description), c(key_name(i))}));
        Term enc  = Term::compound("encryptGoods", {c(key_name(i)), c(g.content)});
        Term hash = Term::compound("hash", {c(hash_function), enc});
        p.add(fact("encryptedGoodHashPair", {enc, hash}));
    }
    p.add(fact("key", {c(bogus_key)}));
    p.add(fact("bogusKey", {c(bogus_key)}));
    p.add(fact("receiptValue", {c(receipt_value)}));
    for (std::size_t t = 1; t <= s.horizon; ++t) p.add(fact("time", {c(tick(t))}));
    if (s.horizon >= 1) p.add(fact("deadline", {c(tick(s.horizon))}));
    p.add(fact("receiptDue", {c(tick(receipt_arrival_tick))}));
    for (std::size_t t = receipt_arrival_tick; t <= s.horizon; ++t) {
        p.add(fact("notBefore", {c(tick(t)), c(tick(receipt_arrival_tick))}));
    }
    for (const auto& v : s.vendors) {
        switch (s.vendor_honesty) {
            case Honesty::honest:      p.add(fact("honest", {c(v)})); break;
            case Honesty::dishonest:   p.add(fact("dishonest", {c(v)})); break;
            case Honesty::free_choice: break;
        }
    }
    return p;
}

Program encode_phase(Phase phase, const Scenario& s) {
    validate(s, false);
    switch (phase) {
        case Phase::negotiation: return parse_fixed(negotiation_rules, "negotiation");
        case Phase::delivery:    return parse_fixed(delivery_rules, "delivery");
        case Phase::payment:     return parse_fixed(payment_rules, "payment");
        case Phase::optional:    return parse_fixed(optional_rules, "optional");
    }
    return {};
}

Program encode_honesty_axioms() { return parse_fixed(honesty_rules, "honesty"); }

Program encode_attack_rules() { return parse_fixed(attack_rules, "attack"); }

Program encode_netbill(const Scenario& s) {
    validate(s, true);
    Program p = encode_sort_facts(s);
    for (auto phase : {Phase::negotiation, Phase::delivery, Phase::payment, Phase::optional}) {
        p.append(encode_phase(phase, s));
    }
    p.append(encode_honesty_axioms());
    p.append(encode_attack_rules());
    return p;
}

std::string render_netbill_file(const Scenario& s) {
    validate(s, true);
    std::string out;
    out += "% NetBill goods-atomicity model\n";
    out += "% scenario: " + s.summary() + "\n";
    out += "% goal: " + alsp::to_string(s.goal) + "\n";
    auto section = [&](const std::string& title, const Program& p) {
        out += "\n% --- " + title + " ---\n";
        out += format_program(p);
    };
    section("sorts and pairings", encode_sort_facts(s));
    section("negotiation phase", encode_phase(Phase::negotiation, s));
    section("delivery phase", encode_phase(Phase::delivery, s));
    section("payment phase", encode_phase(Phase::payment, s));
    section("optional phase", encode_phase(Phase::optional, s));
    section("vendor honesty", encode_honesty_axioms());
    section("decryption and attack goal", encode_attack_rules());
    return out;
}

std::string scenario_to_json(const Scenario& s) {
    nlohmann::ordered_json j;
    j["users"]   = s.users;
    j["vendors"] = s.vendors;
    j["server"]  = s.server;
    j["horizon"] = s.horizon;
    j["honesty"] = std::string(to_string(s.vendor_honesty));
    j["goods"]   = nlohmann::ordered_json::array();
    for (const auto& g : s.goods) {
        j["goods"].push_back({{"description", g.description}, {"price", g.price}, {"content", g.content}});
    }
    j["goal"] = alsp::to_string(s.goal);
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidScenario(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidScenario("scenario must be a JSON object");
    static const std::set<std::string> known = {"users", "vendors", "server", "horizon", "honesty", "goods", "goal"};
    for (const auto& [k, _] : j.items()) {
        if (!known.count(k)) throw InvalidScenario("unknown scenario key '" + k + "'");
    }
    Scenario s = default_scenario(Honesty::honest);
    try {
        if (j.contains("users")) s.users = j["users"].get<std::vector<std::string>>();
        if (j.contains("vendors")) s.vendors = j["vendors"].get<std::vector<std::string>>();
        if (j.contains("server")) s.server = j["server"].get<std::string>();
        if (j.contains("horizon")) s.horizon = j["horizon"].get<std::size_t>();
        if (j.contains("honesty")) s.vendor_honesty = parse_honesty(j["honesty"].get<std::string>());
        if (j.contains("goods")) {
            s.goods.clear();
            for (const auto& g : j["goods"]) {
                s.goods.push_back({g.at("description").get<std::string>(), g.at("price").get<std::string>(),
                                   g.at("content").get<std::string>()});
            }
        }
        if (j.contains("goal")) {
            s.goal = parse_ground_atom(j["goal"].get<std::string>(), "scenario goal");
        } else {
            s.goal = Atom("attack", {c(s.users.empty() ? "u1" : s.users.front())});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidScenario(std::string("malformed scenario: ") + e.what());
    }
    validate(s, true);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::string ProtocolState::label() const {
    static constexpr const char* tags[] = {"N/P", "D/P", "P/P", "O/P"};
    return std::string(tags[static_cast<int>(ref.phase)]) + ' ' + std::to_string(ref.number);
}

const std::vector<ProtocolState>& protocol_states() {
    using P = Phase;
    static const std::vector<ProtocolState> states = {
        {{P::negotiation, 1}, "sendQuoterequest", "U -> V: price quote request", {}},
        {{P::negotiation, 2}, "receivedQuoterequest", "V receives the price quote request", {{P::negotiation, 1}}},
        {{P::negotiation, 3}, "synthesizePriceQuote", "V synthesizes a price quote", {{P::negotiation, 2}}},
        {{P::negotiation, 4}, "sendQuote", "V -> U: quote", {{P::negotiation, 2}, {P::negotiation, 3}}},
        {{P::negotiation, 5}, "receiveQuote", "U receives the quote from V", {{P::negotiation, 4}}},
        {{P::negotiation, 6}, "acceptsTransaction", "U accepts the transaction with V", {{P::negotiation, 5}}},
        {{P::delivery, 1}, "purchaseRequest", "U -> V: purchase request", {{P::negotiation, 6}}},
        {{P::delivery, 2}, "receivePurchaseRequest", "V receives the purchase request", {{P::delivery, 1}}},
        {{P::delivery, 3}, "storePurchaseRequest", "V stores the purchase request", {{P::delivery, 2}}},
        {{P::delivery, 4}, "generatesKey", "V generates a random key", {{P::delivery, 3}}},
        {{P::delivery, 5}, "vendorEncryptsGoods", "V encrypts the ordered goods", {{P::delivery, 3}, {P::delivery, 4}}},
        {{P::delivery, 6}, "vendorGeneratesHash", "V hashes the encrypted goods", {{P::delivery, 5}}},
        {{P::delivery, 7}, "sendEncryptedGoods", "V -> U: encrypted goods and hash", {{P::delivery, 5}, {P::delivery, 6}}},
        {{P::delivery, 8}, "receiveEncryptedGoods", "U receives the encrypted goods and hash", {{P::delivery, 7}}},
        {{P::delivery, 9}, "comparesHash", "U compares the hash with the encrypted goods", {{P::delivery, 8}}},
        {{P::payment, 1}, "electronicPaymentOrder", "U generates the EPO", {{P::negotiation, 6}, {P::delivery, 9}}},
        {{P::payment, 2}, "sendEPO", "U -> V: EPO", {{P::payment, 1}}},
        {{P::payment, 3}, "receiveEPO", "V receives the EPO from U", {{P::payment, 2}}},
        {{P::payment, 4}, "vendorSignsEpoKey", "V signs EPO + key", {{P::payment, 3}, {P::delivery, 2}}},
        {{P::payment, 5}, "sendSignedEpoKey", "V -> T: Sv(EPO, key)", {{P::payment, 4}}},
        {{P::payment, 6}, "serverReceivesSigned", "T receives Sv(EPO, key)", {{P::payment, 5}}},
        {{P::payment, 7}, "serverSignsKey", "T signs the key", {{P::payment, 6}}},
        {{P::payment, 8}, "serverSendsReceipt", "T -> V: ST(receipt, key)", {{P::payment, 6}, {P::payment, 7}}},
        {{P::payment, 9}, "vendorReceivesSignedKey", "V receives the signed key from T", {{P::payment, 8}}},
        {{P::payment, 10}, "vendorForwardsReceipt", "V -> U: ST(receipt, key)", {{P::payment, 9}}},
        {{P::optional, 1}, "transactionEnquiry", "U -> T: transaction enquiry", {{P::payment, 10}}},
        {{P::optional, 2}, "serverResendsReceipt", "T -> U: ST(receipt, key)", {{P::optional, 1}}},
    };
    return states;
}

const ProtocolState& state(StateRef ref) {
    const auto& all = protocol_states();
    auto it = std::find_if(all.begin(), all.end(), [&](const ProtocolState& s) { return s.ref == ref; });
    if (it == all.end()) throw Error("no protocol state " + std::string(to_string(ref.phase)) + " " + std::to_string(ref.number));
    return *it;
}

Program ablate(const Program& p, std::string_view predicate) {
    Program out;
    for (const auto& r : p.rules) {
        if (r.head && r.head->predicate == predicate) continue;
        out.add(r);
    }
    return out;
}

} // namespace alsp::netbill
