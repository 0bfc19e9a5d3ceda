// Copyright 2026 the xchainsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xchain/scenario.hpp"

namespace xchain::cli {

namespace {

// Four chains, one nested call graph: funcA on chain 1 calls funcB on
// chain 2, which reads funcC on chain 3 through a subordinate view and
// updates funcD on chain 4.
constexpr const char* kHappyNested = R"json({
  "name": "happy_nested",
  "description": "four-chain nested transaction with a subordinate view; commits everywhere",
  "ticks_per_block": 10,
  "timer_extra_max": 20,
  "message_delay": [1, 2],
  "max_ticks": 3000,
  "chains": [
    {"id": 1, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 2, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 3, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 4, "validators": 3, "threshold": 2, "mining_delay": 3}
  ],
  "contracts": [
    {"chain": 1, "address": 11, "lockable": true, "body": "con_a",
     "storage": {"100": 2, "101": 22}},
    {"chain": 2, "address": 22, "lockable": true, "body": "con_b",
     "storage": {"0": 2, "1": 4, "100": 3, "101": 33, "102": 4, "103": 44}},
    {"chain": 3, "address": 33, "lockable": true, "body": "con_c", "storage": {"0": 5}},
    {"chain": 4, "address": 44, "lockable": true, "body": "con_d", "storage": {}}
  ],
  "accounts": [{"name": "alice", "address": 901}],
  "multichain_nodes": [
    {"owner": "enterprise1", "members": {"1": 0, "2": 0, "3": 0, "4": 0}}
  ],
  "submissions": [
    {"at_tick": 0, "account": "alice", "multichain_node": "enterprise1",
     "chain": 1, "contract": 11, "function": "funcA", "args": [1], "timeout_blocks": 30}
  ],
  "faults": []
})json";

constexpr const char* kTravelAgentSingle = R"json({
  "name": "travel_agent_single",
  "description": "one travel agent books a hotel room and a train seat atomically",
  "ticks_per_block": 10,
  "timer_extra_max": 20,
  "message_delay": [1, 2],
  "max_ticks": 3000,
  "chains": [
    {"id": 1, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 2, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 3, "validators": 3, "threshold": 2, "mining_delay": 3}
  ],
  "contracts": [
    {"chain": 1, "address": 201, "lockable": true, "body": "travel_agent",
     "storage": {"100": 2, "101": 211, "102": 212, "103": 3, "104": 311, "105": 312,
                  "106": 901, "107": 950, "108": 951}},
    {"chain": 2, "address": 211, "lockable": true, "body": "reservation", "storage": {}},
    {"chain": 2, "address": 212, "lockable": true, "body": "token",
     "storage": {"901": 100, "950": 0}},
    {"chain": 3, "address": 311, "lockable": true, "body": "reservation", "storage": {}},
    {"chain": 3, "address": 312, "lockable": true, "body": "token",
     "storage": {"901": 100, "951": 0}}
  ],
  "accounts": [{"name": "agent_a", "address": 901}],
  "multichain_nodes": [
    {"owner": "agency_a", "members": {"1": 0, "2": 0, "3": 0}}
  ],
  "submissions": [
    {"at_tick": 0, "account": "agent_a", "multichain_node": "agency_a",
     "chain": 1, "contract": 201, "function": "book_trip", "args": [7, 3, 5, 4],
     "timeout_blocks": 40}
  ],
  "faults": []
})json";

// The second agent hits the contracts while the first agent's booking still
// holds the locks: its transaction fails on the lock check and is ignored.
constexpr const char* kTravelAgentTwoAgents = R"json({
  "name": "travel_agent_two_agents",
  "description": "two agents race for monolithic hotel/train contracts; the second hits the locks",
  "ticks_per_block": 10,
  "timer_extra_max": 20,
  "message_delay": [1, 2],
  "max_ticks": 3000,
  "chains": [
    {"id": 1, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 2, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 3, "validators": 3, "threshold": 2, "mining_delay": 3}
  ],
  "contracts": [
    {"chain": 1, "address": 201, "lockable": true, "body": "travel_agent",
     "storage": {"100": 2, "101": 211, "102": 212, "103": 3, "104": 311, "105": 312,
                  "106": 901, "107": 950, "108": 951}},
    {"chain": 1, "address": 202, "lockable": true, "body": "travel_agent",
     "storage": {"100": 2, "101": 211, "102": 212, "103": 3, "104": 311, "105": 312,
                  "106": 902, "107": 950, "108": 951}},
    {"chain": 2, "address": 211, "lockable": true, "body": "reservation", "storage": {}},
    {"chain": 2, "address": 212, "lockable": true, "body": "token",
     "storage": {"901": 100, "902": 100, "950": 0}},
    {"chain": 3, "address": 311, "lockable": true, "body": "reservation", "storage": {}},
    {"chain": 3, "address": 312, "lockable": true, "body": "token",
     "storage": {"901": 100, "902": 100, "951": 0}}
  ],
  "accounts": [
    {"name": "agent_a", "address": 901},
    {"name": "agent_b", "address": 902}
  ],
  "multichain_nodes": [
    {"owner": "agency_a", "members": {"1": 0, "2": 0, "3": 0}},
    {"owner": "agency_b", "members": {"1": 1, "2": 1, "3": 1}}
  ],
  "submissions": [
    {"at_tick": 0, "account": "agent_a", "multichain_node": "agency_a",
     "chain": 1, "contract": 201, "function": "book_trip", "args": [7, 3, 5, 4],
     "timeout_blocks": 40},
    {"at_tick": 2, "account": "agent_b", "multichain_node": "agency_b",
     "chain": 1, "contract": 202, "function": "book_trip", "args": [8, 4, 5, 4],
     "timeout_blocks": 40}
  ],
  "faults": []
})json";

// Router + payment-slot refactoring: the nonlockable router picks unlocked
// slots, so both payments run in parallel. Fixed one-tick delays keep the
// slot choices stable between construction and trial execution.
constexpr const char* kErc20RouterTwoAgents = R"json({
  "name": "erc20_router_two_agents",
  "description": "two agents pay in parallel through a nonlockable router and payment slots",
  "ticks_per_block": 10,
  "timer_extra_max": 20,
  "message_delay": [1, 1],
  "max_ticks": 3000,
  "chains": [
    {"id": 1, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 2, "validators": 3, "threshold": 2, "mining_delay": 3}
  ],
  "contracts": [
    {"chain": 1, "address": 231, "lockable": true, "body": "erc20_agent",
     "storage": {"100": 2, "101": 220, "102": 901, "103": 950}},
    {"chain": 1, "address": 232, "lockable": true, "body": "erc20_agent",
     "storage": {"100": 2, "101": 220, "102": 902, "103": 950}},
    {"chain": 2, "address": 220, "lockable": false, "body": "erc20_router",
     "storage": {"1999": 6, "2000": 221, "2001": 222, "2002": 223, "2003": 224,
                  "2004": 225, "2005": 226}},
    {"chain": 2, "address": 221, "lockable": true, "body": "payment_slot",
     "storage": {"0": 901, "1": 50}},
    {"chain": 2, "address": 222, "lockable": true, "body": "payment_slot",
     "storage": {"0": 901, "1": 20}},
    {"chain": 2, "address": 223, "lockable": true, "body": "payment_slot",
     "storage": {"0": 902, "1": 50}},
    {"chain": 2, "address": 224, "lockable": true, "body": "payment_slot",
     "storage": {"0": 902, "1": 20}},
    {"chain": 2, "address": 225, "lockable": true, "body": "payment_slot",
     "storage": {"0": 950, "1": 0}},
    {"chain": 2, "address": 226, "lockable": true, "body": "payment_slot",
     "storage": {"0": 950, "1": 0}}
  ],
  "accounts": [
    {"name": "agent_a", "address": 901},
    {"name": "agent_b", "address": 902}
  ],
  "multichain_nodes": [
    {"owner": "agency_a", "members": {"1": 0, "2": 0}},
    {"owner": "agency_b", "members": {"1": 1, "2": 1}}
  ],
  "submissions": [
    {"at_tick": 0, "account": "agent_a", "multichain_node": "agency_a",
     "chain": 1, "contract": 231, "function": "pay", "args": [10], "timeout_blocks": 40},
    {"at_tick": 8, "account": "agent_b", "multichain_node": "agency_b",
     "chain": 1, "contract": 232, "function": "pay", "args": [10], "timeout_blocks": 40}
  ],
  "faults": []
})json";

// con_x.f1 on chain 1 calls con_y.f2 on chain 2, which calls back into
// con_x: the contract call graph repeats con_x, so the nested transaction
// hits the lock held by its own root and the whole transaction aborts.
constexpr const char* kRepeatedContractAbort = R"json({
  "name": "repeated_contract_abort",
  "description": "a call graph revisiting a contract aborts on its own lock",
  "ticks_per_block": 10,
  "timer_extra_max": 20,
  "message_delay": [1, 2],
  "max_ticks": 3000,
  "chains": [
    {"id": 1, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 2, "validators": 3, "threshold": 2, "mining_delay": 3}
  ],
  "contracts": [
    {"chain": 1, "address": 110, "lockable": true, "body": "con_x",
     "storage": {"100": 2, "101": 120}},
    {"chain": 2, "address": 120, "lockable": true, "body": "con_y",
     "storage": {"100": 1, "101": 110}}
  ],
  "accounts": [{"name": "alice", "address": 901}],
  "multichain_nodes": [{"owner": "enterprise1", "members": {"1": 0, "2": 0}}],
  "submissions": [
    {"at_tick": 0, "account": "alice", "multichain_node": "enterprise1",
     "chain": 1, "contract": 110, "function": "f1", "args": [5], "timeout_blocks": 30}
  ],
  "faults": []
})json";

// Guards g0..g3 authenticate (from address, from chain, originating chain).
// Admin transactions rewrite one authorized constant on g1..g3 while the
// caller transactions are in flight: their subordinates were built against
// the old constants, so the trial-time require fails and they are ignored.
// The untouched g0 call commits. Slow dispatch delivery guarantees the
// admin updates land first.
constexpr const char* kAuthChecks = R"json({
  "name": "auth_checks",
  "description": "precompile-field authentication: one matching call commits, three altered ones abort",
  "ticks_per_block": 10,
  "timer_extra_max": 20,
  "message_delay": [8, 10],
  "max_ticks": 3000,
  "chains": [
    {"id": 1, "validators": 3, "threshold": 2, "mining_delay": 3},
    {"id": 2, "validators": 3, "threshold": 2, "mining_delay": 3}
  ],
  "contracts": [
    {"chain": 1, "address": 130, "lockable": true, "body": "auth_caller",
     "storage": {"100": 2, "101": 140}},
    {"chain": 1, "address": 131, "lockable": true, "body": "auth_caller",
     "storage": {"100": 2, "101": 141}},
    {"chain": 1, "address": 132, "lockable": true, "body": "auth_caller",
     "storage": {"100": 2, "101": 142}},
    {"chain": 1, "address": 133, "lockable": true, "body": "auth_caller",
     "storage": {"100": 2, "101": 143}},
    {"chain": 2, "address": 140, "lockable": true, "body": "guard",
     "storage": {"10": 130, "11": 1, "12": 1}},
    {"chain": 2, "address": 141, "lockable": true, "body": "guard",
     "storage": {"10": 131, "11": 1, "12": 1}},
    {"chain": 2, "address": 142, "lockable": true, "body": "guard",
     "storage": {"10": 132, "11": 1, "12": 1}},
    {"chain": 2, "address": 143, "lockable": true, "body": "guard",
     "storage": {"10": 133, "11": 1, "12": 1}}
  ],
  "accounts": [
    {"name": "alice", "address": 901},
    {"name": "admin", "address": 910}
  ],
  "multichain_nodes": [{"owner": "enterprise1", "members": {"1": 0, "2": 0}}],
  "submissions": [
    {"at_tick": 0, "account": "admin", "multichain_node": "enterprise1",
     "chain": 2, "contract": 141, "function": "set_auth", "args": [10, 999],
     "timeout_blocks": 40},
    {"at_tick": 0, "account": "admin", "multichain_node": "enterprise1",
     "chain": 2, "contract": 142, "function": "set_auth", "args": [11, 9],
     "timeout_blocks": 40},
    {"at_tick": 0, "account": "admin", "multichain_node": "enterprise1",
     "chain": 2, "contract": 143, "function": "set_auth", "args": [12, 9],
     "timeout_blocks": 40},
    {"at_tick": 0, "account": "alice", "multichain_node": "enterprise1",
     "chain": 1, "contract": 130, "function": "invoke", "args": [5], "timeout_blocks": 40},
    {"at_tick": 0, "account": "alice", "multichain_node": "enterprise1",
     "chain": 1, "contract": 131, "function": "invoke", "args": [6], "timeout_blocks": 40},
    {"at_tick": 0, "account": "alice", "multichain_node": "enterprise1",
     "chain": 1, "contract": 132, "function": "invoke", "args": [7], "timeout_blocks": 40},
    {"at_tick": 0, "account": "alice", "multichain_node": "enterprise1",
     "chain": 1, "contract": 133, "function": "invoke", "args": [8], "timeout_blocks": 40}
  ],
  "faults": []
})json";

std::string with_fault(const char* base, const std::string& name,
                       const std::string& description, const nlohmann::json& fault) {
    nlohmann::json j = nlohmann::json::parse(base);
    j["name"] = name;
    j["description"] = description;
    j["faults"].push_back(fault);
    return j.dump();
}

std::vector<ScenarioEntry> build_catalog() {
    static const std::string crash1 = with_fault(
        kHappyNested, "crash_point_1",
        "coordinator crashes before submitting Start: nothing starts, nothing locks",
        {{"kind", "crash_coordinator"}, {"point", "before_start"}, {"submission", 0}});
    static const std::string crash2 = with_fault(
        kHappyNested, "crash_point_2",
        "coordinator crashes between Start and Commit: everything times out and is ignored",
        {{"kind", "crash_coordinator"}, {"point", "after_start_before_commit"},
         {"submission", 0}});
    static const std::string crash3 = with_fault(
        kHappyNested, "crash_point_3",
        "coordinator crashes after Commit: timers commit everywhere",
        {{"kind", "crash_coordinator"}, {"point", "after_commit"}, {"submission", 0}});
    static const std::string crash4 = with_fault(
        kHappyNested, "crash_point_4",
        "a subordinate chain's coordinator crashes: no Ready, transaction times out ignored",
        {{"kind", "crash_coordinator"}, {"point", "subordinate_coordinator"}, {"chain", 2},
         {"submission", 0}});

    return {
        {"happy_nested", "four-chain nested call graph, no faults, commits everywhere",
         kHappyNested},
        {"travel_agent_single", "one agent books hotel + train atomically", kTravelAgentSingle},
        {"travel_agent_two_agents",
         "second agent aborts on the first agent's contract locks", kTravelAgentTwoAgents},
        {"erc20_router_two_agents",
         "router + payment slots let two payments commit in parallel", kErc20RouterTwoAgents},
        {"repeated_contract_abort",
         "repeated contract in the call graph aborts on its own lock", kRepeatedContractAbort},
        {"auth_checks", "from-address/from-chain/originating-chain guards gate a subordinate",
         kAuthChecks},
        {"crash_point_1", "crash before Start: NotStarted, no locks", crash1.c_str()},
        {"crash_point_2", "crash after Start, before Commit: Ignored everywhere",
         crash2.c_str()},
        {"crash_point_3", "crash after Commit: Committed everywhere", crash3.c_str()},
        {"crash_point_4", "subordinate coordinator crash: Ignored everywhere", crash4.c_str()},
    };
}

}  // namespace

const std::vector<ScenarioEntry>& scenario_catalog() {
    static const std::vector<ScenarioEntry> catalog = build_catalog();
    return catalog;
}

}  // namespace xchain::cli
