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

#pragma once

#include <queue>

#include "xchain/builder.hpp"
#include "xchain/coord.hpp"
#include "xchain/node.hpp"
#include "xchain/rng.hpp"
#include "xchain/trace.hpp"

// Deterministic discrete-event simulator: multichain topology, protocol
// drivers for every node, fault injection at the coordinator-crash points,
// and the trace/final-state artifacts the checkers consume.
namespace xchain::sim {

using proto::ByzStyle;
using proto::NodeRef;
using txcore::Address;
using txcore::ChainId;
using txcore::CrosschainTxId;

enum class CrashPoint { BeforeStart, AfterStartBeforeCommit, AfterCommit, SubordinateCoordinator };

const char* to_string(CrashPoint point);

enum class MsgScope { All, Ready, Dispatch, ViewResult, Signalling };

// Crash the coordinating node of one submission at a protocol point; for
// SubordinateCoordinator the receiving node on `chain` crashes instead.
struct CrashCoordinatorFault {
    CrashPoint point = CrashPoint::BeforeStart;
    std::uint64_t chain = 0;       // SubordinateCoordinator only
    std::size_t submission = 0;    // which submission's coordinator
};

struct ByzantineFault {
    std::uint64_t chain = 0;
    std::size_t count = 0;  // the highest-numbered nodes turn byzantine
    ByzStyle style = ByzStyle::Crash;
};

struct MessageLossFault {
    double rate = 0.0;
    MsgScope scope = MsgScope::All;
};

struct MessageDelayFault {
    std::uint64_t lo = 1;
    std::uint64_t hi = 1;
};

using FaultSpec =
    std::variant<CrashCoordinatorFault, ByzantineFault, MessageLossFault, MessageDelayFault>;

struct ChainSpec {
    std::uint64_t id = 0;
    std::size_t validators = 1;
    std::size_t threshold = 1;
    std::uint64_t mining_delay = 1;  // ticks from pool entry to inclusion
};

struct ContractSpec {
    std::uint64_t chain = 0;
    std::uint64_t address = 0;
    bool lockable = false;
    std::string body;
    vm::Storage storage;
};

struct AccountSpec {
    std::string name;
    std::uint64_t address = 0;
};

struct MultichainNodeSpec {
    std::string owner;
    std::map<std::uint64_t, std::size_t> members;  // chain id -> node id
};

struct SubmissionSpec {
    std::uint64_t at_tick = 0;
    std::string account;
    std::string multichain_node;
    std::uint64_t chain = 0;
    std::uint64_t contract = 0;
    txcore::CallPayload call;
    std::uint64_t timeout_blocks = 20;  // relative to the block at submission
    // Tests may inject a pre-built (possibly tampered) envelope instead of
    // running the construction pass at submission time.
    std::optional<txcore::SignedEnvelope> prebuilt;
};

struct ScenarioConfig {
    std::string name;
    std::string description;
    std::uint64_t coordination_chain = 100;
    std::uint64_t coordination_contract = 1;
    std::uint64_t ticks_per_block = 10;  // coordination-chain block interval
    std::uint64_t timer_extra_max = 20;  // W: random extra wait on local timers
    std::uint64_t message_delay_lo = 1;
    std::uint64_t message_delay_hi = 1;
    std::uint64_t max_ticks = 100000;
    std::vector<ChainSpec> chains;
    std::vector<ContractSpec> contracts;
    std::vector<AccountSpec> accounts;
    std::vector<MultichainNodeSpec> multichain_nodes;
    std::vector<SubmissionSpec> submissions;
    std::vector<FaultSpec> faults;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Upper bound on the lag between a resolution trigger and the last unlock:
// one mining delay for the signalling transaction plus the worst message
// delay for a signalling request.
std::uint64_t slack_ticks(const ScenarioConfig& config);

struct RunResult {
    Trace trace;
    FinalState final_state;
    bool outside_assumptions = false;
    bool max_ticks_exceeded = false;
};

// Deterministic per-label substream; see the header-level contract.
inline RngStream rng_stream(std::uint64_t seed, std::string_view label) {
    return RngStream(seed, label);
}

// Signing key of a named EOA, derived from the run seed. Exposed so tests
// can pre-build (and deliberately mis-build) envelopes the runner accepts.
std::uint64_t account_secret(std::uint64_t seed, std::string_view name);

class Runner {
public:
    Runner(ScenarioConfig config, std::uint64_t seed);
    ~Runner();

    // Executes scheduled events until quiescence or max_ticks. Identical
    // (config, seed) produce byte-identical traces.
    RunResult run();

    // Test hook: deliver an arbitrary protocol message at a given tick.
    void inject_message(std::uint64_t tick, NodeRef from, NodeRef to, proto::Message msg);

    const ScenarioConfig& config() const { return config_; }

private:
    struct Impl;
    ScenarioConfig config_;
    std::unique_ptr<Impl> impl_;
};

// Convenience wrapper: construct, run, return artifacts.
RunResult run(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace xchain::sim
