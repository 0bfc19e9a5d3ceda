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

#include "xchain/checkers.hpp"

#include <algorithm>

namespace xchain::sim {

namespace {

struct StageKey {
    std::uint64_t tx = 0;
    std::uint64_t chain = 0;
    std::uint64_t contract = 0;
    auto operator<=>(const StageKey&) const = default;
};

struct StageInfo {
    std::uint64_t staged_tick = 0;
    std::optional<std::string> resolution;  // "commit" | "discard"
    std::uint64_t resolved_tick = 0;
};

std::string key_name(const StageKey& key) {
    return "tx " + std::to_string(key.tx) + " chain " + std::to_string(key.chain) +
           " contract " + std::to_string(key.contract);
}

struct TimerKey {
    std::uint64_t chain = 0;
    std::int64_t node = 0;
    std::uint64_t tx = 0;
    auto operator<=>(const TimerKey&) const = default;
};

}  // namespace

Verdict check_safety(const Trace& trace, const FinalState& final_state) {
    Verdict verdict;

    std::map<StageKey, StageInfo> stages;
    std::map<std::uint64_t, std::string> coord_status;  // tx -> stored status

    for (const TraceRecord& rec : trace.records()) {
        if (rec.kind == "lock_staged") {
            const StageKey key{rec.tx_id, static_cast<std::uint64_t>(rec.chain),
                               rec.details.at("contract").get<std::uint64_t>()};
            stages[key].staged_tick = rec.tick;
        } else if (rec.kind == "unlock_commit" || rec.kind == "unlock_discard") {
            const StageKey key{rec.tx_id, static_cast<std::uint64_t>(rec.chain),
                               rec.details.at("contract").get<std::uint64_t>()};
            auto it = stages.find(key);
            if (it == stages.end()) {
                verdict.fail("unlock without matching stage for " + key_name(key));
                continue;
            }
            it->second.resolution = rec.kind == "unlock_commit" ? "commit" : "discard";
            it->second.resolved_tick = rec.tick;
        } else if (rec.kind == "coord_submit" &&
                   rec.details.at("outcome").get<std::string>() == "Accepted") {
            const std::string op = rec.details.at("op").get<std::string>();
            auto it = coord_status.find(rec.tx_id);
            const std::string before = it == coord_status.end() ? "NotStarted" : it->second;
            if (op == "start") {
                if (before != "NotStarted")
                    verdict.fail("tx " + std::to_string(rec.tx_id) +
                                 ": start accepted from state " + before);
                coord_status[rec.tx_id] = "Started";
            } else if (op == "commit" || op == "ignore") {
                if (before != "Started")
                    verdict.fail("tx " + std::to_string(rec.tx_id) + ": " + op +
                                 " accepted from state " + before +
                                 " (terminal states must not change)");
                coord_status[rec.tx_id] = op == "commit" ? "Committed" : "Ignored";
            }
        }
    }

    // Per transaction: resolved stages must all point the same way, and that
    // way must match the coordination verdict.
    std::map<std::uint64_t, std::set<std::string>> directions;
    for (const auto& [key, info] : stages)
        if (info.resolution) directions[key.tx].insert(*info.resolution);
    for (const auto& [tx, dirs] : directions) {
        if (dirs.size() > 1) {
            verdict.fail("tx " + std::to_string(tx) +
                         ": some chains committed while others discarded");
            continue;
        }
        const std::string& direction = *dirs.begin();
        auto rec = final_state.coordination.find(tx);
        if (rec == final_state.coordination.end()) {
            verdict.fail("tx " + std::to_string(tx) + ": staged state without a coordination record");
            continue;
        }
        const std::string expected = direction == "commit" ? "Committed" : "Ignored";
        if (rec->second.resolved != expected)
            verdict.fail("tx " + std::to_string(tx) + ": chains resolved " + direction +
                         " but the coordination contract says " + rec->second.resolved);
    }

    // Trace-level stored status must agree with the final dump.
    for (const auto& [tx, stored] : coord_status) {
        auto rec = final_state.coordination.find(tx);
        if (rec == final_state.coordination.end()) {
            verdict.fail("tx " + std::to_string(tx) + ": accepted submissions but no final record");
            continue;
        }
        if (rec->second.stored != stored)
            verdict.fail("tx " + std::to_string(tx) + ": trace ends with stored status " + stored +
                         " but the final state says " + rec->second.stored);
    }

    // Quiescence rule: a completed run leaves no record observably Started.
    if (!final_state.max_ticks_exceeded) {
        for (const auto& [tx, rec] : final_state.coordination)
            if (rec.resolved == "Started")
                verdict.fail("tx " + std::to_string(tx) + " still Started at quiescence");
    }
    return verdict;
}

Verdict check_liveness(const Trace& trace, const FinalState& final_state,
                       const ScenarioConfig& config) {
    Verdict verdict;

    if (final_state.max_ticks_exceeded)
        verdict.fail("run exceeded max_ticks = " + std::to_string(config.max_ticks));

    for (const auto& [chain, dump] : final_state.chains)
        for (const auto& [address, contract] : dump.contracts)
            if (contract.locked_by)
                verdict.fail("chain " + std::to_string(chain) + " contract " +
                             std::to_string(address) + " still locked by tx " +
                             std::to_string(*contract.locked_by));

    for (const auto& [tx, rec] : final_state.coordination)
        if (rec.resolved != "Committed" && rec.resolved != "Ignored")
            verdict.fail("tx " + std::to_string(tx) + " unresolved: " + rec.resolved);

    // Every set timer fired or was cancelled; every stage was unlocked.
    std::map<TimerKey, std::string> timers;
    std::map<StageKey, StageInfo> stages;
    std::map<std::uint64_t, std::uint64_t> timeout_blocks;
    for (const TraceRecord& rec : trace.records()) {
        if (rec.kind == "timer_set") {
            timers[{static_cast<std::uint64_t>(rec.chain), rec.node, rec.tx_id}] = "set";
        } else if (rec.kind == "timer_fired" || rec.kind == "timer_cancelled") {
            timers[{static_cast<std::uint64_t>(rec.chain), rec.node, rec.tx_id}] = rec.kind;
        } else if (rec.kind == "lock_staged") {
            stages[{rec.tx_id, static_cast<std::uint64_t>(rec.chain),
                    rec.details.at("contract").get<std::uint64_t>()}]
                .staged_tick = rec.tick;
        } else if (rec.kind == "unlock_commit" || rec.kind == "unlock_discard") {
            const StageKey key{rec.tx_id, static_cast<std::uint64_t>(rec.chain),
                               rec.details.at("contract").get<std::uint64_t>()};
            auto it = stages.find(key);
            if (it != stages.end()) {
                it->second.resolution = rec.kind;
                it->second.resolved_tick = rec.tick;
            }
        } else if (rec.kind == "coord_submit" && rec.details.contains("timeout_block") &&
                   rec.details.at("outcome").get<std::string>() == "Accepted") {
            timeout_blocks[rec.tx_id] = rec.details.at("timeout_block").get<std::uint64_t>();
        }
    }
    for (const auto& [key, state] : timers)
        if (state == "set")
            verdict.fail("timer on chain " + std::to_string(key.chain) + " node " +
                         std::to_string(key.node) + " for tx " + std::to_string(key.tx) +
                         " neither fired nor was cancelled");

    // Resolution bound: every staged contract unlocks by
    // timeout-equivalent + W + slack.
    const std::uint64_t slack = slack_ticks(config);
    for (const auto& [key, info] : stages) {
        if (!info.resolution) {
            verdict.fail("lock on " + key_name(key) + " never released in the trace");
            continue;
        }
        auto timeout = timeout_blocks.find(key.tx);
        if (timeout == timeout_blocks.end()) continue;  // staged without a start: safety's problem
        const std::uint64_t timeout_tick = (timeout->second + 1) * config.ticks_per_block;
        const std::uint64_t bound = timeout_tick + config.timer_extra_max + slack;
        if (info.resolved_tick > bound)
            verdict.fail("lock on " + key_name(key) + " released at tick " +
                         std::to_string(info.resolved_tick) + ", after the bound " +
                         std::to_string(bound));
    }
    return verdict;
}

}  // namespace xchain::sim
