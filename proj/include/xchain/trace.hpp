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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xchain::sim {

// One line of the append-only audit trace. Totally ordered by (tick, seq);
// chain/node are -1 for coordination-chain or chain-level events.
struct TraceRecord {
    std::uint64_t tick = 0;
    std::uint64_t seq = 0;
    std::int64_t chain = -1;
    std::int64_t node = -1;
    std::string kind;
    std::uint64_t tx_id = 0;  // 0 = not transaction-scoped
    nlohmann::ordered_json details = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const;
    static TraceRecord from_json(const nlohmann::ordered_json& j);
};

class Trace {
public:
    TraceRecord& append(TraceRecord record);  // assigns seq
    const std::vector<TraceRecord>& records() const { return records_; }

    std::string to_jsonl() const;  // one record per line, stable key order
    static Trace from_jsonl(const std::string& text);

private:
    std::vector<TraceRecord> records_;
};

struct ContractDump {
    bool lockable = false;
    std::optional<std::uint64_t> locked_by;
    std::map<std::uint64_t, std::uint64_t> storage;
};

struct ChainDump {
    std::uint64_t block_count = 0;
    std::map<std::uint64_t, ContractDump> contracts;
};

struct CoordinationRecordDump {
    std::string stored;    // status as written by accepted submissions
    std::string resolved;  // status observed at the final block
    std::uint64_t timeout_block = 0;
    std::uint64_t originating_chain = 0;
};

struct FinalState {
    std::uint64_t final_tick = 0;
    bool max_ticks_exceeded = false;
    std::string label;  // "within_assumptions" | "outside_assumptions"
    std::uint64_t final_block = 0;
    std::map<std::uint64_t, CoordinationRecordDump> coordination;  // by tx id
    std::map<std::uint64_t, ChainDump> chains;                     // chain -> contract -> storage

    nlohmann::ordered_json to_json() const;
    static FinalState from_json(const nlohmann::ordered_json& j);
};

}  // namespace xchain::sim
