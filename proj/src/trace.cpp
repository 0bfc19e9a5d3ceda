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

#include "xchain/trace.hpp"

#include <sstream>

namespace xchain::sim {

nlohmann::ordered_json TraceRecord::to_json() const {
    nlohmann::ordered_json j;
    j["tick"] = tick;
    j["seq"] = seq;
    j["chain"] = chain;
    j["node"] = node;
    j["kind"] = kind;
    j["tx_id"] = tx_id;
    j["details"] = details;
    return j;
}

TraceRecord TraceRecord::from_json(const nlohmann::ordered_json& j) {
    TraceRecord r;
    r.tick = j.at("tick").get<std::uint64_t>();
    r.seq = j.at("seq").get<std::uint64_t>();
    r.chain = j.at("chain").get<std::int64_t>();
    r.node = j.at("node").get<std::int64_t>();
    r.kind = j.at("kind").get<std::string>();
    r.tx_id = j.at("tx_id").get<std::uint64_t>();
    r.details = j.at("details");
    return r;
}

TraceRecord& Trace::append(TraceRecord record) {
    record.seq = records_.size();
    records_.push_back(std::move(record));
    return records_.back();
}

std::string Trace::to_jsonl() const {
    std::string out;
    for (const auto& r : records_) {
        out += r.to_json().dump();
        out += '\n';
    }
    return out;
}

Trace Trace::from_jsonl(const std::string& text) {
    Trace trace;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        trace.records_.push_back(TraceRecord::from_json(nlohmann::ordered_json::parse(line)));
    }
    return trace;
}

nlohmann::ordered_json FinalState::to_json() const {
    nlohmann::ordered_json j;
    j["meta"] = {{"final_tick", final_tick},
                 {"max_ticks_exceeded", max_ticks_exceeded},
                 {"label", label}};
    nlohmann::ordered_json records = nlohmann::ordered_json::object();
    for (const auto& [tx, rec] : coordination) {
        records[std::to_string(tx)] = {{"stored", rec.stored},
                                       {"resolved", rec.resolved},
                                       {"timeout_block", rec.timeout_block},
                                       {"originating_chain", rec.originating_chain}};
    }
    j["coordination"] = {{"final_block", final_block}, {"records", records}};
    nlohmann::ordered_json chains_json = nlohmann::ordered_json::object();
    for (const auto& [chain_id, chain] : chains) {
        nlohmann::ordered_json contracts = nlohmann::ordered_json::object();
        for (const auto& [addr, c] : chain.contracts) {
            nlohmann::ordered_json storage = nlohmann::ordered_json::object();
            for (const auto& [k, v] : c.storage) storage[std::to_string(k)] = std::to_string(v);
            nlohmann::ordered_json cj;
            cj["lockable"] = c.lockable;
            if (c.locked_by)
                cj["locked_by"] = std::to_string(*c.locked_by);
            else
                cj["locked_by"] = nullptr;
            cj["storage"] = storage;
            contracts[std::to_string(addr)] = cj;
        }
        chains_json[std::to_string(chain_id)] = {{"block_count", chain.block_count},
                                                 {"contracts", contracts}};
    }
    j["chains"] = chains_json;
    return j;
}

FinalState FinalState::from_json(const nlohmann::ordered_json& j) {
    FinalState s;
    const auto& meta = j.at("meta");
    s.final_tick = meta.at("final_tick").get<std::uint64_t>();
    s.max_ticks_exceeded = meta.at("max_ticks_exceeded").get<bool>();
    s.label = meta.at("label").get<std::string>();
    const auto& coordination = j.at("coordination");
    s.final_block = coordination.at("final_block").get<std::uint64_t>();
    for (const auto& [tx, rec] : coordination.at("records").items()) {
        CoordinationRecordDump d;
        d.stored = rec.at("stored").get<std::string>();
        d.resolved = rec.at("resolved").get<std::string>();
        d.timeout_block = rec.at("timeout_block").get<std::uint64_t>();
        d.originating_chain = rec.at("originating_chain").get<std::uint64_t>();
        s.coordination.emplace(std::stoull(tx), std::move(d));
    }
    for (const auto& [chain_id, chain] : j.at("chains").items()) {
        ChainDump cd;
        cd.block_count = chain.at("block_count").get<std::uint64_t>();
        for (const auto& [addr, c] : chain.at("contracts").items()) {
            ContractDump dump;
            dump.lockable = c.at("lockable").get<bool>();
            if (!c.at("locked_by").is_null())
                dump.locked_by = std::stoull(c.at("locked_by").get<std::string>());
            for (const auto& [k, v] : c.at("storage").items())
                dump.storage.emplace(std::stoull(k), std::stoull(v.get<std::string>()));
            cd.contracts.emplace(std::stoull(addr), std::move(dump));
        }
        s.chains.emplace(std::stoull(chain_id), std::move(cd));
    }
    return s;
}

}  // namespace xchain::sim
