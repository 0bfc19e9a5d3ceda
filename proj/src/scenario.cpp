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

#include <algorithm>

namespace xchain::cli {

namespace {

vm::Storage parse_storage(const nlohmann::json& j) {
    vm::Storage storage;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string())
            storage.emplace(std::stoull(key), std::stoull(value.get<std::string>()));
        else
            storage.emplace(std::stoull(key), value.get<std::uint64_t>());
    }
    return storage;
}

sim::CrashPoint parse_point(const std::string& point) {
    if (point == "before_start") return sim::CrashPoint::BeforeStart;
    if (point == "after_start_before_commit" || point == "after_start")
        return sim::CrashPoint::AfterStartBeforeCommit;
    if (point == "after_commit") return sim::CrashPoint::AfterCommit;
    if (point == "subordinate_coordinator" || point == "subordinate")
        return sim::CrashPoint::SubordinateCoordinator;
    throw sim::ConfigError("unknown crash point: " + point);
}

sim::MsgScope parse_scope(const std::string& scope) {
    if (scope == "all") return sim::MsgScope::All;
    if (scope == "ready") return sim::MsgScope::Ready;
    if (scope == "dispatch") return sim::MsgScope::Dispatch;
    if (scope == "view_result") return sim::MsgScope::ViewResult;
    if (scope == "signalling") return sim::MsgScope::Signalling;
    throw sim::ConfigError("unknown message scope: " + scope);
}

const char* scope_name(sim::MsgScope scope) {
    switch (scope) {
        case sim::MsgScope::All: return "all";
        case sim::MsgScope::Ready: return "ready";
        case sim::MsgScope::Dispatch: return "dispatch";
        case sim::MsgScope::ViewResult: return "view_result";
        case sim::MsgScope::Signalling: return "signalling";
    }
    return "all";
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

sim::FaultSpec parse_fault_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "crash_coordinator") {
        sim::CrashCoordinatorFault fault;
        fault.point = parse_point(j.at("point").get<std::string>());
        if (j.contains("chain")) fault.chain = j.at("chain").get<std::uint64_t>();
        if (j.contains("submission")) fault.submission = j.at("submission").get<std::size_t>();
        return fault;
    }
    if (kind == "byzantine") {
        sim::ByzantineFault fault;
        fault.chain = j.at("chain").get<std::uint64_t>();
        fault.count = j.at("count").get<std::size_t>();
        if (j.contains("style"))
            fault.style = j.at("style").get<std::string>() == "corrupt_share"
                              ? proto::ByzStyle::CorruptShare
                              : proto::ByzStyle::Crash;
        return fault;
    }
    if (kind == "message_loss") {
        sim::MessageLossFault fault;
        fault.rate = j.at("rate").get<double>();
        if (j.contains("scope")) fault.scope = parse_scope(j.at("scope").get<std::string>());
        return fault;
    }
    if (kind == "message_delay") {
        sim::MessageDelayFault fault;
        fault.lo = j.at("lo").get<std::uint64_t>();
        fault.hi = j.at("hi").get<std::uint64_t>();
        return fault;
    }
    throw sim::ConfigError("unknown fault kind: " + kind);
}

nlohmann::ordered_json fault_to_json(const sim::FaultSpec& fault) {
    nlohmann::ordered_json j;
    if (const auto* crash = std::get_if<sim::CrashCoordinatorFault>(&fault)) {
        j["kind"] = "crash_coordinator";
        j["point"] = sim::to_string(crash->point);
        if (crash->point == sim::CrashPoint::SubordinateCoordinator) j["chain"] = crash->chain;
        j["submission"] = crash->submission;
    } else if (const auto* byz = std::get_if<sim::ByzantineFault>(&fault)) {
        j["kind"] = "byzantine";
        j["chain"] = byz->chain;
        j["count"] = byz->count;
        j["style"] = byz->style == proto::ByzStyle::CorruptShare ? "corrupt_share" : "crash";
    } else if (const auto* loss = std::get_if<sim::MessageLossFault>(&fault)) {
        j["kind"] = "message_loss";
        j["rate"] = loss->rate;
        j["scope"] = scope_name(loss->scope);
    } else if (const auto* delay = std::get_if<sim::MessageDelayFault>(&fault)) {
        j["kind"] = "message_delay";
        j["lo"] = delay->lo;
        j["hi"] = delay->hi;
    }
    return j;
}

sim::FaultSpec parse_fault_flag(const std::string& flag) {
    std::string head = flag;
    std::size_t submission = 0;
    if (const std::size_t at = flag.find('@'); at != std::string::npos) {
        head = flag.substr(0, at);
        submission = std::stoull(flag.substr(at + 1));
    }
    const std::vector<std::string> parts = split(head, ':');
    if (parts.empty()) throw sim::ConfigError("empty fault flag");
    if (parts[0] == "crash") {
        if (parts.size() < 2) throw sim::ConfigError("crash fault needs a point");
        sim::CrashCoordinatorFault fault;
        fault.point = parse_point(parts[1]);
        fault.submission = submission;
        if (fault.point == sim::CrashPoint::SubordinateCoordinator) {
            if (parts.size() < 3)
                throw sim::ConfigError("crash:subordinate needs a chain: crash:subordinate:CHAIN");
            fault.chain = std::stoull(parts[2]);
        }
        return fault;
    }
    if (parts[0] == "byzantine") {
        if (parts.size() < 3) throw sim::ConfigError("byzantine fault: byzantine:CHAIN:COUNT");
        sim::ByzantineFault fault;
        fault.chain = std::stoull(parts[1]);
        fault.count = std::stoull(parts[2]);
        if (parts.size() > 3 && parts[3] == "corrupt") fault.style = proto::ByzStyle::CorruptShare;
        return fault;
    }
    if (parts[0] == "loss") {
        if (parts.size() < 2) throw sim::ConfigError("loss fault: loss:RATE");
        sim::MessageLossFault fault;
        fault.rate = std::stod(parts[1]);
        if (parts.size() > 2) fault.scope = parse_scope(parts[2]);
        return fault;
    }
    if (parts[0] == "delay") {
        if (parts.size() < 2) throw sim::ConfigError("delay fault: delay:LO-HI");
        const auto range = split(parts[1], '-');
        sim::MessageDelayFault fault;
        fault.lo = std::stoull(range[0]);
        fault.hi = range.size() > 1 ? std::stoull(range[1]) : fault.lo;
        return fault;
    }
    throw sim::ConfigError("unknown fault flag: " + flag);
}

sim::ScenarioConfig parse_config(const nlohmann::json& j) {
    sim::ScenarioConfig config;
    config.name = j.value("name", "");
    config.description = j.value("description", "");
    config.coordination_chain = j.value("coordination_chain", config.coordination_chain);
    config.coordination_contract = j.value("coordination_contract", config.coordination_contract);
    config.ticks_per_block = j.value("ticks_per_block", config.ticks_per_block);
    config.timer_extra_max = j.value("timer_extra_max", config.timer_extra_max);
    if (j.contains("message_delay")) {
        const auto& delay = j.at("message_delay");
        config.message_delay_lo = delay.at(0).get<std::uint64_t>();
        config.message_delay_hi = delay.at(1).get<std::uint64_t>();
    }
    config.max_ticks = j.value("max_ticks", config.max_ticks);

    for (const auto& chain : j.value("chains", nlohmann::json::array())) {
        sim::ChainSpec spec;
        spec.id = chain.at("id").get<std::uint64_t>();
        spec.validators = chain.value("validators", std::size_t{3});
        spec.threshold = chain.value("threshold", std::size_t{2});
        spec.mining_delay = chain.value("mining_delay", std::uint64_t{3});
        config.chains.push_back(spec);
    }
    for (const auto& contract : j.value("contracts", nlohmann::json::array())) {
        sim::ContractSpec spec;
        spec.chain = contract.at("chain").get<std::uint64_t>();
        spec.address = contract.at("address").get<std::uint64_t>();
        spec.lockable = contract.value("lockable", false);
        spec.body = contract.at("body").get<std::string>();
        if (contract.contains("storage")) spec.storage = parse_storage(contract.at("storage"));
        config.contracts.push_back(std::move(spec));
    }
    for (const auto& account : j.value("accounts", nlohmann::json::array())) {
        sim::AccountSpec spec;
        spec.name = account.at("name").get<std::string>();
        spec.address = account.at("address").get<std::uint64_t>();
        config.accounts.push_back(std::move(spec));
    }
    for (const auto& mnode : j.value("multichain_nodes", nlohmann::json::array())) {
        sim::MultichainNodeSpec spec;
        spec.owner = mnode.at("owner").get<std::string>();
        for (const auto& [chain, node] : mnode.at("members").items())
            spec.members.emplace(std::stoull(chain), node.get<std::size_t>());
        config.multichain_nodes.push_back(std::move(spec));
    }
    for (const auto& sub : j.value("submissions", nlohmann::json::array())) {
        sim::SubmissionSpec spec;
        spec.at_tick = sub.value("at_tick", std::uint64_t{0});
        spec.account = sub.at("account").get<std::string>();
        spec.multichain_node = sub.at("multichain_node").get<std::string>();
        spec.chain = sub.at("chain").get<std::uint64_t>();
        spec.contract = sub.at("contract").get<std::uint64_t>();
        spec.call.function_name = sub.at("function").get<std::string>();
        for (const auto& arg : sub.value("args", nlohmann::json::array()))
            spec.call.args.push_back(arg.get<std::int64_t>());
        spec.timeout_blocks = sub.value("timeout_blocks", std::uint64_t{20});
        config.submissions.push_back(std::move(spec));
    }
    for (const auto& fault : j.value("faults", nlohmann::json::array()))
        config.faults.push_back(parse_fault_json(fault));
    return config;
}

nlohmann::ordered_json config_to_json(const sim::ScenarioConfig& config) {
    nlohmann::ordered_json j;
    j["name"] = config.name;
    j["description"] = config.description;
    j["coordination_chain"] = config.coordination_chain;
    j["coordination_contract"] = config.coordination_contract;
    j["ticks_per_block"] = config.ticks_per_block;
    j["timer_extra_max"] = config.timer_extra_max;
    j["message_delay"] = {config.message_delay_lo, config.message_delay_hi};
    j["max_ticks"] = config.max_ticks;
    j["chains"] = nlohmann::ordered_json::array();
    for (const auto& chain : config.chains)
        j["chains"].push_back({{"id", chain.id},
                               {"validators", chain.validators},
                               {"threshold", chain.threshold},
                               {"mining_delay", chain.mining_delay}});
    j["contracts"] = nlohmann::ordered_json::array();
    for (const auto& contract : config.contracts) {
        nlohmann::ordered_json storage = nlohmann::ordered_json::object();
        for (const auto& [key, value] : contract.storage)
            storage[std::to_string(key)] = std::to_string(value);
        j["contracts"].push_back({{"chain", contract.chain},
                                  {"address", contract.address},
                                  {"lockable", contract.lockable},
                                  {"body", contract.body},
                                  {"storage", storage}});
    }
    j["accounts"] = nlohmann::ordered_json::array();
    for (const auto& account : config.accounts)
        j["accounts"].push_back({{"name", account.name}, {"address", account.address}});
    j["multichain_nodes"] = nlohmann::ordered_json::array();
    for (const auto& mnode : config.multichain_nodes) {
        nlohmann::ordered_json members = nlohmann::ordered_json::object();
        for (const auto& [chain, node] : mnode.members) members[std::to_string(chain)] = node;
        j["multichain_nodes"].push_back({{"owner", mnode.owner}, {"members", members}});
    }
    j["submissions"] = nlohmann::ordered_json::array();
    for (const auto& sub : config.submissions) {
        nlohmann::ordered_json args = nlohmann::ordered_json::array();
        for (std::int64_t arg : sub.call.args) args.push_back(arg);
        j["submissions"].push_back({{"at_tick", sub.at_tick},
                                    {"account", sub.account},
                                    {"multichain_node", sub.multichain_node},
                                    {"chain", sub.chain},
                                    {"contract", sub.contract},
                                    {"function", sub.call.function_name},
                                    {"args", args},
                                    {"timeout_blocks", sub.timeout_blocks}});
    }
    j["faults"] = nlohmann::ordered_json::array();
    for (const auto& fault : config.faults) j["faults"].push_back(fault_to_json(fault));
    return j;
}

sim::ScenarioConfig load_scenario(const std::string& name) {
    for (const ScenarioEntry& entry : scenario_catalog()) {
        if (entry.name == name) return parse_config(nlohmann::json::parse(entry.config_json));
    }
    throw sim::ConfigError("unknown scenario: " + name);
}

RunOutcome run_with_checks(const sim::ScenarioConfig& config, std::uint64_t seed) {
    RunOutcome outcome;
    outcome.result = sim::run(config, seed);
    outcome.safety = sim::check_safety(outcome.result.trace, outcome.result.final_state);
    outcome.liveness =
        sim::check_liveness(outcome.result.trace, outcome.result.final_state, config);
    return outcome;
}

}  // namespace xchain::cli
