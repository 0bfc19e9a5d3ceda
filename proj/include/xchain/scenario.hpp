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

#include "xchain/checkers.hpp"
#include "xchain/sim.hpp"

// Scenario runner layer: the JSON config schema (documented in
// docs/config-schema.md), the packaged scenario catalog, and fault-flag
// parsing for the command line.
namespace xchain::cli {

sim::ScenarioConfig parse_config(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const sim::ScenarioConfig& config);

// Fault flags: "crash:before_start[@SUBMISSION]", "crash:after_start[@N]",
// "crash:after_commit[@N]", "crash:subordinate:CHAIN[@N]",
// "byzantine:CHAIN:COUNT[:crash|corrupt]", "loss:RATE[:SCOPE]",
// "delay:LO-HI".
sim::FaultSpec parse_fault_flag(const std::string& flag);

sim::FaultSpec parse_fault_json(const nlohmann::json& j);
nlohmann::ordered_json fault_to_json(const sim::FaultSpec& fault);

struct ScenarioEntry {
    std::string name;
    std::string description;
    const char* config_json;
};

// Packaged scenarios in stable order.
const std::vector<ScenarioEntry>& scenario_catalog();

// Parses a packaged scenario; throws sim::ConfigError for unknown names.
sim::ScenarioConfig load_scenario(const std::string& name);

struct RunOutcome {
    sim::RunResult result;
    sim::Verdict safety;
    sim::Verdict liveness;
};

// sim::run plus both trace checkers.
RunOutcome run_with_checks(const sim::ScenarioConfig& config, std::uint64_t seed);

}  // namespace xchain::cli
