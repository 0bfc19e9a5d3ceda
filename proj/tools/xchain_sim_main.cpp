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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "xchain/scenario.hpp"

namespace {

using namespace xchain;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sim::ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw sim::ConfigError("cannot write " + path);
    out << content;
}

sim::ScenarioConfig resolve_config(const std::string& scenario, const std::string& config_path) {
    if (!scenario.empty() && !config_path.empty())
        throw sim::ConfigError("pass either --scenario or --config, not both");
    if (!scenario.empty()) return cli::load_scenario(scenario);
    if (!config_path.empty())
        return cli::parse_config(nlohmann::json::parse(read_file(config_path)));
    throw sim::ConfigError("one of --scenario or --config is required");
}

void print_verdict(const char* name, const sim::Verdict& verdict) {
    std::cout << name << ": " << (verdict.pass ? "pass" : "FAIL") << "\n";
    for (const auto& violation : verdict.violations) std::cout << "  - " << violation << "\n";
}

int cmd_run(const std::string& scenario, const std::string& config_path, std::uint64_t seed,
            const std::vector<std::string>& fault_flags, const std::string& trace_path,
            const std::string& state_path, bool allow_outside) {
    sim::ScenarioConfig config = resolve_config(scenario, config_path);
    for (const auto& flag : fault_flags) config.faults.push_back(cli::parse_fault_flag(flag));

    const cli::RunOutcome outcome = cli::run_with_checks(config, seed);
    if (!trace_path.empty()) write_file(trace_path, outcome.result.trace.to_jsonl());
    if (!state_path.empty())
        write_file(state_path, outcome.result.final_state.to_json().dump(2) + "\n");

    const auto& fs = outcome.result.final_state;
    std::cout << "scenario: " << (config.name.empty() ? "(custom)" : config.name)
              << "  seed: " << seed << "\n";
    std::cout << "final tick: " << fs.final_tick << "  label: " << fs.label << "\n";
    for (const auto& [tx, rec] : fs.coordination)
        std::cout << "tx " << tx << ": " << rec.resolved << " (stored " << rec.stored << ")\n";
    print_verdict("safety", outcome.safety);
    print_verdict("liveness", outcome.liveness);

    if (outcome.safety.pass && outcome.liveness.pass) return kExitPass;
    if (outcome.result.outside_assumptions && allow_outside) {
        std::cout << "run is outside the protocol's byzantine assumptions; "
                     "accepted via --allow-outside\n";
        return kExitPass;
    }
    return kExitCheckFailed;
}

int cmd_check(const std::string& trace_path, const std::string& state_path,
              const std::string& scenario, const std::string& config_path) {
    const sim::ScenarioConfig config = resolve_config(scenario, config_path);
    const sim::Trace trace = sim::Trace::from_jsonl(read_file(trace_path));
    const sim::FinalState state =
        sim::FinalState::from_json(nlohmann::ordered_json::parse(read_file(state_path)));
    const auto safety = sim::check_safety(trace, state);
    const auto liveness = sim::check_liveness(trace, state, config);
    print_verdict("safety", safety);
    print_verdict("liveness", liveness);
    return safety.pass && liveness.pass ? kExitPass : kExitCheckFailed;
}

int cmd_list() {
    for (const auto& entry : cli::scenario_catalog())
        std::cout << entry.name << "  -  " << entry.description << "\n";
    return kExitPass;
}

int cmd_show(const std::string& scenario, const std::string& config_path) {
    const sim::ScenarioConfig config = resolve_config(scenario, config_path);
    std::cout << cli::config_to_json(config).dump(2) << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic simulator for atomic crosschain transactions"};
    app.require_subcommand(1);

    std::string scenario;
    std::string config_path;
    std::uint64_t seed = 1;
    std::vector<std::string> fault_flags;
    std::string trace_path;
    std::string state_path;
    bool allow_outside = false;

    auto* run = app.add_subcommand("run", "run a scenario and check safety/liveness");
    run->add_option("--scenario", scenario, "packaged scenario name (see `list`)");
    run->add_option("--config", config_path, "path to a scenario config JSON");
    run->add_option("--seed", seed, "deterministic run seed");
    run->add_option("--faults", fault_flags,
                    "fault specs, e.g. crash:after_commit loss:0.3 delay:1-5 byzantine:2:1");
    run->add_option("--trace", trace_path, "write the JSONL trace here");
    run->add_option("--state", state_path, "write the final-state JSON here");
    run->add_flag("--allow-outside", allow_outside,
                  "exit 0 even when the run exceeds the byzantine assumptions");

    auto* check = app.add_subcommand("check", "re-run the checkers on stored artifacts");
    check->add_option("--trace", trace_path, "trace JSONL path")->required();
    check->add_option("--state", state_path, "final-state JSON path")->required();
    check->add_option("--scenario", scenario, "packaged scenario the artifacts came from");
    check->add_option("--config", config_path, "config JSON the artifacts came from");

    auto* list = app.add_subcommand("list", "list packaged scenarios");

    auto* show = app.add_subcommand("show", "print a scenario's resolved config JSON");
    show->add_option("--scenario", scenario, "packaged scenario name");
    show->add_option("--config", config_path, "path to a scenario config JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scenario, config_path, seed, fault_flags, trace_path, state_path,
                           allow_outside);
        if (check->parsed()) return cmd_check(trace_path, state_path, scenario, config_path);
        if (list->parsed()) return cmd_list();
        if (show->parsed()) return cmd_show(scenario, config_path);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
