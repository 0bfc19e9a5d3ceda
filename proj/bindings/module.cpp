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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "xchain/scenario.hpp"
#include "xchain/tsig.hpp"

namespace py = pybind11;
using namespace xchain;

namespace {

sim::ScenarioConfig config_from_args(const std::string& scenario, const std::string& config_json) {
    if (!scenario.empty() && !config_json.empty())
        throw sim::ConfigError("pass either scenario or config_json, not both");
    if (!scenario.empty()) return cli::load_scenario(scenario);
    if (!config_json.empty()) return cli::parse_config(nlohmann::json::parse(config_json));
    throw sim::ConfigError("one of scenario or config_json is required");
}

py::dict verdict_dict(const sim::Verdict& verdict) {
    py::dict d;
    d["pass"] = verdict.pass;
    d["violations"] = verdict.violations;
    return d;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw sim::ConfigError("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sim::ConfigError("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

tsig::ThresholdConfig tcfg(std::size_t n, std::size_t m) { return tsig::ThresholdConfig{n, m}; }

Bytes to_bytes(const py::bytes& b) {
    const std::string s = b;
    return Bytes(s.begin(), s.end());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic simulator for atomic crosschain transactions";

    m.def("list_scenarios", [] {
        py::list out;
        for (const auto& entry : cli::scenario_catalog()) {
            py::dict d;
            d["name"] = entry.name;
            d["description"] = entry.description;
            out.append(d);
        }
        return out;
    });

    m.def(
        "scenario_config",
        [](const std::string& name) { return cli::config_to_json(cli::load_scenario(name)).dump(2); },
        py::arg("name"), "Resolved config JSON of a packaged scenario.");

    m.def(
        "run_scenario",
        [](const std::string& scenario, const std::string& config_json, std::uint64_t seed,
           const std::vector<std::string>& faults, const std::string& trace_path,
           const std::string& state_path) {
            sim::ScenarioConfig config = config_from_args(scenario, config_json);
            for (const auto& flag : faults) config.faults.push_back(cli::parse_fault_flag(flag));
            const cli::RunOutcome outcome = cli::run_with_checks(config, seed);
            const std::string trace = outcome.result.trace.to_jsonl();
            const std::string state = outcome.result.final_state.to_json().dump(2) + "\n";
            if (!trace_path.empty()) write_file(trace_path, trace);
            if (!state_path.empty()) write_file(state_path, state);

            py::dict statuses;
            for (const auto& [tx, rec] : outcome.result.final_state.coordination)
                statuses[py::int_(tx)] = rec.resolved;
            py::dict d;
            d["statuses"] = statuses;
            d["label"] = outcome.result.final_state.label;
            d["final_tick"] = outcome.result.final_state.final_tick;
            d["max_ticks_exceeded"] = outcome.result.max_ticks_exceeded;
            d["safety"] = verdict_dict(outcome.safety);
            d["liveness"] = verdict_dict(outcome.liveness);
            d["trace_jsonl"] = trace;
            d["state_json"] = state;
            return d;
        },
        py::arg("scenario") = "", py::arg("config_json") = "", py::arg("seed") = 1,
        py::arg("faults") = std::vector<std::string>{}, py::arg("trace_path") = "",
        py::arg("state_path") = "",
        "Run a scenario deterministically and evaluate both trace checkers.");

    m.def(
        "check_artifacts",
        [](const std::string& trace_path, const std::string& state_path,
           const std::string& scenario, const std::string& config_json) {
            const sim::ScenarioConfig config = config_from_args(scenario, config_json);
            const sim::Trace trace = sim::Trace::from_jsonl(read_file(trace_path));
            const sim::FinalState state =
                sim::FinalState::from_json(nlohmann::ordered_json::parse(read_file(state_path)));
            py::dict d;
            d["safety"] = verdict_dict(sim::check_safety(trace, state));
            d["liveness"] = verdict_dict(sim::check_liveness(trace, state, config));
            return d;
        },
        py::arg("trace_path"), py::arg("state_path"), py::arg("scenario") = "",
        py::arg("config_json") = "", "Re-run the safety/liveness checkers on stored artifacts.");

    // M-of-N threshold signatures over the transparent test group. Scalars
    // cross the boundary as plain integers mod 2^61 - 1.
    auto ts = m.def_submodule("tsig", "threshold signatures over the transparent group");
    ts.attr("GROUP_ORDER") = tsig::GroupScalar::kOrder;
    ts.def(
        "keygen",
        [](std::size_t n, std::size_t threshold, std::uint64_t seed) {
            const auto out = tsig::dealer_keygen(tcfg(n, threshold), seed);
            py::list shares;
            for (const auto& share : out.shares)
                shares.append(py::make_tuple(share.index, share.secret_share.value(),
                                             share.blinding_share.value()));
            py::list commitments;
            for (const auto& c : out.commitments.entries) commitments.append(c.value());
            py::dict d;
            d["public_key"] = out.public_key.value();
            d["shares"] = shares;
            d["commitments"] = commitments;
            d["dealer_secret"] = out.dealer_secret.value();
            return d;
        },
        py::arg("n"), py::arg("threshold"), py::arg("seed"));
    ts.def(
        "verify_share",
        [](std::size_t index, std::uint64_t secret_share, std::uint64_t blinding_share,
           const std::vector<std::uint64_t>& commitments) {
            tsig::PedersenCommitments pc;
            for (std::uint64_t c : commitments) pc.entries.emplace_back(c);
            return tsig::verify_share(
                {index, tsig::GroupScalar{secret_share}, tsig::GroupScalar{blinding_share}}, pc);
        },
        py::arg("index"), py::arg("secret_share"), py::arg("blinding_share"),
        py::arg("commitments"));
    ts.def(
        "sign_share",
        [](std::size_t index, std::uint64_t secret_share, const py::bytes& message) {
            const auto share = tsig::sign_share(
                {index, tsig::GroupScalar{secret_share}, tsig::GroupScalar{0}}, to_bytes(message));
            return share.value.value();
        },
        py::arg("index"), py::arg("secret_share"), py::arg("message"));
    ts.def(
        "combine",
        [](const std::vector<std::pair<std::size_t, std::uint64_t>>& shares, std::size_t n,
           std::size_t threshold) {
            std::vector<tsig::SignatureShare> sig_shares;
            for (const auto& [index, value] : shares)
                sig_shares.push_back({index, tsig::GroupScalar{value}});
            return tsig::combine(sig_shares, tcfg(n, threshold)).value.value();
        },
        py::arg("shares"), py::arg("n"), py::arg("threshold"));
    ts.def(
        "verify",
        [](std::uint64_t public_key, const py::bytes& message, std::uint64_t signature) {
            return tsig::verify(tsig::GroupScalar{public_key}, to_bytes(message),
                                {tsig::GroupScalar{signature}});
        },
        py::arg("public_key"), py::arg("message"), py::arg("signature"));
    ts.def(
        "hash_to_scalar",
        [](const py::bytes& message) { return tsig::hash_to_scalar(to_bytes(message)).value(); },
        py::arg("message"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
