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

#include "xchain/sim.hpp"
#include "xchain/trace.hpp"

// Post-hoc trace checkers for the protocol's two theorems. They consume only
// the serialized artifacts (trace + final state + config), so stored runs
// can be re-checked offline.
namespace xchain::sim {

struct Verdict {
    bool pass = true;
    std::vector<std::string> violations;

    void fail(std::string what) {
        pass = false;
        violations.push_back(std::move(what));
    }
};

// Atomicity: for every crosschain transaction, every chain that staged
// provisional state resolved it the same way, and that way matches the
// coordination verdict. Also enforces coordination-record terminality and
// the no-Started-at-quiescence rule.
Verdict check_safety(const Trace& trace, const FinalState& final_state);

// Termination: quiescence within max_ticks, every lock released, every
// started transaction resolved, every timer fired or cancelled, and every
// resolution within timeout-equivalent + W + slack ticks.
Verdict check_liveness(const Trace& trace, const FinalState& final_state,
                       const ScenarioConfig& config);

}  // namespace xchain::sim
