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

#include "xchain/contractvm.hpp"
#include "xchain/txcore.hpp"

namespace xchain::txcore {

// Immutable committed state of every chain, used for construction-time
// dynamic analysis. Copies of the live ChainStates, including lock status.
struct WorldSnapshot {
    std::map<ChainId, vm::ChainState> chains;

    const vm::ChainState* chain(ChainId id) const {
        auto it = chains.find(id);
        return it == chains.end() ? nullptr : &it->second;
    }
};

struct CoordinationParams {
    ChainId chain;
    Address contract;
    std::uint64_t timeout_block = 0;
};

struct BuildRequest {
    CallPayload root_call;
    ChainId root_chain;
    Address root_contract;
    CoordinationParams coordination;
    Address sender;
    std::uint64_t sender_secret = 0;  // keyed-hash signing key of the EOA
    std::uint64_t seed = 0;           // determines the crosschain tx id
};

class ConstructionFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runs the call graph in construction mode against the snapshot, recording
// every crosschain call with its actual argument values (and every view's
// return value) into a nested transaction whose subordinates appear in
// depth-first call order. Branches not taken produce no subordinate entry.
SignedEnvelope build_crosschain_tx(const BuildRequest& request, const WorldSnapshot& snapshot,
                                   const vm::BodyRegistry& registry);

}  // namespace xchain::txcore
