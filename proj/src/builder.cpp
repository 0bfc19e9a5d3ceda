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

#include "xchain/builder.hpp"

namespace xchain::txcore {

namespace {

// Shared fields and per-chain nonce counters for one build pass.
struct BuildState {
    const WorldSnapshot& world;
    const vm::BodyRegistry& registry;
    const BuildRequest& request;
    CrosschainTxId tx_id;
    std::map<ChainId, std::uint64_t> next_nonce;

    std::uint64_t nonce_for(ChainId chain, bool consume) {
        auto it = next_nonce.find(chain);
        if (it == next_nonce.end()) {
            std::uint64_t base = 0;
            if (const vm::ChainState* cs = world.chain(chain)) {
                auto n = cs->nonces.find(request.sender);
                if (n != cs->nonces.end()) base = n->second;
            }
            it = next_nonce.emplace(chain, base).first;
        }
        const std::uint64_t nonce = it->second;
        if (consume) ++it->second;  // views are not mined and keep the counter
        return nonce;
    }

    CrosschainTransaction element(TxType type, ChainId chain, Address contract,
                                  CallPayload call, ChainId from_chain, Address from_address) {
        CrosschainTransaction tx;
        tx.tx_type = type;
        tx.nonce = nonce_for(chain, type != TxType::View);
        tx.gas_price = 1;
        tx.gas_limit = 1'000'000;
        tx.to = contract;
        tx.value = 0;
        tx.data = std::move(call);
        tx.chain_id = chain;
        tx.sender = request.sender;
        tx.coordination_chain = request.coordination.chain;
        tx.coordination_contract = request.coordination.contract;
        tx.timeout_block = request.coordination.timeout_block;
        tx.crosschain_tx_id = tx_id;
        tx.originating_chain = request.root_chain;
        tx.from_chain = from_chain;
        tx.from_address = from_address;
        return tx;
    }
};

struct ElementResult {
    std::int64_t return_value = 0;
    std::vector<CrosschainTransaction> subordinates;
};

// Executes one element (the root, a subordinate transaction or a view) in
// construction mode and collects its directly recorded subordinates.
ElementResult run_element(BuildState& state, TxType type, ChainId chain, Address contract,
                          const CallPayload& call, ChainId from_chain, Address from_address);

// Records crosschain calls made while one element executes. Each recorded
// subordinate is attributed to the element's To address, not to whichever
// local contract issued the call.
class Recorder final : public vm::CrosschainHooks {
public:
    Recorder(BuildState& state, ChainId element_chain, Address element_to)
        : state_(state), element_chain_(element_chain), element_to_(element_to) {}

    std::int64_t on_view(ChainId chain, Address contract, const std::string& function,
                         std::span<const std::int64_t> args) override {
        return record(TxType::View, chain, contract, function, args);
    }

    void on_tx(ChainId chain, Address contract, const std::string& function,
               std::span<const std::int64_t> args) override {
        record(TxType::Subordinate, chain, contract, function, args);
    }

    std::vector<CrosschainTransaction> take() { return std::move(subordinates_); }

private:
    std::int64_t record(TxType type, ChainId chain, Address contract, const std::string& function,
                        std::span<const std::int64_t> args) {
        CallPayload call{function, {args.begin(), args.end()}};
        // Assign this element's nonce before descending so that, on any one
        // chain, callers are ordered before their callees.
        CrosschainTransaction sub =
            state_.element(type, chain, contract, call, element_chain_, element_to_);
        ElementResult nested =
            run_element(state_, type, chain, contract, call, element_chain_, element_to_);
        sub.subordinates = std::move(nested.subordinates);
        subordinates_.push_back(std::move(sub));
        return nested.return_value;
    }

    BuildState& state_;
    ChainId element_chain_;
    Address element_to_;
    std::vector<CrosschainTransaction> subordinates_;
};

ElementResult run_element(BuildState& state, TxType type, ChainId chain, Address contract,
                          const CallPayload& call, ChainId from_chain, Address from_address) {
    const vm::ChainState* chain_state = state.world.chain(chain);
    if (chain_state == nullptr)
        throw ConstructionFault("construction: unknown chain " + std::to_string(chain.value));

    vm::ExecContext ctx;
    ctx.msg_sender = state.request.sender;
    ctx.tx_origin = state.request.sender;
    ctx.from_address = from_address;
    ctx.from_chain = from_chain;
    ctx.originating_chain = state.request.root_chain;
    ctx.this_chain = chain;
    ctx.mode = vm::ExecMode::Construction;

    Recorder recorder(state, chain, contract);
    vm::TrialResult result = vm::execute_with_hooks(*chain_state, state.registry, contract, call,
                                                    ctx, recorder, type == TxType::View);
    if (!result.ok())
        throw ConstructionFault("construction fault in " + call.function_name + ": " +
                                result.reason);
    return ElementResult{result.return_value.value_or(0), recorder.take()};
}

}  // namespace

SignedEnvelope build_crosschain_tx(const BuildRequest& request, const WorldSnapshot& snapshot,
                                   const vm::BodyRegistry& registry) {
    BuildState state{snapshot, registry, request, CrosschainTxId{request.seed}, {}};

    CrosschainTransaction tx =
        state.element(TxType::Originating, request.root_chain, request.root_contract,
                      request.root_call, request.root_chain, request.sender);
    ElementResult root = run_element(state, TxType::Originating, request.root_chain,
                                     request.root_contract, request.root_call,
                                     request.root_chain, request.sender);
    tx.subordinates = std::move(root.subordinates);

    SignedEnvelope env;
    env.eoa_signature = eoa_sign(tx, request.sender_secret);
    env.body = std::move(tx);
    return env;
}

}  // namespace xchain::txcore
