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

#include "xchain/sim.hpp"

#include <algorithm>
#include <tuple>

namespace xchain::sim {

const char* to_string(CrashPoint point) {
    switch (point) {
        case CrashPoint::BeforeStart: return "before_start";
        case CrashPoint::AfterStartBeforeCommit: return "after_start_before_commit";
        case CrashPoint::AfterCommit: return "after_commit";
        case CrashPoint::SubordinateCoordinator: return "subordinate_coordinator";
    }
    return "?";
}

std::uint64_t slack_ticks(const ScenarioConfig& config) {
    std::uint64_t max_mining = 0;
    for (const auto& chain : config.chains) max_mining = std::max(max_mining, chain.mining_delay);
    std::uint64_t max_delay = config.message_delay_hi;
    for (const auto& fault : config.faults)
        if (const auto* delay = std::get_if<MessageDelayFault>(&fault))
            max_delay = std::max(max_delay, delay->hi);
    return max_mining + max_delay;
}

std::uint64_t account_secret(std::uint64_t seed, std::string_view name) {
    return RngStream(seed, std::string("account:") + std::string(name)).next();
}

namespace {

using proto::CoordinatorState;
using proto::Message;
using proto::MsgDispatchSub;
using proto::MsgDispatchView;
using proto::MsgFailure;
using proto::MsgReady;
using proto::MsgSignalRequest;
using proto::MsgViewResult;
using proto::PendingTrial;
using proto::ReadyMessage;
using proto::SignedViewResult;
using proto::ValidatorNode;
using txcore::CrosschainTransaction;
using txcore::TxType;

struct EvSubmit {
    std::size_t submission = 0;
};

struct EvDeliver {
    NodeRef from;
    NodeRef to;
    Message msg;
};

struct EvMine {
    std::uint64_t chain = 0;
    std::size_t pool_index = 0;
};

struct EvTimer {
    NodeRef node;
    CrosschainTxId tx;
};

using EventPayload = std::variant<EvSubmit, EvDeliver, EvMine, EvTimer>;

struct Event {
    std::uint64_t tick = 0;
    std::uint64_t seq = 0;
    EventPayload payload;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.tick, a.seq) > std::tie(b.tick, b.seq);
    }
};

struct PoolEntry {
    enum class Kind { Crosschain, Signalling };
    Kind kind = Kind::Crosschain;
    CrosschainTransaction element;  // Signalling entries only carry tx_id
    CrosschainTxId tx_id;
    std::map<Address, vm::Storage> writes;
    std::size_t processing_node = 0;
    std::size_t mnode = 0;
    NodeRef coordinator;
    bool is_root = false;
    bool mined = false;
};

struct ChainRuntime {
    ChainSpec spec;
    vm::ChainState state;
    std::vector<ValidatorNode> nodes;
    std::vector<PoolEntry> pool;
};

}  // namespace

struct Runner::Impl {
    const ScenarioConfig& config;
    std::uint64_t seed;
    const vm::BodyRegistry& bodies = vm::builtin_bodies();

    std::map<std::uint64_t, ChainRuntime> chains;
    coord::CoordinationContract coordination;
    std::map<std::string, AccountSpec> accounts_by_name;
    std::map<std::uint64_t, std::string> accounts_by_address;
    std::vector<MultichainNodeSpec> mnodes;
    std::map<std::string, std::size_t> mnode_index;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
    std::uint64_t now = 0;
    std::uint64_t next_seq = 0;
    std::uint64_t next_dispatch_id = 1;
    std::uint64_t next_tx_id = 1;
    bool max_ticks_exceeded = false;
    bool outside_assumptions = false;

    Trace trace;
    RngStream net_loss;
    RngStream net_delay;
    std::uint64_t delay_lo;
    std::uint64_t delay_hi;
    std::vector<MessageLossFault> loss_faults;
    std::vector<std::pair<CrashCoordinatorFault, bool>> crash_faults;  // spec, consumed
    std::map<std::uint64_t, std::size_t> tx_submission;                // tx id -> submission

    Impl(const ScenarioConfig& cfg, std::uint64_t seed_in)
        : config(cfg), seed(seed_in), coordination(cfg.ticks_per_block),
          net_loss(seed_in, "net.loss"), net_delay(seed_in, "net.delay"),
          delay_lo(cfg.message_delay_lo), delay_hi(cfg.message_delay_hi) {
        validate_config();
        build_world();
    }

    // ---- setup -----------------------------------------------------------

    void validate_config() {
        if (config.ticks_per_block == 0) throw ConfigError("ticks_per_block must be positive");
        std::set<std::uint64_t> chain_ids;
        for (const auto& chain : config.chains) {
            if (chain.id == 0 || chain.id == config.coordination_chain)
                throw ConfigError("invalid chain id " + std::to_string(chain.id));
            if (!chain_ids.insert(chain.id).second)
                throw ConfigError("duplicate chain id " + std::to_string(chain.id));
            if (chain.validators == 0 || chain.threshold == 0 ||
                chain.threshold > chain.validators)
                throw ConfigError("invalid validator/threshold counts for chain " +
                                  std::to_string(chain.id));
        }
        for (const auto& contract : config.contracts)
            if (!chain_ids.contains(contract.chain))
                throw ConfigError("contract references unknown chain " +
                                  std::to_string(contract.chain));
        std::set<std::string> names;
        for (const auto& account : config.accounts)
            if (!names.insert(account.name).second)
                throw ConfigError("duplicate account " + account.name);
        std::set<std::string> owners;
        for (const auto& mnode : config.multichain_nodes) {
            if (!owners.insert(mnode.owner).second)
                throw ConfigError("duplicate multichain node " + mnode.owner);
            for (const auto& [chain, node_id] : mnode.members) {
                if (!chain_ids.contains(chain))
                    throw ConfigError("multichain node " + mnode.owner +
                                      " references unknown chain " + std::to_string(chain));
                const auto& spec = *std::find_if(config.chains.begin(), config.chains.end(),
                                                 [&](const auto& c) { return c.id == chain; });
                if (node_id >= spec.validators)
                    throw ConfigError("multichain node " + mnode.owner +
                                      " references missing node on chain " +
                                      std::to_string(chain));
            }
        }
        for (const auto& sub : config.submissions) {
            if (!names.contains(sub.account)) throw ConfigError("unknown account " + sub.account);
            if (!owners.contains(sub.multichain_node))
                throw ConfigError("unknown multichain node " + sub.multichain_node);
            if (!sub.prebuilt && !chain_ids.contains(sub.chain))
                throw ConfigError("submission references unknown chain " +
                                  std::to_string(sub.chain));
        }
        for (const auto& fault : config.faults) {
            if (const auto* byz = std::get_if<ByzantineFault>(&fault)) {
                if (!chain_ids.contains(byz->chain))
                    throw ConfigError("byzantine fault on unknown chain " +
                                      std::to_string(byz->chain));
            } else if (const auto* crash = std::get_if<CrashCoordinatorFault>(&fault)) {
                if (crash->point == CrashPoint::SubordinateCoordinator &&
                    !chain_ids.contains(crash->chain))
                    throw ConfigError("crash fault on unknown chain " +
                                      std::to_string(crash->chain));
                if (crash->submission >= config.submissions.size())
                    throw ConfigError("crash fault references missing submission");
            } else if (const auto* loss = std::get_if<MessageLossFault>(&fault)) {
                if (loss->rate < 0.0 || loss->rate > 1.0)
                    throw ConfigError("message loss rate out of range");
            } else if (const auto* delay = std::get_if<MessageDelayFault>(&fault)) {
                if (delay->hi < delay->lo) throw ConfigError("message delay range inverted");
            }
        }
    }

    void build_world() {
        std::map<std::uint64_t, std::pair<std::size_t, ByzStyle>> byz;
        for (const auto& fault : config.faults) {
            if (const auto* b = std::get_if<ByzantineFault>(&fault))
                byz[b->chain] = {b->count, b->style};
            else if (const auto* loss = std::get_if<MessageLossFault>(&fault))
                loss_faults.push_back(*loss);
            else if (const auto* delay = std::get_if<MessageDelayFault>(&fault)) {
                delay_lo = delay->lo;
                delay_hi = delay->hi;
            } else if (const auto* crash = std::get_if<CrashCoordinatorFault>(&fault))
                crash_faults.emplace_back(*crash, false);
        }

        for (const auto& spec : config.chains) {
            ChainRuntime& rt = chains[spec.id];
            rt.spec = spec;
            rt.state.id = ChainId{spec.id};
            const std::uint64_t key_seed =
                rng_stream(seed, "keys:" + std::to_string(spec.id)).next();
            const auto dealt =
                tsig::dealer_keygen({spec.validators, spec.threshold}, key_seed);
            coordination.register_key(
                {ChainId{spec.id}, 1, dealt.public_key, {spec.validators, spec.threshold}});

            std::size_t byz_count = 0;
            ByzStyle byz_style = ByzStyle::Crash;
            if (auto it = byz.find(spec.id); it != byz.end())
                std::tie(byz_count, byz_style) = it->second;
            if (byz_count >= spec.threshold) outside_assumptions = true;

            for (std::size_t i = 0; i < spec.validators; ++i) {
                ValidatorNode node;
                node.chain = ChainId{spec.id};
                node.node_id = i;
                node.key_share = dealt.shares[i];
                if (i + byz_count >= spec.validators) {
                    node.byzantine = true;
                    node.byz_style = byz_style;
                }
                rt.nodes.push_back(std::move(node));
            }
        }

        for (const auto& contract : config.contracts)
            chains.at(contract.chain)
                .state.deploy(Address{contract.address}, contract.lockable, contract.body,
                              contract.storage);

        for (const auto& account : config.accounts) {
            accounts_by_name[account.name] = account;
            accounts_by_address[account.address] = account.name;
        }
        for (const auto& mnode : config.multichain_nodes) {
            mnode_index[mnode.owner] = mnodes.size();
            mnodes.push_back(mnode);
        }
        for (std::size_t i = 0; i < config.submissions.size(); ++i)
            schedule(config.submissions[i].at_tick, EvSubmit{i});
    }

    // ---- infrastructure ---------------------------------------------------

    void schedule(std::uint64_t tick, EventPayload payload) {
        queue.push(Event{tick, next_seq++, std::move(payload)});
    }

    ValidatorNode& node_at(NodeRef ref) {
        return chains.at(ref.chain.value).nodes.at(ref.node_id);
    }

    NodeRef member_ref(std::size_t mnode, ChainId chain) const {
        return NodeRef{chain, mnodes.at(mnode).members.at(chain.value)};
    }

    TraceRecord& log(std::int64_t chain, std::int64_t node, std::string kind,
                     std::uint64_t tx_id, nlohmann::ordered_json details = {}) {
        TraceRecord rec;
        rec.tick = now;
        rec.chain = chain;
        rec.node = node;
        rec.kind = std::move(kind);
        rec.tx_id = tx_id;
        if (!details.is_null()) rec.details = std::move(details);
        return trace.append(std::move(rec));
    }

    TraceRecord& log_node(NodeRef ref, std::string kind, std::uint64_t tx_id,
                          nlohmann::ordered_json details = {}) {
        return log(static_cast<std::int64_t>(ref.chain.value),
                   static_cast<std::int64_t>(ref.node_id), std::move(kind), tx_id,
                   std::move(details));
    }

    static MsgScope scope_of(const Message& msg) {
        if (std::holds_alternative<MsgReady>(msg)) return MsgScope::Ready;
        if (std::holds_alternative<MsgDispatchSub>(msg) ||
            std::holds_alternative<MsgDispatchView>(msg))
            return MsgScope::Dispatch;
        if (std::holds_alternative<MsgViewResult>(msg)) return MsgScope::ViewResult;
        if (std::holds_alternative<MsgSignalRequest>(msg)) return MsgScope::Signalling;
        return MsgScope::All;
    }

    void send(NodeRef from, NodeRef to, Message msg, std::uint64_t tx_id) {
        const MsgScope scope = scope_of(msg);
        for (const auto& fault : loss_faults) {
            if (fault.scope != MsgScope::All && fault.scope != scope) continue;
            if (net_loss.unit() < fault.rate) {
                log_node(to, "msg_dropped", tx_id,
                         {{"kind", proto::message_kind(msg)}, {"reason", "loss"}});
                return;
            }
        }
        const std::uint64_t delay = net_delay.range(delay_lo, delay_hi);
        schedule(now + delay, EvDeliver{from, to, std::move(msg)});
    }

    bool crash_matches(CrashPoint point, std::uint64_t tx_id, ChainId chain) {
        for (auto& [fault, consumed] : crash_faults) {
            if (consumed || fault.point != point) continue;
            auto sub = tx_submission.find(tx_id);
            if (sub == tx_submission.end() || sub->second != fault.submission) continue;
            if (point == CrashPoint::SubordinateCoordinator && fault.chain != chain.value)
                continue;
            consumed = true;
            return true;
        }
        return false;
    }

    void crash_node(NodeRef ref, CrashPoint point, std::uint64_t tx_id) {
        ValidatorNode& node = node_at(ref);
        node.crashed = true;
        log_node(ref, "node_crashed", tx_id, {{"point", to_string(point)}});
        for (const auto& [tx, expiry] : node.local_timers) {
            node.timers_done.insert(tx);
            log_node(ref, "timer_cancelled", tx.value, {{"reason", "crashed"}});
        }
        node.local_timers.clear();
    }

    // Gathers signature shares from the chain's validators and searches the
    // m-subsets for a combination that verifies under the registered key.
    // Crash-style byzantine validators return nothing; corrupt-style ones
    // return a perturbed share that the subset search filters out.
    std::optional<tsig::ThresholdSignature> gather(ChainId chain, const Bytes& message) {
        ChainRuntime& rt = chains.at(chain.value);
        const auto* key = coordination.latest_key(chain);
        if (key == nullptr) return std::nullopt;
        std::vector<tsig::SignatureShare> shares;
        for (const ValidatorNode& node : rt.nodes) {
            if (node.crashed) continue;
            if (node.byzantine && node.byz_style == ByzStyle::Crash) continue;
            tsig::SignatureShare share = tsig::sign_share(node.key_share, message);
            if (node.byzantine && node.byz_style == ByzStyle::CorruptShare)
                share.value = share.value + tsig::GroupScalar{1};
            shares.push_back(share);
        }
        const std::size_t m = rt.spec.threshold;
        if (shares.size() < m) return std::nullopt;

        std::vector<bool> pick(shares.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
        do {
            std::vector<tsig::SignatureShare> subset;
            for (std::size_t i = 0; i < shares.size(); ++i)
                if (pick[i]) subset.push_back(shares[i]);
            const auto sig = tsig::combine(subset, {rt.spec.validators, m});
            if (tsig::verify(key->public_key, message, sig)) return sig;
        } while (std::prev_permutation(pick.begin(), pick.end()));
        return std::nullopt;
    }

    // Node-local key cache with registry fetch on version mismatch.
    tsig::GroupScalar chain_key(NodeRef ref, ChainId chain) {
        const auto* latest = coordination.latest_key(chain);
        if (latest == nullptr) return tsig::GroupScalar{0};
        ValidatorNode& node = node_at(ref);
        auto it = node.key_cache.find(chain);
        if (it == node.key_cache.end() || it->second.version != latest->version) {
            node.key_cache[chain] = {latest->version, latest->public_key};
            log_node(ref, "key_fetched", 0,
                     {{"of_chain", chain.value}, {"version", latest->version}});
        }
        return node.key_cache[chain].public_key;
    }

    void arm_timer(NodeRef ref, CrosschainTxId tx, std::uint64_t timeout_block) {
        ValidatorNode& node = node_at(ref);
        if (node.crashed || node.local_timers.contains(tx) || node.timers_done.contains(tx))
            return;
        const std::string label = "timer:" + std::to_string(ref.chain.value) + ":" +
                                  std::to_string(ref.node_id) + ":" + std::to_string(tx.value);
        std::uint64_t expiry = coordination.clock().first_tick_after(timeout_block) +
                               rng_stream(seed, label).range(0, config.timer_extra_max);
        expiry = std::max(expiry, now + 1);
        node.local_timers[tx] = expiry;
        schedule(expiry, EvTimer{ref, tx});
        log_node(ref, "timer_set", tx.value, {{"expiry", expiry}});
    }

    // ---- submission and processing ----------------------------------------

    void on_submit(const EvSubmit& ev) {
        const SubmissionSpec& sub = config.submissions[ev.submission];
        const AccountSpec& account = accounts_by_name.at(sub.account);
        const std::size_t mnode = mnode_index.at(sub.multichain_node);

        txcore::SignedEnvelope env;
        if (sub.prebuilt) {
            env = *sub.prebuilt;
        } else {
            txcore::WorldSnapshot snapshot;
            for (const auto& [id, rt] : chains) snapshot.chains.emplace(ChainId{id}, rt.state);
            txcore::BuildRequest request;
            request.root_call = sub.call;
            request.root_chain = ChainId{sub.chain};
            request.root_contract = Address{sub.contract};
            request.coordination = {ChainId{config.coordination_chain},
                                    Address{config.coordination_contract},
                                    coordination.clock().current_block() + sub.timeout_blocks};
            request.sender = Address{account.address};
            request.sender_secret = account_secret(seed, account.name);
            request.seed = next_tx_id++;
            try {
                env = txcore::build_crosschain_tx(request, snapshot, bodies);
            } catch (const txcore::ConstructionFault& fault) {
                log(static_cast<std::int64_t>(sub.chain), -1, "construction_fault", request.seed,
                    {{"reason", fault.what()}, {"account", sub.account}});
                return;
            }
        }
        const std::uint64_t tx_id = env.body.crosschain_tx_id.value;
        tx_submission[tx_id] = ev.submission;
        log(static_cast<std::int64_t>(env.body.chain_id.value), -1, "submission", tx_id,
            {{"account", sub.account},
             {"multichain_node", sub.multichain_node},
             {"function", env.body.data.function_name},
             {"transaction", txcore::to_debug_json(env.body)}});

        const auto& members = mnodes[mnode].members;
        auto member = members.find(env.body.chain_id.value);
        if (member == members.end()) {
            log(static_cast<std::int64_t>(env.body.chain_id.value), -1, "submission_rejected",
                tx_id, {{"reason", "multichain node has no member on the originating chain"}});
            return;
        }
        on_submit_originating(NodeRef{env.body.chain_id, member->second}, env, mnode);
    }

    void on_submit_originating(NodeRef ref, const txcore::SignedEnvelope& env,
                               std::size_t mnode) {
        ValidatorNode& node = node_at(ref);
        const CrosschainTransaction& tx = env.body;
        const std::uint64_t tx_id = tx.crosschain_tx_id.value;
        if (node.crashed) {
            log_node(ref, "msg_dropped", tx_id, {{"reason", "crashed"}});
            return;
        }

        auto reject = [&](const std::string& reason) {
            log_node(ref, "submission_rejected", tx_id, {{"reason", reason}});
        };
        if (tx.tx_type != TxType::Originating) return reject("root is not an Originating tx");
        if (tx.chain_id != node.chain) return reject("submitted to the wrong chain");
        if (tx.coordination_chain.value != config.coordination_chain ||
            tx.coordination_contract.value != config.coordination_contract)
            return reject("unknown coordination contract");
        const auto violations = txcore::validate_nesting(tx);
        if (!violations.empty())
            return reject("nesting: " + std::string(txcore::to_string(violations[0].kind)));
        auto sender = accounts_by_address.find(tx.sender.value);
        if (sender == accounts_by_address.end()) return reject("unknown sender");
        if (!txcore::eoa_verify(env, account_secret(seed, sender->second)))
            return reject("bad EOA signature");
        for (ChainId chain : proto::nest_chains(tx))
            if (!mnodes[mnode].members.contains(chain.value))
                return reject("multichain node has no member on chain " +
                              std::to_string(chain.value));

        if (crash_matches(CrashPoint::BeforeStart, tx_id, node.chain)) {
            crash_node(ref, CrashPoint::BeforeStart, tx_id);
            return;
        }

        const auto sig =
            gather(node.chain, coord::start_message(tx.crosschain_tx_id, tx.timeout_block,
                                                    tx.originating_chain));
        if (!sig) {
            log_node(ref, "start_rejected", tx_id, {{"reason", "share_gather_failed"}});
            return;
        }
        const auto outcome = coordination.submit_start(tx.crosschain_tx_id, tx.originating_chain,
                                                       tx.timeout_block, *sig);
        log_node(ref, "coord_submit", tx_id,
                 {{"op", "start"},
                  {"outcome", coord::to_string(outcome)},
                  {"timeout_block", tx.timeout_block},
                  {"originating_chain", tx.originating_chain.value}});
        if (outcome != coord::SubmitOutcome::Accepted) {
            log_node(ref, "start_rejected", tx_id, {{"reason", coord::to_string(outcome)}});
            return;
        }

        CoordinatorState cs;
        cs.envelope = env;
        cs.mnode = mnode;
        cs.ready_required = proto::ready_requirements(tx);
        node.coordinating[tx.crosschain_tx_id] = std::move(cs);
        arm_timer(ref, tx.crosschain_tx_id, tx.timeout_block);
        begin_processing(ref, tx, mnode, ref, /*is_view=*/false, std::nullopt, 0, 0);
    }

    void begin_processing(NodeRef ref, const CrosschainTransaction& element, std::size_t mnode,
                          NodeRef coordinator, bool is_view, std::optional<NodeRef> reply_to,
                          std::uint64_t reply_dispatch_id, std::size_t reply_sub_index) {
        ValidatorNode& node = node_at(ref);
        const std::uint64_t id = next_dispatch_id++;
        PendingTrial pending;
        pending.element = element;
        pending.is_view = is_view;
        pending.mnode = mnode;
        pending.coordinator = coordinator;
        pending.reply_to = reply_to;
        pending.reply_dispatch_id = reply_dispatch_id;
        pending.reply_sub_index = reply_sub_index;

        // Dispatch subordinate views first and cache their signed results.
        for (std::size_t i = 0; i < element.subordinates.size(); ++i) {
            const CrosschainTransaction& sub = element.subordinates[i];
            if (sub.tx_type != TxType::View) continue;
            const NodeRef target = member_ref(mnode, sub.chain_id);
            log_node(ref, "view_dispatched", sub.crosschain_tx_id.value,
                     {{"to_chain", sub.chain_id.value}, {"function", sub.data.function_name}});
            send(ref, target, MsgDispatchView{id, i, mnode, coordinator, ref, sub},
                 sub.crosschain_tx_id.value);
            ++pending.awaiting;
        }
        const bool ready_now = pending.awaiting == 0;
        node.pending.emplace(id, std::move(pending));
        if (ready_now) continue_trial(ref, id);
    }

    void continue_trial(NodeRef ref, std::uint64_t dispatch_id) {
        ValidatorNode& node = node_at(ref);
        auto it = node.pending.find(dispatch_id);
        if (it == node.pending.end()) return;
        PendingTrial pending = std::move(it->second);
        node.pending.erase(it);

        ChainRuntime& rt = chains.at(ref.chain.value);
        const CrosschainTransaction& element = pending.element;
        const std::uint64_t tx_id = element.crosschain_tx_id.value;

        vm::ExecContext ctx;
        ctx.msg_sender = element.sender;
        ctx.tx_origin = element.sender;
        ctx.from_address = element.from_address;
        ctx.from_chain = element.from_chain;
        ctx.originating_chain = element.originating_chain;
        ctx.this_chain = ChainId{ref.chain.value};
        ctx.mode = vm::ExecMode::Trial;

        const vm::TrialResult result =
            vm::execute_trial(rt.state, bodies, element.to, element.data, ctx,
                              element.subordinates, pending.cache, pending.is_view);
        if (!result.ok()) {
            log_node(ref, "trial_reverted", tx_id,
                     {{"kind", vm::to_string(result.revert_kind)},
                      {"reason", result.reason},
                      {"consumed", result.consumed_subordinates}});
            report_failure(ref, pending.coordinator, element.crosschain_tx_id,
                           std::string(vm::to_string(result.revert_kind)) + ": " + result.reason);
            return;
        }
        log_node(ref, "trial_ok", tx_id,
                 {{"consumed", result.consumed_subordinates},
                  {"is_view", pending.is_view}});

        if (pending.is_view) {
            const std::int64_t value = result.return_value.value_or(0);
            const std::uint64_t block = rt.state.block_count;
            const Bytes message = coord::view_result_message(element.crosschain_tx_id,
                                                             ChainId{ref.chain.value}, block,
                                                             value);
            const auto sig = gather(ChainId{ref.chain.value}, message);
            if (!sig) {
                log_node(ref, "share_gather_failed", tx_id, {{"purpose", "view_result"}});
                report_failure(ref, pending.coordinator, element.crosschain_tx_id,
                               "view result could not be threshold signed");
                return;
            }
            SignedViewResult signed_result{element.crosschain_tx_id, ChainId{ref.chain.value},
                                           block, value, *sig};
            log_node(ref, "view_result_sent", tx_id, {{"value", value}, {"block", block}});
            send(ref, *pending.reply_to,
                 MsgViewResult{pending.reply_dispatch_id, pending.reply_sub_index, signed_result},
                 tx_id);
            return;
        }

        // Dispatch the signed subordinate transactions, then enter the pool.
        for (const CrosschainTransaction& sub : element.subordinates) {
            if (sub.tx_type != TxType::Subordinate) continue;
            const NodeRef target = member_ref(pending.mnode, sub.chain_id);
            log_node(ref, "subordinate_dispatched", tx_id,
                     {{"to_chain", sub.chain_id.value}, {"function", sub.data.function_name}});
            send(ref, target,
                 MsgDispatchSub{next_dispatch_id++, pending.mnode, pending.coordinator, sub},
                 tx_id);
        }
        PoolEntry entry;
        entry.kind = PoolEntry::Kind::Crosschain;
        entry.element = element;
        entry.tx_id = element.crosschain_tx_id;
        entry.writes = result.writes;
        entry.processing_node = ref.node_id;
        entry.mnode = pending.mnode;
        entry.coordinator = pending.coordinator;
        entry.is_root = element.tx_type == TxType::Originating;
        rt.pool.push_back(std::move(entry));
        schedule(now + rt.spec.mining_delay, EvMine{ref.chain.value, rt.pool.size() - 1});

        if (entry_is_root_crash(element, tx_id, ref)) return;
    }

    bool entry_is_root_crash(const CrosschainTransaction& element, std::uint64_t tx_id,
                             NodeRef ref) {
        if (element.tx_type == TxType::Originating &&
            crash_matches(CrashPoint::AfterStartBeforeCommit, tx_id, ref.chain)) {
            crash_node(ref, CrashPoint::AfterStartBeforeCommit, tx_id);
            return true;
        }
        return false;
    }

    void report_failure(NodeRef from, NodeRef coordinator, CrosschainTxId tx,
                        const std::string& reason) {
        log_node(from, "failure_report", tx.value, {{"reason", reason}});
        if (from == coordinator) {
            on_ignore_trigger(coordinator, tx, reason);
        } else {
            send(from, coordinator, MsgFailure{tx, ChainId{from.chain.value}, reason}, tx.value);
        }
    }

    // ---- message handlers --------------------------------------------------

    void on_deliver(const EvDeliver& ev) {
        ValidatorNode& node = node_at(ev.to);
        const std::uint64_t tx_id = message_tx_id(ev.msg);
        if (node.crashed) {
            log_node(ev.to, "msg_dropped", tx_id,
                     {{"kind", proto::message_kind(ev.msg)}, {"reason", "crashed"}});
            return;
        }
        std::visit(
            [&](const auto& msg) { handle(ev.to, msg); },
            ev.msg);
    }

    static std::uint64_t message_tx_id(const Message& msg) {
        struct Visitor {
            std::uint64_t operator()(const MsgDispatchSub& m) const {
                return m.sub.crosschain_tx_id.value;
            }
            std::uint64_t operator()(const MsgDispatchView& m) const {
                return m.view.crosschain_tx_id.value;
            }
            std::uint64_t operator()(const MsgViewResult& m) const {
                return m.result.tx_id.value;
            }
            std::uint64_t operator()(const MsgReady& m) const { return m.ready.tx_id.value; }
            std::uint64_t operator()(const MsgFailure& m) const { return m.tx_id.value; }
            std::uint64_t operator()(const MsgSignalRequest& m) const { return m.tx_id.value; }
        };
        return std::visit(Visitor{}, msg);
    }

    void handle(NodeRef ref, const MsgDispatchSub& msg) {
        const std::uint64_t tx_id = msg.sub.crosschain_tx_id.value;
        if (crash_matches(CrashPoint::SubordinateCoordinator, tx_id, ref.chain)) {
            crash_node(ref, CrashPoint::SubordinateCoordinator, tx_id);
            return;
        }
        const auto status = coordination.status_now(msg.sub.crosschain_tx_id);
        if (status != coord::TxStatus::Started) {
            log_node(ref, "dispatch_stale", tx_id, {{"status", coord::to_string(status)}});
            return;
        }
        arm_timer(ref, msg.sub.crosschain_tx_id, msg.sub.timeout_block);
        begin_processing(ref, msg.sub, msg.mnode, msg.coordinator, /*is_view=*/false,
                         std::nullopt, 0, 0);
    }

    void handle(NodeRef ref, const MsgDispatchView& msg) {
        const std::uint64_t tx_id = msg.view.crosschain_tx_id.value;
        const auto status = coordination.status_now(msg.view.crosschain_tx_id);
        if (status != coord::TxStatus::Started) {
            log_node(ref, "dispatch_stale", tx_id, {{"status", coord::to_string(status)}});
            return;
        }
        begin_processing(ref, msg.view, msg.mnode, msg.coordinator, /*is_view=*/true,
                         msg.reply_to, msg.dispatch_id, msg.sub_index);
    }

    void handle(NodeRef ref, const MsgViewResult& msg) {
        ValidatorNode& node = node_at(ref);
        auto it = node.pending.find(msg.dispatch_id);
        if (it == node.pending.end()) {
            log_node(ref, "view_stale", msg.result.tx_id.value, {});
            return;
        }
        const SignedViewResult& r = msg.result;
        const auto key = chain_key(ref, r.chain);
        const Bytes message =
            coord::view_result_message(r.tx_id, r.chain, r.block_number, r.value);
        if (!tsig::verify(key, message, r.sig)) {
            PendingTrial pending = std::move(it->second);
            node.pending.erase(it);
            log_node(ref, "view_result_invalid", r.tx_id.value,
                     {{"of_chain", r.chain.value}});
            report_failure(ref, pending.coordinator, r.tx_id, "ViewSignatureInvalid");
            return;
        }
        it->second.cache[msg.sub_index] = r.value;
        if (--it->second.awaiting == 0) continue_trial(ref, msg.dispatch_id);
    }

    void handle(NodeRef ref, const MsgReady& msg) {
        ValidatorNode& node = node_at(ref);
        const ReadyMessage& ready = msg.ready;
        auto it = node.coordinating.find(ready.tx_id);
        if (it == node.coordinating.end()) {
            log_node(ref, "ready_stale", ready.tx_id.value, {});
            return;
        }
        const auto key = chain_key(ref, ready.chain);
        if (!tsig::verify(key, coord::ready_message(ready.tx_id, ready.chain), ready.sig)) {
            log_node(ref, "ready_invalid", ready.tx_id.value,
                     {{"of_chain", ready.chain.value}});
            return;
        }
        ++it->second.ready_received[ready.chain];
        log_node(ref, "ready_received", ready.tx_id.value,
                 {{"of_chain", ready.chain.value},
                  {"count", it->second.ready_received[ready.chain]}});
        try_commit(ref, ready.tx_id);
    }

    void handle(NodeRef ref, const MsgFailure& msg) {
        on_ignore_trigger(ref, msg.tx_id, msg.reason);
    }

    void handle(NodeRef ref, const MsgSignalRequest& msg) {
        submit_signalling(ref.chain, msg.tx_id);
    }

    // ---- commit / ignore / signalling --------------------------------------

    void try_commit(NodeRef ref, CrosschainTxId tx) {
        ValidatorNode& node = node_at(ref);
        if (node.crashed) return;
        auto it = node.coordinating.find(tx);
        if (it == node.coordinating.end()) return;
        CoordinatorState& cs = it->second;
        if (cs.resolution_done || !cs.root_mined) return;
        for (const auto& [chain, required] : cs.ready_required) {
            auto got = cs.ready_received.find(chain);
            if (got == cs.ready_received.end() || got->second < required) return;
        }
        const auto sig = gather(node.chain, coord::commit_message(tx));
        if (!sig) {
            log_node(ref, "share_gather_failed", tx.value, {{"purpose", "commit"}});
            return;
        }
        const auto outcome = coordination.submit_commit(tx, *sig);
        log_node(ref, "coord_submit", tx.value,
                 {{"op", "commit"}, {"outcome", coord::to_string(outcome)}});
        if (outcome != coord::SubmitOutcome::Accepted) return;  // timers resolve it
        cs.resolution_done = true;
        if (crash_matches(CrashPoint::AfterCommit, tx.value, ref.chain)) {
            crash_node(ref, CrashPoint::AfterCommit, tx.value);
            return;
        }
        send_signalling_requests(ref, tx, cs);
    }

    void on_ignore_trigger(NodeRef ref, CrosschainTxId tx, const std::string& reason) {
        ValidatorNode& node = node_at(ref);
        if (node.crashed) return;
        auto it = node.coordinating.find(tx);
        if (it == node.coordinating.end()) {
            log_node(ref, "failure_unknown_tx", tx.value, {{"reason", reason}});
            return;
        }
        CoordinatorState& cs = it->second;
        if (cs.resolution_done) return;
        const auto sig = gather(node.chain, coord::ignore_message(tx));
        if (!sig) {
            log_node(ref, "share_gather_failed", tx.value, {{"purpose", "ignore"}});
            return;
        }
        const auto outcome = coordination.submit_ignore(tx, *sig);
        log_node(ref, "coord_submit", tx.value,
                 {{"op", "ignore"}, {"outcome", coord::to_string(outcome)}, {"reason", reason}});
        if (outcome != coord::SubmitOutcome::Accepted) return;
        cs.resolution_done = true;
        send_signalling_requests(ref, tx, cs);
    }

    void send_signalling_requests(NodeRef ref, CrosschainTxId tx, const CoordinatorState& cs) {
        for (ChainId chain : proto::participating_chains(cs.envelope.body)) {
            if (chain == ref.chain) {
                submit_signalling(chain, tx);
                continue;
            }
            const NodeRef target = member_ref(cs.mnode, chain);
            log_node(ref, "signalling_requested", tx.value, {{"to_chain", chain.value}});
            send(ref, target, MsgSignalRequest{tx}, tx.value);
        }
    }

    void submit_signalling(ChainId chain, CrosschainTxId tx) {
        ChainRuntime& rt = chains.at(chain.value);
        PoolEntry entry;
        entry.kind = PoolEntry::Kind::Signalling;
        entry.tx_id = tx;
        entry.element.tx_type = TxType::Signalling;
        entry.element.chain_id = chain;
        entry.element.crosschain_tx_id = tx;
        rt.pool.push_back(std::move(entry));
        schedule(now + rt.spec.mining_delay, EvMine{chain.value, rt.pool.size() - 1});
        log(static_cast<std::int64_t>(chain.value), -1, "signalling_submitted", tx.value, {});
    }

    // ---- mining -------------------------------------------------------------

    void on_mine(const EvMine& ev) {
        ChainRuntime& rt = chains.at(ev.chain);
        if (rt.pool[ev.pool_index].mined) return;
        rt.pool[ev.pool_index].mined = true;
        // copy: nested handlers may grow the pool vector
        const PoolEntry entry = rt.pool[ev.pool_index];
        const std::uint64_t tx_id = entry.tx_id.value;

        if (entry.kind == PoolEntry::Kind::Signalling) {
            ++rt.state.block_count;
            log(static_cast<std::int64_t>(ev.chain), -1, "signalling_mined", tx_id, {});
            handle_signalling(ChainId{ev.chain}, entry.tx_id);
            return;
        }

        const auto status = coordination.status_now(entry.tx_id);
        if (status != coord::TxStatus::Started) {
            log(static_cast<std::int64_t>(ev.chain), -1, "mining_skipped", tx_id,
                {{"status", coord::to_string(status)}});
            return;
        }

        // The lock set is the transaction's target contract plus every
        // contract it wrote. All locks are validated before any is taken.
        std::set<Address> lock_set{entry.element.to};
        for (const auto& [address, writes] : entry.writes) lock_set.insert(address);
        for (Address address : lock_set) {
            vm::ContractInstance* contract = rt.state.find(address);
            if (contract == nullptr) {
                report_failure(NodeRef{ChainId{ev.chain}, entry.processing_node},
                               entry.coordinator, entry.tx_id,
                               "no contract at " + std::to_string(address.value));
                return;
            }
            if (const auto fault = vm::check_lock(*contract, entry.tx_id)) {
                log(static_cast<std::int64_t>(ev.chain), -1, "lock_fault", tx_id,
                    {{"contract", address.value}, {"fault", fault->describe()}});
                report_failure(NodeRef{ChainId{ev.chain}, entry.processing_node},
                               entry.coordinator, entry.tx_id,
                               "LockFault " + fault->describe() + " on contract " +
                                   std::to_string(address.value));
                return;
            }
        }
        for (Address address : lock_set) {
            vm::ContractInstance* contract = rt.state.find(address);
            auto writes = entry.writes.find(address);
            vm::lock_and_stage(*contract,
                               writes == entry.writes.end() ? vm::Storage{} : writes->second,
                               entry.tx_id);
            rt.state.staged_by_tx[entry.tx_id].insert(address);
            log(static_cast<std::int64_t>(ev.chain), -1, "lock_staged", tx_id,
                {{"contract", address.value}});
        }
        ++rt.state.block_count;
        ++rt.state.nonces[entry.element.sender];
        log(static_cast<std::int64_t>(ev.chain), -1, "mined", tx_id,
            {{"block", rt.state.block_count}, {"is_root", entry.is_root}});

        for (const ValidatorNode& node : rt.nodes) {
            if (node.byzantine || node.crashed) continue;
            arm_timer(NodeRef{ChainId{ev.chain}, node.node_id}, entry.tx_id,
                      entry.element.timeout_block);
        }

        if (entry.is_root) {
            ValidatorNode& coordinator = node_at(entry.coordinator);
            if (!coordinator.crashed && coordinator.coordinating.contains(entry.tx_id)) {
                coordinator.coordinating[entry.tx_id].root_mined = true;
                try_commit(entry.coordinator, entry.tx_id);
            }
            return;
        }

        // Subordinate chain: threshold-sign the Ready message.
        const auto sig = gather(ChainId{ev.chain}, coord::ready_message(entry.tx_id,
                                                                        ChainId{ev.chain}));
        if (!sig) {
            log(static_cast<std::int64_t>(ev.chain), -1, "share_gather_failed", tx_id,
                {{"purpose", "ready"}});
            return;  // the time-out is the backstop
        }
        const NodeRef from{ChainId{ev.chain}, entry.processing_node};
        log_node(from, "ready_sent", tx_id, {});
        send(from, entry.coordinator, MsgReady{ReadyMessage{entry.tx_id, ChainId{ev.chain}, *sig}},
             tx_id);
    }

    void handle_signalling(ChainId chain, CrosschainTxId tx) {
        ChainRuntime& rt = chains.at(chain.value);
        const auto status = coordination.status_now(tx);
        if (status != coord::TxStatus::Committed && status != coord::TxStatus::Ignored) {
            log(static_cast<std::int64_t>(chain.value), -1, "signalling_noop", tx.value,
                {{"status", coord::to_string(status)}});
            return;
        }
        auto staged = rt.state.staged_by_tx.find(tx);
        if (staged != rt.state.staged_by_tx.end()) {
            for (Address address : staged->second) {
                vm::ContractInstance* contract = rt.state.find(address);
                if (contract == nullptr || contract->lock_owner != tx) continue;
                if (status == coord::TxStatus::Committed) {
                    vm::unlock_commit(*contract);
                    log(static_cast<std::int64_t>(chain.value), -1, "unlock_commit", tx.value,
                        {{"contract", address.value}});
                } else {
                    vm::unlock_discard(*contract);
                    log(static_cast<std::int64_t>(chain.value), -1, "unlock_discard", tx.value,
                        {{"contract", address.value}});
                }
            }
            rt.state.staged_by_tx.erase(staged);
        }
        for (ValidatorNode& node : rt.nodes) {
            auto timer = node.local_timers.find(tx);
            if (timer == node.local_timers.end()) continue;
            node.local_timers.erase(timer);
            node.timers_done.insert(tx);
            log_node(NodeRef{chain, node.node_id}, "timer_cancelled", tx.value,
                     {{"reason", "signalling"}});
        }
    }

    void on_timer(const EvTimer& ev) {
        ValidatorNode& node = node_at(ev.node);
        if (node.crashed) return;
        auto it = node.local_timers.find(ev.tx);
        if (it == node.local_timers.end() || it->second != now) return;  // cancelled or re-armed
        node.local_timers.erase(it);
        node.timers_done.insert(ev.tx);
        const auto status = coordination.status_now(ev.tx);
        log_node(ev.node, "timer_fired", ev.tx.value,
                 {{"status", coord::to_string(status)}});
        submit_signalling(node.chain, ev.tx);
    }

    // ---- main loop -----------------------------------------------------------

    RunResult run() {
        while (!queue.empty()) {
            const Event ev = queue.top();
            if (ev.tick > config.max_ticks) {
                max_ticks_exceeded = true;
                break;
            }
            queue.pop();
            if (ev.tick > now) {
                coordination.clock().advance(ev.tick - now);
                now = ev.tick;
            }
            std::visit([&](const auto& payload) { dispatch(payload); }, ev.payload);
        }

        log(-1, -1, "run_end", 0,
            {{"final_tick", now},
             {"max_ticks_exceeded", max_ticks_exceeded},
             {"label", label()}});

        RunResult result;
        result.final_state = final_state();
        result.outside_assumptions = outside_assumptions;
        result.max_ticks_exceeded = max_ticks_exceeded;
        result.trace = std::move(trace);
        return result;
    }

    void dispatch(const EvSubmit& ev) { on_submit(ev); }
    void dispatch(const EvDeliver& ev) { on_deliver(ev); }
    void dispatch(const EvMine& ev) { on_mine(ev); }
    void dispatch(const EvTimer& ev) { on_timer(ev); }

    std::string label() const {
        return outside_assumptions ? "outside_assumptions" : "within_assumptions";
    }

    FinalState final_state() const {
        FinalState fs;
        fs.final_tick = now;
        fs.max_ticks_exceeded = max_ticks_exceeded;
        fs.label = label();
        fs.final_block = coordination.clock().current_block();
        for (const auto& [tx, record] : coordination.records()) {
            CoordinationRecordDump dump;
            dump.stored = coord::to_string(record.status);
            dump.resolved = coord::to_string(coordination.status(tx, fs.final_block));
            dump.timeout_block = record.timeout_block;
            dump.originating_chain = record.originating_chain.value;
            fs.coordination.emplace(tx.value, std::move(dump));
        }
        for (const auto& [id, rt] : chains) {
            ChainDump chain_dump;
            chain_dump.block_count = rt.state.block_count;
            for (const auto& [address, contract] : rt.state.contracts) {
                ContractDump dump;
                dump.lockable = contract.lockable;
                if (contract.lock_owner) dump.locked_by = contract.lock_owner->value;
                dump.storage = contract.committed_storage;
                chain_dump.contracts.emplace(address.value, std::move(dump));
            }
            fs.chains.emplace(id, std::move(chain_dump));
        }
        return fs;
    }
};

Runner::Runner(ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_, seed)) {}

Runner::~Runner() = default;

RunResult Runner::run() { return impl_->run(); }

void Runner::inject_message(std::uint64_t tick, NodeRef from, NodeRef to, proto::Message msg) {
    impl_->schedule(tick, EvDeliver{from, to, std::move(msg)});
}

RunResult run(const ScenarioConfig& config, std::uint64_t seed) {
    Runner runner(config, seed);
    return runner.run();
}

}  // namespace xchain::sim
