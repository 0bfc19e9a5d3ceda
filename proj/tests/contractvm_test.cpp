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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xchain/contractvm.hpp"

using namespace xchain;
using namespace xchain::vm;
using txcore::Address;
using txcore::CallPayload;
using txcore::ChainId;
using txcore::CrosschainTransaction;
using txcore::CrosschainTxId;
using txcore::TxType;

namespace {

constexpr std::uint64_t kState1 = 0;
constexpr std::uint64_t kState2 = 1;

BodyRegistry test_registry() {
    BodyRegistry reg;
    reg.add("con_b", "funcB", 1, [](CallFrame& f) -> std::int64_t {
        if (f.load(kState1) != 1) {
            const std::int64_t v = f.call_view(ChainId{3}, Address{33}, "funcC", {f.arg(0)});
            f.call_tx(ChainId{4}, Address{44}, "funcD",
                      {v + static_cast<std::int64_t>(f.load(kState2))});
            f.store(2, static_cast<std::uint64_t>(v));
        }
        return 0;
    });
    reg.add("counter", "bump", 0, [](CallFrame& f) -> std::int64_t {
        f.store(0, f.load(0) + 1);
        return static_cast<std::int64_t>(f.load(0));
    });
    reg.add("guarded", "receive", 1, [](CallFrame& f) -> std::int64_t {
        f.require(f.ctx().from_address == Address{f.load(10)}, "wrong from address");
        f.require(f.ctx().from_chain == ChainId{f.load(11)}, "wrong from chain");
        f.require(f.ctx().originating_chain == ChainId{f.load(12)}, "wrong originating chain");
        f.store(0, static_cast<std::uint64_t>(f.arg(0)));
        return 0;
    });
    reg.add("caller", "run_local", 0, [](CallFrame& f) -> std::int64_t {
        // local contract-to-contract call: callee sees this contract as sender
        return f.call_view(f.ctx().this_chain, Address{60}, "who", {});
    });
    reg.add("who_am_i", "who", 0, [](CallFrame& f) -> std::int64_t {
        return static_cast<std::int64_t>(f.ctx().msg_sender.value);
    });
    reg.add("viewer", "peek", 0, [](CallFrame& f) -> std::int64_t {
        return static_cast<std::int64_t>(f.load(5));
    });
    reg.add("writer_view", "bad", 0, [](CallFrame& f) -> std::int64_t {
        f.store(0, 1);
        return 0;
    });
    return reg;
}

ExecContext trial_ctx(ChainId chain) {
    ExecContext ctx;
    ctx.msg_sender = Address{900};
    ctx.tx_origin = Address{900};
    ctx.from_address = Address{11};
    ctx.from_chain = ChainId{1};
    ctx.originating_chain = ChainId{1};
    ctx.this_chain = chain;
    ctx.mode = ExecMode::Trial;
    return ctx;
}

CrosschainTransaction sub_stub(TxType type, ChainId chain, Address to, std::string fn,
                               std::vector<std::int64_t> args) {
    CrosschainTransaction tx;
    tx.tx_type = type;
    tx.chain_id = chain;
    tx.to = to;
    tx.data = CallPayload{std::move(fn), std::move(args)};
    return tx;
}

}  // namespace

TEST_CASE("deploy starts unlocked and rejects reuse") {
    ChainState chain;
    chain.id = ChainId{1};
    const auto& c = chain.deploy(Address{10}, true, "counter");
    CHECK_FALSE(c.locked());
    CHECK(c.lockable);
    CHECK_THROWS_AS(chain.deploy(Address{10}, false, "counter"), AddressInUse);
}

TEST_CASE("check_lock semantics") {
    ChainState chain;
    chain.id = ChainId{1};
    auto& lockable = chain.deploy(Address{10}, true, "counter");
    auto& router = chain.deploy(Address{11}, false, "counter");

    CHECK_FALSE(check_lock(lockable, CrosschainTxId{1}).has_value());

    const auto nonlockable = check_lock(router, CrosschainTxId{1});
    REQUIRE(nonlockable.has_value());
    CHECK(nonlockable->kind == LockFault::Kind::Nonlockable);

    lock_and_stage(lockable, {{1, 7}}, CrosschainTxId{1});
    // the same crosschain transaction revisiting the contract still faults
    const auto repeated = check_lock(lockable, CrosschainTxId{1});
    REQUIRE(repeated.has_value());
    CHECK(repeated->kind == LockFault::Kind::AlreadyLocked);
    CHECK(repeated->owner == CrosschainTxId{1});
}

TEST_CASE("overlay isolation and commit/discard") {
    ChainState chain;
    chain.id = ChainId{1};
    auto& c = chain.deploy(Address{10}, true, "counter", {{1, 3}});

    lock_and_stage(c, {{1, 7}, {2, 9}}, CrosschainTxId{5});
    CHECK(c.committed(1) == 3);  // overlay is invisible to committed reads

    SUBCASE("commit merges the overlay") {
        unlock_commit(c);
        CHECK(c.committed(1) == 7);
        CHECK(c.committed(2) == 9);
        CHECK_FALSE(c.locked());
    }
    SUBCASE("discard drops the overlay") {
        unlock_discard(c);
        CHECK(c.committed(1) == 3);
        CHECK(c.committed(2) == 0);
        CHECK_FALSE(c.locked());
    }
    SUBCASE("staging while locked throws") {
        CHECK_THROWS_AS(lock_and_stage(c, {{1, 8}}, CrosschainTxId{6}), LockViolation);
    }
}

TEST_CASE("unlock on an unlocked contract throws NotLocked") {
    ChainState chain;
    chain.id = ChainId{1};
    auto& c = chain.deploy(Address{10}, true, "counter");
    CHECK_THROWS_AS(unlock_commit(c), NotLocked);
    CHECK_THROWS_AS(unlock_discard(c), NotLocked);
}

TEST_CASE("trial executes the worked example against cached view results") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{22}, true, "con_b", {{kState1, 2}, {kState2, 4}});

    const std::vector<CrosschainTransaction> subs{
        sub_stub(TxType::View, ChainId{3}, Address{33}, "funcC", {1}),
        sub_stub(TxType::Subordinate, ChainId{4}, Address{44}, "funcD", {10}),
    };
    const ViewResultCache cache{{0, 6}};

    const auto result = execute_trial(chain, reg, Address{22}, CallPayload{"funcB", {1}},
                                      trial_ctx(ChainId{2}), subs, cache);
    CHECK(result.ok());
    CHECK(result.consumed_subordinates == 2);
    CHECK(result.writes.at(Address{22}).at(2) == 6);
}

TEST_CASE("trial reverts on parameter mismatch") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{22}, true, "con_b", {{kState1, 2}, {kState2, 4}});

    const std::vector<CrosschainTransaction> subs{
        sub_stub(TxType::View, ChainId{3}, Address{33}, "funcC", {1}),
        sub_stub(TxType::Subordinate, ChainId{4}, Address{44}, "funcD", {11}),  // body computes 10
    };
    const auto result = execute_trial(chain, reg, Address{22}, CallPayload{"funcB", {1}},
                                      trial_ctx(ChainId{2}), subs, ViewResultCache{{0, 6}});
    CHECK_FALSE(result.ok());
    CHECK(result.revert_kind == TrialResult::RevertKind::ParamMismatch);
    CHECK(result.writes.empty());
}

TEST_CASE("trial reverts when a signed subordinate is never called") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{22}, true, "con_b", {{kState1, 1}, {kState2, 4}});  // branch not taken

    const std::vector<CrosschainTransaction> subs{
        sub_stub(TxType::Subordinate, ChainId{4}, Address{44}, "funcD", {10}),
    };
    const auto result = execute_trial(chain, reg, Address{22}, CallPayload{"funcB", {1}},
                                      trial_ctx(ChainId{2}), subs, {});
    CHECK_FALSE(result.ok());
    CHECK(result.revert_kind == TrialResult::RevertKind::UnconsumedSubordinate);
}

TEST_CASE("trial reverts when a view result is missing from the cache") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{22}, true, "con_b", {{kState1, 2}, {kState2, 4}});

    const std::vector<CrosschainTransaction> subs{
        sub_stub(TxType::View, ChainId{3}, Address{33}, "funcC", {1}),
        sub_stub(TxType::Subordinate, ChainId{4}, Address{44}, "funcD", {10}),
    };
    const auto result = execute_trial(chain, reg, Address{22}, CallPayload{"funcB", {1}},
                                      trial_ctx(ChainId{2}), subs, /*cache=*/{});
    CHECK_FALSE(result.ok());
    CHECK(result.revert_kind == TrialResult::RevertKind::MissingViewResult);
}

TEST_CASE("trial is deterministic") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{22}, true, "con_b", {{kState1, 2}, {kState2, 4}});
    const std::vector<CrosschainTransaction> subs{
        sub_stub(TxType::View, ChainId{3}, Address{33}, "funcC", {1}),
        sub_stub(TxType::Subordinate, ChainId{4}, Address{44}, "funcD", {10}),
    };
    const auto a = execute_trial(chain, reg, Address{22}, CallPayload{"funcB", {1}},
                                 trial_ctx(ChainId{2}), subs, ViewResultCache{{0, 6}});
    const auto b = execute_trial(chain, reg, Address{22}, CallPayload{"funcB", {1}},
                                 trial_ctx(ChainId{2}), subs, ViewResultCache{{0, 6}});
    CHECK(a.ok());
    CHECK(a.writes == b.writes);
    CHECK(a.consumed_subordinates == b.consumed_subordinates);
}

TEST_CASE("contract fault surfaces the reason") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{50}, true, "guarded", {{10, 11}, {11, 1}, {12, 1}});

    auto ctx = trial_ctx(ChainId{2});
    const auto ok = execute_trial(chain, reg, Address{50}, CallPayload{"receive", {5}}, ctx, {}, {});
    CHECK(ok.ok());
    CHECK(ok.writes.at(Address{50}).at(0) == 5);

    ctx.from_address = Address{12};
    const auto bad =
        execute_trial(chain, reg, Address{50}, CallPayload{"receive", {5}}, ctx, {}, {});
    CHECK_FALSE(bad.ok());
    CHECK(bad.revert_kind == TrialResult::RevertKind::ContractFault);
    CHECK(bad.reason == "wrong from address");
}

TEST_CASE("missing function and arity mismatch fault") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{10}, true, "counter");
    auto r1 = execute_trial(chain, reg, Address{10}, CallPayload{"nope", {}},
                            trial_ctx(ChainId{2}), {}, {});
    CHECK(r1.revert_kind == TrialResult::RevertKind::ContractFault);
    auto r2 = execute_trial(chain, reg, Address{10}, CallPayload{"bump", {1}},
                            trial_ctx(ChainId{2}), {}, {});
    CHECK(r2.revert_kind == TrialResult::RevertKind::ContractFault);
}

TEST_CASE("local calls set msg_sender to the calling contract") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{59}, true, "caller");
    chain.deploy(Address{60}, true, "who_am_i");
    const auto result = execute_trial(chain, reg, Address{59}, CallPayload{"run_local", {}},
                                      trial_ctx(ChainId{2}), {}, {});
    REQUIRE(result.ok());
    CHECK(result.return_value == 59);
}

TEST_CASE("view frames cannot write or send transactions") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    chain.deploy(Address{70}, false, "writer_view");
    const auto result = execute_trial(chain, reg, Address{70}, CallPayload{"bad", {}},
                                      trial_ctx(ChainId{2}), {}, {}, /*is_view=*/true);
    CHECK_FALSE(result.ok());
    CHECK(result.revert_kind == TrialResult::RevertKind::ContractFault);
}

TEST_CASE("views read committed state and never stage writes") {
    const auto reg = test_registry();
    ChainState chain;
    chain.id = ChainId{2};
    auto& c = chain.deploy(Address{80}, true, "viewer", {{5, 123}});
    lock_and_stage(c, {{5, 999}}, CrosschainTxId{9});  // pending overlay must stay invisible
    const auto result = execute_trial(chain, reg, Address{80}, CallPayload{"peek", {}},
                                      trial_ctx(ChainId{2}), {}, {}, /*is_view=*/true);
    REQUIRE(result.ok());
    CHECK(result.return_value == 123);
    CHECK(result.writes.empty());
}
