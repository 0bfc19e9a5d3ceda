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

#include "xchain/contractvm.hpp"

// Contract bodies referenced by name from scenario configs. Storage-layout
// conventions (keys are plain integers):
//   * keys >= 100 hold wiring: target chain ids, contract addresses and
//     account ids, as listed per body below;
//   * low keys hold application state.
namespace xchain::vm {

namespace {

ChainId chain_of(CallFrame& f, std::uint64_t key) { return ChainId{f.load(key)}; }
Address addr_of(CallFrame& f, std::uint64_t key) { return Address{f.load(key)}; }
std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }
std::uint64_t u64(std::int64_t v) { return static_cast<std::uint64_t>(v); }

void register_nested_example(BodyRegistry& reg) {
    // con_a: 100 = callee chain, 101 = callee contract (funcB)
    reg.add("con_a", "funcA", 1, [](CallFrame& f) -> std::int64_t {
        f.store(1, u64(f.arg(0)));
        f.call_tx(chain_of(f, 100), addr_of(f, 101), "funcB", {f.arg(0)});
        return 0;
    });
    // con_b: 0 = state1, 1 = state2, 100/101 = funcC view target,
    // 102/103 = funcD transaction target
    reg.add("con_b", "funcB", 1, [](CallFrame& f) -> std::int64_t {
        if (f.load(0) != 1) {
            const std::int64_t v =
                f.call_view(chain_of(f, 100), addr_of(f, 101), "funcC", {f.arg(0)});
            f.call_tx(chain_of(f, 102), addr_of(f, 103), "funcD", {v + i64(f.load(1))});
            f.store(2, u64(v));
        }
        return 0;
    });
    // con_c: 0 = addend returned on top of the parameter
    reg.add("con_c", "funcC", 1,
            [](CallFrame& f) -> std::int64_t { return f.arg(0) + i64(f.load(0)); });
    reg.add("con_d", "funcD", 1, [](CallFrame& f) -> std::int64_t {
        f.store(0, u64(f.arg(0)));
        return 0;
    });
}

void register_travel_agent(BodyRegistry& reg) {
    // travel_agent: 100 = hotel chain, 101 = hotel reservations,
    // 102 = hotel token, 103 = train chain, 104 = train reservations,
    // 105 = train token, 106 = own account, 107 = hotel payee,
    // 108 = train payee; 0 counts completed bookings.
    // book_trip(room, seat, hotel_price, train_price)
    reg.add("travel_agent", "book_trip", 4, [](CallFrame& f) -> std::int64_t {
        const auto hotel = chain_of(f, 100);
        const auto train = chain_of(f, 103);
        const std::int64_t me = i64(f.load(106));
        f.call_tx(hotel, addr_of(f, 101), "reserve", {f.arg(0), me});
        f.call_tx(hotel, addr_of(f, 102), "transfer", {me, i64(f.load(107)), f.arg(2)});
        f.call_tx(train, addr_of(f, 104), "reserve", {f.arg(1), me});
        f.call_tx(train, addr_of(f, 105), "transfer", {me, i64(f.load(108)), f.arg(3)});
        f.store(0, f.load(0) + 1);
        return 0;
    });
    // reservation: slot k lives at key 1000+k and holds the booking account
    reg.add("reservation", "reserve", 2, [](CallFrame& f) -> std::int64_t {
        const std::uint64_t slot = 1000 + u64(f.arg(0));
        f.require(f.load(slot) == 0, "slot already booked");
        f.store(slot, u64(f.arg(1)));
        return 0;
    });
    // token: balances keyed by account id; the submitting EOA must own `from`
    reg.add("token", "transfer", 3, [](CallFrame& f) -> std::int64_t {
        const std::uint64_t from = u64(f.arg(0));
        const std::uint64_t to = u64(f.arg(1));
        const std::uint64_t amount = u64(f.arg(2));
        f.require(f.ctx().tx_origin.value == from, "not the account owner");
        f.require(f.load(from) >= amount, "insufficient balance");
        f.store(from, f.load(from) - amount);
        f.store(to, f.load(to) + amount);
        return 0;
    });
}

void register_erc20_router(BodyRegistry& reg) {
    // erc20_router (nonlockable): 1999 = slot count, 2000.. = slot addresses.
    // Routes around locks so transfers can run in parallel.
    reg.add("erc20_router", "pick_src", 2, [](CallFrame& f) -> std::int64_t {
        const std::uint64_t count = f.load(1999);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Address slot{f.load(2000 + i)};
            if (f.contract_locked(slot)) continue;
            if (f.call_view(f.ctx().this_chain, slot, "owner", {}) != f.arg(0)) continue;
            if (f.call_view(f.ctx().this_chain, slot, "balance", {}) < f.arg(1)) continue;
            return i64(slot.value);
        }
        f.fail("no unlocked payment slot with sufficient funds");
    });
    reg.add("erc20_router", "pick_dst", 1, [](CallFrame& f) -> std::int64_t {
        const std::uint64_t count = f.load(1999);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Address slot{f.load(2000 + i)};
            if (f.contract_locked(slot)) continue;
            if (f.call_view(f.ctx().this_chain, slot, "owner", {}) != f.arg(0)) continue;
            return i64(slot.value);
        }
        f.fail("no unlocked payment slot for the destination account");
    });
    // payment_slot: 0 = owner account, 1 = balance
    reg.add("payment_slot", "owner", 0,
            [](CallFrame& f) -> std::int64_t { return i64(f.load(0)); });
    reg.add("payment_slot", "balance", 0,
            [](CallFrame& f) -> std::int64_t { return i64(f.load(1)); });
    reg.add("payment_slot", "pay", 2, [](CallFrame& f) -> std::int64_t {
        f.require(f.ctx().tx_origin.value == f.load(0), "not the slot owner");
        f.require(f.load(1) >= u64(f.arg(1)), "insufficient slot balance");
        f.store(1, f.load(1) - u64(f.arg(1)));
        f.call_tx(f.ctx().this_chain, Address{u64(f.arg(0))}, "credit", {f.arg(1)});
        return 0;
    });
    reg.add("payment_slot", "credit", 1, [](CallFrame& f) -> std::int64_t {
        f.store(1, f.load(1) + u64(f.arg(0)));
        return 0;
    });
    // erc20_agent: 100 = token chain, 101 = router, 102 = own account,
    // 103 = payee account; 0 counts completed payments.
    reg.add("erc20_agent", "pay", 1, [](CallFrame& f) -> std::int64_t {
        const auto token_chain = chain_of(f, 100);
        const auto router = addr_of(f, 101);
        const std::int64_t src =
            f.call_view(token_chain, router, "pick_src", {i64(f.load(102)), f.arg(0)});
        const std::int64_t dst = f.call_view(token_chain, router, "pick_dst", {i64(f.load(103))});
        f.call_tx(token_chain, Address{u64(src)}, "pay", {dst, f.arg(0)});
        f.store(0, f.load(0) + 1);
        return 0;
    });
}

void register_auth(BodyRegistry& reg) {
    // guard: authorized (from_address, from_chain, originating_chain) at
    // keys 10..12; receive() mirrors the three-require precompile check.
    reg.add("guard", "receive", 1, [](CallFrame& f) -> std::int64_t {
        f.require(f.ctx().from_address.value == f.load(10), "unauthorized from address");
        f.require(f.ctx().from_chain.value == f.load(11), "unauthorized from blockchain");
        f.require(f.ctx().originating_chain.value == f.load(12),
                  "unauthorized originating blockchain");
        f.store(0, u64(f.arg(0)));
        return 0;
    });
    reg.add("guard", "set_auth", 2, [](CallFrame& f) -> std::int64_t {
        f.store(u64(f.arg(0)), u64(f.arg(1)));
        return 0;
    });
    // auth_caller: 100 = guard chain, 101 = guard address
    reg.add("auth_caller", "invoke", 1, [](CallFrame& f) -> std::int64_t {
        f.call_tx(chain_of(f, 100), addr_of(f, 101), "receive", {f.arg(0)});
        f.store(0, f.load(0) + 1);
        return 0;
    });
}

void register_repeated_contract(BodyRegistry& reg) {
    // con_x / con_y: f1 -> (other chain) f2 -> (back) f3; the contract call
    // graph revisits con_x, which the locking protocol forbids.
    reg.add("con_x", "f1", 1, [](CallFrame& f) -> std::int64_t {
        f.store(0, f.load(0) + 1);
        f.call_tx(chain_of(f, 100), addr_of(f, 101), "f2", {f.arg(0)});
        return 0;
    });
    reg.add("con_x", "f3", 1, [](CallFrame& f) -> std::int64_t {
        f.store(1, u64(f.arg(0)));
        return 0;
    });
    reg.add("con_y", "f2", 1, [](CallFrame& f) -> std::int64_t {
        f.store(0, u64(f.arg(0)));
        f.call_tx(chain_of(f, 100), addr_of(f, 101), "f3", {f.arg(0) + 1});
        return 0;
    });
}

BodyRegistry make_builtin() {
    BodyRegistry reg;
    register_nested_example(reg);
    register_travel_agent(reg);
    register_erc20_router(reg);
    register_auth(reg);
    register_repeated_contract(reg);
    return reg;
}

}  // namespace

const BodyRegistry& builtin_bodies() {
    static const BodyRegistry registry = make_builtin();
    return registry;
}

}  // namespace xchain::vm
