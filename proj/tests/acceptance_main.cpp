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

// Acceptance suite: one criterion per section, one pass/fail line each.

#include <chrono>
#include <functional>
#include <iostream>

#include "xchain/builder.hpp"
#include "xchain/checkers.hpp"
#include "xchain/scenario.hpp"

using namespace xchain;
using namespace xchain::sim;

namespace {

struct Criterion {
    std::vector<std::string> failures;
    std::size_t checks = 0;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 8) failures.push_back(what);
        if (!ok && failures.size() == 8) failures.push_back("...");
    }
};

int g_failed = 0;

void run_criterion(const std::string& name, const std::function<void(Criterion&)>& body) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& error) {
        c.require(false, std::string("exception: ") + error.what());
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    if (c.failures.empty()) {
        std::cout << "PASS " << name << " (" << c.checks << " checks, " << elapsed << " ms)\n";
    } else {
        ++g_failed;
        std::cout << "FAIL " << name << " (" << elapsed << " ms)\n";
        for (const auto& f : c.failures) std::cout << "       " << f << "\n";
    }
}

std::string resolved_status(const FinalState& fs, std::uint64_t tx) {
    auto it = fs.coordination.find(tx);
    return it == fs.coordination.end() ? "NotStarted" : it->second.resolved;
}

bool any_locked(const FinalState& fs) {
    for (const auto& [chain, dump] : fs.chains)
        for (const auto& [addr, contract] : dump.contracts)
            if (contract.locked_by) return true;
    return false;
}

std::uint64_t storage_at(const FinalState& fs, std::uint64_t chain, std::uint64_t contract,
                         std::uint64_t key) {
    const auto& storage = fs.chains.at(chain).contracts.at(contract).storage;
    auto it = storage.find(key);
    return it == storage.end() ? 0 : it->second;
}

std::size_t count_kind(const Trace& trace, std::string_view kind) {
    std::size_t n = 0;
    for (const auto& rec : trace.records())
        if (rec.kind == kind) ++n;
    return n;
}

bool trace_has(const Trace& trace, std::string_view kind, std::string_view detail_contains) {
    for (const auto& rec : trace.records())
        if (rec.kind == kind && rec.details.dump().find(detail_contains) != std::string::npos)
            return true;
    return false;
}

// Randomized fault mix for the 200-run corpus: crash points, up to 30%
// message loss and delivery delays, all drawn from a labeled stream.
std::vector<FaultSpec> random_faults(const ScenarioConfig& config, RngStream& rng) {
    std::vector<FaultSpec> faults;
    if (rng.below(3) == 0 && !config.submissions.empty()) {
        CrashCoordinatorFault crash;
        const std::uint64_t which = rng.below(4);
        crash.submission = rng.below(config.submissions.size());
        if (which == 3) {
            crash.point = CrashPoint::SubordinateCoordinator;
            crash.chain = config.chains[rng.below(config.chains.size())].id;
        } else {
            crash.point = static_cast<CrashPoint>(which);
        }
        faults.push_back(crash);
    }
    if (rng.below(2) == 0) {
        MessageLossFault loss;
        loss.rate = static_cast<double>(rng.below(31)) / 100.0;
        const std::array<MsgScope, 5> scopes{MsgScope::All, MsgScope::Ready, MsgScope::Dispatch,
                                             MsgScope::ViewResult, MsgScope::Signalling};
        loss.scope = scopes[rng.below(scopes.size())];
        faults.push_back(loss);
    }
    if (rng.below(2) == 0) {
        MessageDelayFault delay;
        delay.lo = 1;
        delay.hi = 1 + rng.below(5);
        faults.push_back(delay);
    }
    return faults;
}

// Genesis snapshot of a scenario's contracts, for building envelopes the
// way submissions do.
txcore::WorldSnapshot genesis_snapshot(const ScenarioConfig& config) {
    txcore::WorldSnapshot world;
    for (const auto& chain : config.chains) {
        auto& state = world.chains[txcore::ChainId{chain.id}];
        state.id = txcore::ChainId{chain.id};
    }
    for (const auto& contract : config.contracts)
        world.chains.at(txcore::ChainId{contract.chain})
            .deploy(txcore::Address{contract.address}, contract.lockable, contract.body,
                    contract.storage);
    return world;
}

txcore::SignedEnvelope build_for(const ScenarioConfig& config, std::uint64_t seed,
                                 std::size_t submission) {
    const auto& sub = config.submissions[submission];
    const auto account =
        *std::find_if(config.accounts.begin(), config.accounts.end(),
                      [&](const auto& a) { return a.name == sub.account; });
    txcore::BuildRequest request;
    request.root_call = sub.call;
    request.root_chain = txcore::ChainId{sub.chain};
    request.root_contract = txcore::Address{sub.contract};
    request.coordination = {txcore::ChainId{config.coordination_chain},
                            txcore::Address{config.coordination_contract}, sub.timeout_blocks};
    request.sender = txcore::Address{account.address};
    request.sender_secret = account_secret(seed, account.name);
    request.seed = 1;
    return txcore::build_crosschain_tx(request, genesis_snapshot(config), vm::builtin_bodies());
}

// ---------------------------------------------------------------------------

void criterion_1_and_2() {
    struct Shared {
        std::size_t runs = 0;
    };
    auto shared = std::make_shared<Shared>();
    // both criteria consume the same 200-run corpus per packaged scenario
    auto corpus = [shared](Criterion& c, bool safety_side) {
        for (const auto& entry : cli::scenario_catalog()) {
            for (std::uint64_t i = 0; i < 200; ++i) {
                ScenarioConfig config = cli::load_scenario(entry.name);
                RngStream rng(i, "acceptance:" + entry.name);
                const auto faults = random_faults(config, rng);
                config.faults.insert(config.faults.end(), faults.begin(), faults.end());
                const RunResult result = run(config, 1000 + i);
                ++shared->runs;
                if (result.outside_assumptions) continue;
                if (safety_side) {
                    const Verdict verdict = check_safety(result.trace, result.final_state);
                    c.require(verdict.pass,
                              entry.name + " seed " + std::to_string(i) + ": " +
                                  (verdict.violations.empty() ? "safety violation"
                                                              : verdict.violations[0]));
                } else {
                    c.require(!result.max_ticks_exceeded,
                              entry.name + " seed " + std::to_string(i) + ": MaxTicksExceeded");
                    const Verdict verdict =
                        check_liveness(result.trace, result.final_state, config);
                    c.require(verdict.pass,
                              entry.name + " seed " + std::to_string(i) + ": " +
                                  (verdict.violations.empty() ? "liveness violation"
                                                              : verdict.violations[0]));
                }
            }
        }
    };
    run_criterion("C1 atomicity under randomized faults (200 runs x " +
                      std::to_string(cli::scenario_catalog().size()) + " scenarios)",
                  [&](Criterion& c) { corpus(c, true); });
    run_criterion("C2 liveness bound on the same corpus",
                  [&](Criterion& c) { corpus(c, false); });
}

void criterion_3() {
    run_criterion("C3 liveness-proof crash matrix", [](Criterion& c) {
        {
            const auto result = run(cli::load_scenario("crash_point_1"), 1);
            c.require(result.final_state.coordination.empty(),
                      "crash before start: expected NotStarted");
            c.require(count_kind(result.trace, "lock_staged") == 0,
                      "crash before start: expected no locks");
        }
        {
            const auto result = run(cli::load_scenario("crash_point_2"), 1);
            c.require(resolved_status(result.final_state, 1) == "Ignored",
                      "crash after start: expected Ignored");
            c.require(count_kind(result.trace, "unlock_discard") ==
                          count_kind(result.trace, "lock_staged"),
                      "crash after start: every staged lock must be discarded");
            c.require(!any_locked(result.final_state), "crash after start: locks remain");
        }
        {
            const auto result = run(cli::load_scenario("crash_point_3"), 1);
            c.require(resolved_status(result.final_state, 1) == "Committed",
                      "crash after commit: expected Committed");
            c.require(count_kind(result.trace, "unlock_commit") ==
                          count_kind(result.trace, "lock_staged"),
                      "crash after commit: every staged lock must commit");
            c.require(storage_at(result.final_state, 4, 44, 0) == 10,
                      "crash after commit: funcD write missing");
        }
        {
            const auto result = run(cli::load_scenario("crash_point_4"), 1);
            c.require(resolved_status(result.final_state, 1) == "Ignored",
                      "subordinate crash: expected Ignored");
            c.require(count_kind(result.trace, "ready_sent") == 0,
                      "subordinate crash: no Ready should be sent");
            c.require(!any_locked(result.final_state), "subordinate crash: locks remain");
        }
        // deterministic: the matrix reproduces byte-identically
        for (const char* name : {"crash_point_1", "crash_point_2", "crash_point_3",
                                 "crash_point_4"}) {
            const auto a = run(cli::load_scenario(name), 1);
            const auto b = run(cli::load_scenario(name), 1);
            c.require(a.trace.to_jsonl() == b.trace.to_jsonl(),
                      std::string(name) + ": nondeterministic trace");
        }
    });
}

void criterion_4() {
    run_criterion("C4 threshold-signature suite (all n <= 7)", [](Criterion& c) {
        const Bytes message{'r', 'e', 'a', 'd', 'y'};
        for (std::size_t n = 1; n <= 7; ++n) {
            for (std::size_t m = 1; m <= n; ++m) {
                const tsig::ThresholdConfig cfg{n, m};
                const auto out = tsig::dealer_keygen(cfg, 100 * n + m);
                const tsig::GroupScalar expected =
                    out.dealer_secret * tsig::hash_to_scalar(message);

                for (const auto& share : out.shares) {
                    c.require(tsig::verify_share(share, out.commitments),
                              "honest share rejected");
                    auto bad = share;
                    bad.secret_share = bad.secret_share + tsig::GroupScalar{1};
                    c.require(!tsig::verify_share(bad, out.commitments),
                              "tampered secret share accepted");
                    bad = share;
                    bad.blinding_share = bad.blinding_share + tsig::GroupScalar{1};
                    c.require(!tsig::verify_share(bad, out.commitments),
                              "tampered blinding share accepted");
                }

                std::vector<tsig::SignatureShare> all;
                for (const auto& share : out.shares)
                    all.push_back(tsig::sign_share(share, message));

                std::vector<bool> pick(n, false);
                std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
                do {
                    std::vector<tsig::SignatureShare> subset;
                    for (std::size_t i = 0; i < n; ++i)
                        if (pick[i]) subset.push_back(all[i]);
                    const auto sig = tsig::combine(subset, cfg);
                    c.require(sig.value == expected, "subset combined to a different value");
                    c.require(tsig::verify(out.public_key, message, sig),
                              "combined signature failed verification");
                } while (std::prev_permutation(pick.begin(), pick.end()));

                if (m >= 2) {
                    std::vector<bool> small(n, false);
                    std::fill(small.begin(), small.begin() + static_cast<std::ptrdiff_t>(m - 1),
                              true);
                    do {
                        std::vector<tsig::SignatureShare> subset;
                        for (std::size_t i = 0; i < n; ++i)
                            if (small[i]) subset.push_back(all[i]);
                        bool rejected = false;
                        try {
                            (void)tsig::combine(subset, cfg);
                        } catch (const tsig::InsufficientShares&) {
                            rejected = true;
                        }
                        c.require(rejected, "(m-1)-subset was not rejected");
                    } while (std::prev_permutation(small.begin(), small.end()));
                }
            }
        }
    });
}

void criterion_5() {
    run_criterion("C5 expected-parameter checking on the worked example", [](Criterion& c) {
        const ScenarioConfig config = cli::load_scenario("happy_nested");

        // the built nest reproduces funcC(1) and funcD(10)
        const auto envelope = build_for(config, /*seed=*/1, /*submission=*/0);
        const auto& root = envelope.body;
        c.require(root.subordinates.size() == 1, "expected one funcB subordinate");
        const auto& func_b = root.subordinates.at(0);
        c.require(func_b.subordinates.size() == 2, "expected view + transaction under funcB");
        c.require(func_b.subordinates.at(0).data.function_name == "funcC" &&
                      func_b.subordinates.at(0).data.args == std::vector<std::int64_t>{1},
                  "expected subordinate view funcC(1)");
        c.require(func_b.subordinates.at(1).data.function_name == "funcD" &&
                      func_b.subordinates.at(1).data.args == std::vector<std::int64_t>{10},
                  "expected subordinate transaction funcD(10)");

        const auto zero_committed_writes = [&](const FinalState& fs) {
            return storage_at(fs, 1, 11, 1) == 0 && storage_at(fs, 2, 22, 2) == 0 &&
                   storage_at(fs, 4, 44, 0) == 0;
        };

        // mutating the subordinate's argument (10 -> 11) aborts everywhere
        {
            ScenarioConfig mutated = config;
            auto env = build_for(config, 1, 0);
            env.body.subordinates[0].subordinates[1].data.args[0] = 11;
            env.eoa_signature = txcore::eoa_sign(env.body, account_secret(1, "alice"));
            mutated.submissions[0].prebuilt = env;
            const auto result = run(mutated, 1);
            c.require(resolved_status(result.final_state, 1) == "Ignored",
                      "mutated argument: expected Ignored");
            c.require(trace_has(result.trace, "trial_reverted", "ParamMismatch"),
                      "mutated argument: expected a ParamMismatch revert");
            c.require(zero_committed_writes(result.final_state),
                      "mutated argument: committed writes leaked");
            c.require(!any_locked(result.final_state), "mutated argument: locks remain");
        }

        // state1 = 1 with the subordinate still listed aborts everywhere
        {
            ScenarioConfig mutated = config;
            mutated.submissions[0].prebuilt = build_for(config, 1, 0);
            for (auto& contract : mutated.contracts)
                if (contract.address == 22) contract.storage[0] = 1;
            const auto result = run(mutated, 1);
            c.require(resolved_status(result.final_state, 1) == "Ignored",
                      "state1=1: expected Ignored");
            c.require(trace_has(result.trace, "trial_reverted", "UnconsumedSubordinate"),
                      "state1=1: expected an UnconsumedSubordinate revert");
            c.require(zero_committed_writes(result.final_state),
                      "state1=1: committed writes leaked");
            c.require(!any_locked(result.final_state), "state1=1: locks remain");
        }
    });
}

void criterion_6() {
    run_criterion("C6 locking scenarios", [](Criterion& c) {
        {
            const auto outcome =
                cli::run_with_checks(cli::load_scenario("travel_agent_two_agents"), 1);
            const auto& fs = outcome.result.final_state;
            c.require(resolved_status(fs, 1) == "Committed",
                      "two agents: first transaction should commit");
            c.require(resolved_status(fs, 2) == "Ignored",
                      "two agents: second transaction should be ignored");
            c.require(trace_has(outcome.result.trace, "lock_fault", "AlreadyLocked"),
                      "two agents: expected an AlreadyLocked fault");
            c.require(outcome.safety.pass && outcome.liveness.pass,
                      "two agents: checkers failed");
        }
        {
            ScenarioConfig config = cli::load_scenario("erc20_router_two_agents");
            std::uint64_t before = 0;
            for (const auto& contract : config.contracts)
                if (contract.body == "payment_slot")
                    before += contract.storage.count(1) ? contract.storage.at(1) : 0;
            const auto outcome = cli::run_with_checks(config, 1);
            const auto& fs = outcome.result.final_state;
            c.require(resolved_status(fs, 1) == "Committed" &&
                          resolved_status(fs, 2) == "Committed",
                      "router: both payments should commit");
            std::uint64_t after = 0;
            for (const auto& contract : config.contracts)
                if (contract.body == "payment_slot")
                    after += storage_at(fs, contract.chain, contract.address, 1);
            c.require(before == after, "router: token totals not conserved (" +
                                           std::to_string(before) + " -> " +
                                           std::to_string(after) + ")");
            c.require(outcome.safety.pass && outcome.liveness.pass, "router: checkers failed");
        }
    });
}

void criterion_7() {
    run_criterion("C7 repeated-contract limitation", [](Criterion& c) {
        const auto result = run(cli::load_scenario("repeated_contract_abort"), 1);
        c.require(resolved_status(result.final_state, 1) == "Ignored",
                  "expected the whole transaction Ignored");
        bool fault_on_revisited = false;
        for (const auto& rec : result.trace.records())
            if (rec.kind == "lock_fault" &&
                rec.details.at("contract").get<std::uint64_t>() == 110 &&
                rec.details.at("fault").get<std::string>().find("AlreadyLocked") !=
                    std::string::npos)
                fault_on_revisited = true;
        c.require(fault_on_revisited, "expected AlreadyLocked on the revisited contract");
        c.require(!any_locked(result.final_state), "locks remain after the abort");
    });
}

void criterion_8() {
    run_criterion("C8 coordination state machine small model", [](Criterion& c) {
        const auto keys = tsig::dealer_keygen({3, 3}, 5);
        const auto bad_keys = tsig::dealer_keygen({3, 3}, 77);
        auto sign = [](const tsig::DealerOutput& dealer, const Bytes& message) {
            std::vector<tsig::SignatureShare> shares;
            for (const auto& share : dealer.shares)
                shares.push_back(tsig::sign_share(share, message));
            return tsig::combine(shares, {3, 3});
        };

        enum class Op { Start, Commit, Ignore };
        struct Step {
            Op op;
            bool valid;
            bool late;
        };
        std::vector<Step> alphabet;
        for (Op op : {Op::Start, Op::Commit, Op::Ignore})
            for (bool valid : {true, false})
                for (bool late : {false, true}) alphabet.push_back({op, valid, late});

        constexpr std::uint64_t kTimeout = 5;
        const coord::CrosschainTxId tx{1};

        // brute-force reference machine
        struct Ref {
            coord::TxStatus stored = coord::TxStatus::NotStarted;
            bool past = false;
            void apply(const Step& s) {
                if (s.late) past = true;
                if (!s.valid) return;
                if (s.op == Op::Start && stored == coord::TxStatus::NotStarted && !past)
                    stored = coord::TxStatus::Started;
                else if (s.op == Op::Commit && stored == coord::TxStatus::Started && !past)
                    stored = coord::TxStatus::Committed;
                else if (s.op == Op::Ignore && stored == coord::TxStatus::Started && !past)
                    stored = coord::TxStatus::Ignored;
            }
            coord::TxStatus resolved() const {
                if (stored == coord::TxStatus::Started && past) return coord::TxStatus::Ignored;
                return stored;
            }
        };

        std::vector<std::size_t> seq;
        std::size_t cases = 0;
        std::function<void(std::size_t)> extend = [&](std::size_t remaining) {
            if (!seq.empty()) {
                coord::CoordinationContract contract(10);
                contract.register_key({txcore::ChainId{1}, 1, keys.public_key, {3, 3}});
                Ref ref;
                bool moved = false;
                bool ok = true;
                for (std::size_t idx : seq) {
                    const Step& step = alphabet[idx];
                    if (step.late && !moved) {
                        contract.clock().advance((kTimeout + 1) * 10);
                        moved = true;
                    }
                    const auto& signer = step.valid ? keys : bad_keys;
                    switch (step.op) {
                        case Op::Start:
                            contract.submit_start(
                                tx, txcore::ChainId{1}, kTimeout,
                                sign(signer, coord::start_message(tx, kTimeout,
                                                                  txcore::ChainId{1})));
                            break;
                        case Op::Commit:
                            contract.submit_commit(tx, sign(signer, coord::commit_message(tx)));
                            break;
                        case Op::Ignore:
                            contract.submit_ignore(tx, sign(signer, coord::ignore_message(tx)));
                            break;
                    }
                    ref.apply(step);
                    ok = ok && contract.status_now(tx) == ref.resolved();
                }
                c.require(ok, "sequence diverged from the reference machine");
                ++cases;
            }
            if (remaining == 0) return;
            for (std::size_t i = 0; i < alphabet.size(); ++i) {
                seq.push_back(i);
                extend(remaining - 1);
                seq.pop_back();
            }
        };
        extend(4);
        c.require(cases == 22620, "expected 22620 sequences, got " + std::to_string(cases));
    });
}

void criterion_9() {
    run_criterion("C9 encoding round trip and consistency rules", [](Criterion& c) {
        // two forced byte-level facts
        txcore::CrosschainTransaction tx;
        tx.nonce = 5;
        const Bytes bytes = txcore::encode(tx);
        bool nonce_ok = bytes[15] == 5;
        for (std::size_t i = 8; i < 15; ++i) nonce_ok = nonce_ok && bytes[i] == 0;
        c.require(nonce_ok, "nonce field bytes are not 00..05");
        c.require(bytes[bytes.size() - 4] == 0 && bytes[bytes.size() - 3] == 0 &&
                      bytes[bytes.size() - 2] == 0 && bytes[bytes.size() - 1] == 0,
                  "empty subordinate list is not 00 00 00 00");

        // 1000-case round trip
        RngStream rng(99, "acceptance.roundtrip");
        std::function<txcore::CrosschainTransaction(std::size_t)> random_tx =
            [&](std::size_t depth) {
                txcore::CrosschainTransaction t;
                t.tx_type = static_cast<txcore::TxType>(rng.below(5));
                t.nonce = rng.next();
                t.gas_price = rng.next();
                t.gas_limit = rng.next();
                t.to.value = rng.next();
                t.value = rng.next();
                t.data.function_name = "fn" + std::to_string(rng.below(100));
                for (std::size_t i = 0, argc = rng.below(4); i < argc; ++i)
                    t.data.args.push_back(static_cast<std::int64_t>(rng.next()));
                t.chain_id.value = rng.next();
                t.sender.value = rng.next();
                t.coordination_chain.value = rng.next();
                t.coordination_contract.value = rng.next();
                t.timeout_block = rng.next();
                t.crosschain_tx_id.value = rng.next();
                t.originating_chain.value = rng.next();
                t.from_chain.value = rng.next();
                t.from_address.value = rng.next();
                if (depth > 0)
                    for (std::size_t i = 0, n = rng.below(3); i < n; ++i)
                        t.subordinates.push_back(random_tx(depth - 1));
                return t;
            };
        bool all_roundtrip = true;
        for (int i = 0; i < 1000; ++i) {
            const auto t = random_tx(4);
            all_roundtrip = all_roundtrip && txcore::decode(txcore::encode(t)) == t;
        }
        c.require(all_roundtrip, "round trip failed");

        // one rejection per consistency rule
        auto nest = [] {
            txcore::CrosschainTransaction root;
            root.tx_type = txcore::TxType::Originating;
            root.to = txcore::Address{11};
            root.chain_id = txcore::ChainId{1};
            root.coordination_chain = txcore::ChainId{100};
            root.coordination_contract = txcore::Address{700};
            root.timeout_block = 50;
            root.crosschain_tx_id = txcore::CrosschainTxId{42};
            root.originating_chain = txcore::ChainId{1};
            txcore::CrosschainTransaction sub = root;
            sub.tx_type = txcore::TxType::Subordinate;
            sub.to = txcore::Address{22};
            sub.chain_id = txcore::ChainId{2};
            sub.from_chain = root.chain_id;
            sub.from_address = root.to;
            root.subordinates.push_back(sub);
            return root;
        };
        c.require(txcore::validate_nesting(nest()).empty(), "consistent nest rejected");
        auto expect_violation = [&](const std::string& what, auto&& mutate,
                                    txcore::ViolationKind kind) {
            auto root = nest();
            mutate(root.subordinates[0]);
            const auto violations = txcore::validate_nesting(root);
            bool found = false;
            for (const auto& v : violations) found = found || v.kind == kind;
            c.require(found, what + ": violation not reported");
        };
        using VK = txcore::ViolationKind;
        expect_violation("coordination_chain",
                         [](auto& s) { s.coordination_chain.value += 1; }, VK::FieldMismatch);
        expect_violation("coordination_contract",
                         [](auto& s) { s.coordination_contract.value += 1; }, VK::FieldMismatch);
        expect_violation("timeout_block", [](auto& s) { s.timeout_block += 1; },
                         VK::FieldMismatch);
        expect_violation("crosschain_tx_id", [](auto& s) { s.crosschain_tx_id.value += 1; },
                         VK::FieldMismatch);
        expect_violation("originating_chain", [](auto& s) { s.originating_chain.value += 1; },
                         VK::FieldMismatch);
        expect_violation("from_chain", [](auto& s) { s.from_chain.value += 1; },
                         VK::FromChainMismatch);
        expect_violation("from_address", [](auto& s) { s.from_address.value += 1; },
                         VK::FromAddressMismatch);

        // malformed buffers
        auto good = txcore::encode(nest());
        bool threw = false;
        try {
            auto truncated = good;
            truncated.resize(truncated.size() - 1);
            (void)txcore::decode(truncated);
        } catch (const txcore::MalformedEncoding&) {
            threw = true;
        }
        c.require(threw, "truncated buffer accepted");
        threw = false;
        try {
            auto trailing = good;
            trailing.push_back(0);
            (void)txcore::decode(trailing);
        } catch (const txcore::MalformedEncoding&) {
            threw = true;
        }
        c.require(threw, "trailing byte accepted");
    });
}

void criterion_10() {
    run_criterion("C10 determinism of trace files", [](Criterion& c) {
        const std::vector<std::vector<std::string>> fault_sets{
            {}, {"loss:0.2", "delay:1-4"}, {"crash:after_commit"}};
        for (const auto& entry : cli::scenario_catalog()) {
            for (std::size_t f = 0; f < fault_sets.size(); ++f) {
                ScenarioConfig config = cli::load_scenario(entry.name);
                for (const auto& flag : fault_sets[f])
                    config.faults.push_back(cli::parse_fault_flag(flag));
                const auto a = run(config, 42);
                const auto b = run(config, 42);
                c.require(a.trace.to_jsonl() == b.trace.to_jsonl(),
                          entry.name + " fault set " + std::to_string(f) +
                              ": trace differs between identical runs");
                c.require(a.final_state.to_json().dump() == b.final_state.to_json().dump(),
                          entry.name + " fault set " + std::to_string(f) +
                              ": final state differs between identical runs");
            }
        }
    });
}

}  // namespace

int main() {
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failed == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failed << " criteria failed\n";
    return 1;
}
