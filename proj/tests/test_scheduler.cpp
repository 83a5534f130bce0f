#include <doctest.h>

#include <numeric>
#include <random>

#include "qmicro/errors.hpp"
#include "qmicro/scheduler.hpp"
#include "support.hpp"

using namespace qmicro;
using testsupport::make_random_instance;

namespace {

ArchModel trivial_arch(int n_qubits) {
    ArchModel a;
    a.n_qubits = n_qubits;
    for (Qubit q = 0; q < n_qubits; ++q) a.blocks.push_back(ControlBlock{q, {q}});
    for (Qubit x = 0; x < n_qubits; ++x) {
        for (Qubit y = x + 1; y < n_qubits; ++y) a.neighbor_pairs.emplace_back(x, y);
    }
    a.n_cphase_switches = static_cast<int>(a.neighbor_pairs.size());
    return a;
}

Circuit serial_chain(int n_gates) {
    Circuit c;
    c.n_qubits = 1;
    for (int i = 0; i < n_gates; ++i) {
        c.gates.push_back(Gate{i, GateKind::XHalfPi, {0}, 1});
        if (i > 0) c.deps.emplace_back(i - 1, i);
    }
    return c;
}

Tick total_duration(const Circuit& c) {
    Tick sum = 0;
    for (const Gate& g : c.gates) sum += g.duration_ticks;
    return sum;
}

} // namespace

TEST_CASE("account_idles under both window policies") {
    Circuit c;
    c.n_qubits = 3;
    c.gates.push_back(Gate{0, GateKind::Prep, {0}, 1});
    c.gates.push_back(Gate{1, GateKind::Msr, {0}, 1});
    c.deps.emplace_back(0, 1);
    c.gates.push_back(Gate{2, GateKind::Prep, {1}, 1});

    // Qubit 0 busy at ticks 0 and 4; qubit 1 at tick 5; qubit 2 never.
    TickAssignment t{{0, 4, 5}};
    const IdleAccount ftl = account_idles(c, t, IdleWindowPolicy::FirstToLastOp);
    CHECK(ftl.makespan == 6);
    CHECK(ftl.per_qubit[0] == 3);
    CHECK(ftl.per_qubit[1] == 0);
    CHECK(ftl.per_qubit[2] == 0);
    CHECK(ftl.total == 3);

    const IdleAccount full = account_idles(c, t, IdleWindowPolicy::FullMakespan);
    CHECK(full.per_qubit[0] == 4);
    CHECK(full.per_qubit[1] == 5);
    CHECK(full.per_qubit[2] == 6);
    CHECK(full.total == 15);
}

TEST_CASE("greedy schedules the empty and single-gate circuits") {
    const ArchModel arch = trivial_arch(2);
    const ConstraintSet cs = ConstraintSet::all_on(arch);

    Circuit empty;
    empty.n_qubits = 2;
    const Schedule s0 = schedule_greedy(empty, cs, IdleWindowPolicy::FirstToLastOp);
    CHECK(s0.makespan == 0);
    CHECK(s0.idle_ticks_total == 0);

    Circuit one;
    one.n_qubits = 2;
    one.gates.push_back(Gate{0, GateKind::Prep, {1}, 1});
    const Schedule s1 = schedule_greedy(one, cs, IdleWindowPolicy::FirstToLastOp);
    CHECK(s1.makespan == 1);
    CHECK(s1.idle_ticks_total == 0);
    CHECK(s1.assignment.at(0) == 0);
    CHECK(!s1.optimal);
}

TEST_CASE("oracle: two independent gates run in parallel at tick zero") {
    const ArchModel arch = trivial_arch(2);
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    Circuit c;
    c.n_qubits = 2;
    c.gates.push_back(Gate{0, GateKind::Prep, {0}, 1});
    c.gates.push_back(Gate{1, GateKind::Prep, {1}, 1});
    const Schedule s = oracle_schedule(c, cs, IdleWindowPolicy::FirstToLastOp, 3);
    CHECK(s.assignment.at(0) == 0);
    CHECK(s.assignment.at(1) == 0);
    CHECK(s.idle_ticks_total == 0);
    CHECK(s.optimal);
}

TEST_CASE("oracle: a shared block serializes different gate kinds") {
    ArchModel arch;
    arch.n_qubits = 2;
    arch.blocks.push_back(ControlBlock{0, {0, 1}});
    const ConstraintSet cs = ConstraintSet::all_on(arch);
    Circuit c;
    c.n_qubits = 2;
    c.gates.push_back(Gate{0, GateKind::XHalfPi, {0}, 1});
    c.gates.push_back(Gate{1, GateKind::Msr, {1}, 1});

    const Schedule ftl = oracle_schedule(c, cs, IdleWindowPolicy::FirstToLastOp, 3);
    CHECK(ftl.assignment.at(0) != ftl.assignment.at(1)); // serialized
    // Each qubit has a single gate, so its first-to-last window is that
    // gate alone: no idle accrues even though the block serializes.
    CHECK(ftl.idle_ticks_total == 0);

    const Schedule full = oracle_schedule(c, cs, IdleWindowPolicy::FullMakespan, 3);
    CHECK(full.assignment.at(0) != full.assignment.at(1));
    // Two ticks of makespan, one occupied tick per qubit.
    CHECK(full.makespan == 2);
    CHECK(full.idle_ticks_total == 2);
}

TEST_CASE("oracle: a three-gate chain has no room for idles") {
    const ArchModel arch = trivial_arch(1);
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    const Circuit c = serial_chain(3);
    const Schedule s = oracle_schedule(c, cs, IdleWindowPolicy::FirstToLastOp, 5);
    CHECK(s.makespan == 3);
    CHECK(s.idle_ticks_total == 0);
}

TEST_CASE("oracle guards: instance size and horizon") {
    const ArchModel arch = trivial_arch(1);
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    CHECK_THROWS_AS(oracle_schedule(serial_chain(11), cs, IdleWindowPolicy::FirstToLastOp, 20),
                    std::invalid_argument);
    CHECK_THROWS_AS(oracle_schedule(serial_chain(3), cs, IdleWindowPolicy::FirstToLastOp, 2), UnschedulableError);
}

TEST_CASE("greedy rejects a CPhase without a wired coupling") {
    ArchModel arch = trivial_arch(3);
    arch.neighbor_pairs = {{0, 1}};
    arch.n_cphase_switches = 1;
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    Circuit c;
    c.n_qubits = 3;
    c.gates.push_back(Gate{0, GateKind::CPhase, {1, 2}, 1});
    CHECK_THROWS_AS(schedule_greedy(c, cs, IdleWindowPolicy::FirstToLastOp), UnschedulableError);
    CHECK_THROWS_AS(schedule_exact(c, cs, IdleWindowPolicy::FirstToLastOp), UnschedulableError);
}

TEST_CASE("exact matches the exhaustive oracle on random tiny instances") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = make_random_instance(rng);
        const ConstraintSet cs = inst.constraints();
        const IdleWindowPolicy policy =
            trial % 2 == 0 ? IdleWindowPolicy::FirstToLastOp : IdleWindowPolicy::FullMakespan;
        const Tick horizon = total_duration(inst.circuit);

        const Schedule exact = schedule_exact(inst.circuit, cs, policy);
        const Schedule oracle = oracle_schedule(inst.circuit, cs, policy, horizon);
        const Schedule greedy = schedule_greedy(inst.circuit, cs, policy);

        INFO("trial ", trial, ": gates=", inst.circuit.gates.size(), " exact=", exact.idle_ticks_total,
             " oracle=", oracle.idle_ticks_total, " greedy=", greedy.idle_ticks_total);
        CHECK(exact.optimal);
        CHECK(exact.idle_ticks_total == oracle.idle_ticks_total);
        CHECK(exact.idle_ticks_total <= greedy.idle_ticks_total);

        // Every emitted schedule is feasible under its constraint set.
        CHECK(is_feasible(inst.circuit, exact.assignment, cs).feasible);
        CHECK(is_feasible(inst.circuit, oracle.assignment, cs).feasible);
        CHECK(is_feasible(inst.circuit, greedy.assignment, cs).feasible);
    }
}

TEST_CASE("enabling constraints never lowers the optimal idle count") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = make_random_instance(rng);
        ConstraintSet on = inst.constraints();
        on.block_same_protocol = true;
        on.one_measurement_per_block = true;
        on.park_crosstalk = true;
        const ConstraintSet off = ConstraintSet::all_off(inst.arch);
        const IdleWindowPolicy policy =
            trial % 2 == 0 ? IdleWindowPolicy::FirstToLastOp : IdleWindowPolicy::FullMakespan;

        const Schedule m_on = schedule_exact(inst.circuit, on, policy);
        const Schedule m_off = schedule_exact(inst.circuit, off, policy);
        REQUIRE(m_on.optimal);
        REQUIRE(m_off.optimal);
        CHECK(m_on.idle_ticks_total >= m_off.idle_ticks_total);
    }
}

TEST_CASE("exact is deterministic across repeated runs") {
    std::mt19937_64 rng(303);
    const auto inst = make_random_instance(rng);
    const ConstraintSet cs = inst.constraints();
    const Schedule a = schedule_exact(inst.circuit, cs, IdleWindowPolicy::FirstToLastOp);
    const Schedule b = schedule_exact(inst.circuit, cs, IdleWindowPolicy::FirstToLastOp);
    CHECK(a.assignment.start == b.assignment.start);
    CHECK(a.idle_ticks_total == b.idle_ticks_total);
    CHECK(a.nodes_explored == b.nodes_explored);
}

TEST_CASE("budget exhaustion returns the incumbent without an optimality claim") {
    const Circuit c = generate_bs9_21_half_round();
    const ArchModel arch = default_bs9_21_arch();
    const ConstraintSet cs = ConstraintSet::all_on(arch);
    const Schedule greedy = schedule_greedy(c, cs, IdleWindowPolicy::FirstToLastOp);
    const Schedule tight = schedule_exact(c, cs, IdleWindowPolicy::FirstToLastOp, SearchLimits{1000});
    CHECK(!tight.optimal);
    CHECK(tight.idle_ticks_total <= greedy.idle_ticks_total);
    CHECK(is_feasible(c, tight.assignment, cs).feasible);
}

TEST_CASE("multi-tick gates occupy their qubits for the whole duration") {
    const ArchModel arch = trivial_arch(2);
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    Circuit c;
    c.n_qubits = 2;
    c.gates.push_back(Gate{0, GateKind::Msr, {0}, 3});
    c.gates.push_back(Gate{1, GateKind::CPhase, {0, 1}, 1});
    c.deps.emplace_back(0, 1);
    const Schedule s = schedule_greedy(c, cs, IdleWindowPolicy::FirstToLastOp);
    CHECK(s.assignment.at(1) >= 3);
    CHECK(s.makespan >= 4);

    const Schedule e = schedule_exact(c, cs, IdleWindowPolicy::FirstToLastOp);
    CHECK(e.optimal);
    CHECK(e.idle_ticks_total <= s.idle_ticks_total);
}

TEST_CASE("grid export shapes and schedule json round-trip") {
    const Circuit c = generate_bs9_21_half_round();
    const ArchModel arch = default_bs9_21_arch();
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    const Schedule s = schedule_greedy(c, cs, IdleWindowPolicy::FirstToLastOp);

    const auto grid = schedule_grid(c, s.assignment);
    REQUIRE(grid.size() == 21);
    CHECK(grid.front().size() == static_cast<std::size_t>(s.makespan));

    const std::string csv = schedule_grid_csv(c, s.assignment);
    CHECK(csv.find("qubit,t0,") == 0);

    const Schedule back = schedule_from_json(schedule_to_json(s, cs));
    CHECK(back.assignment.start == s.assignment.start);
    CHECK(back.makespan == s.makespan);
    CHECK(back.idle_ticks_total == s.idle_ticks_total);
    CHECK(back.idle_per_qubit == s.idle_per_qubit);
    CHECK(back.policy == s.policy);
    CHECK(back.optimal == s.optimal);

    Circuit one;
    one.n_qubits = 1;
    one.gates.push_back(Gate{0, GateKind::Prep, {0}, 1});
    const Schedule s1 = schedule_greedy(one, cs, IdleWindowPolicy::FirstToLastOp);
    const auto grid1 = schedule_grid(one, s1.assignment);
    REQUIRE(grid1.size() == 1);
    CHECK(grid1.front().size() == 1);
}

TEST_CASE("bs9 unconstrained: greedy feasible, exact at least as good") {
    const Circuit c = generate_bs9_21_half_round();
    const ArchModel arch = default_bs9_21_arch();
    const ConstraintSet cs = ConstraintSet::all_off(arch);
    const Schedule greedy = schedule_greedy(c, cs, IdleWindowPolicy::FirstToLastOp);
    CHECK(greedy.idle_ticks_total >= 0);
    const Schedule exact = schedule_exact(c, cs, IdleWindowPolicy::FirstToLastOp, SearchLimits{200'000});
    CHECK(exact.idle_ticks_total <= greedy.idle_ticks_total);
}
