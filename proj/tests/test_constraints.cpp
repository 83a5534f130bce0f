#include <doctest.h>

#include <random>

#include "qmicro/constraints.hpp"

using namespace qmicro;

namespace {

ArchModel make_arch(int n_qubits, std::vector<std::vector<Qubit>> blocks,
                    std::map<Qubit, std::vector<Qubit>> overlap = {}) {
    ArchModel a;
    a.n_qubits = n_qubits;
    int id = 0;
    for (auto& members : blocks) a.blocks.push_back(ControlBlock{id++, std::move(members)});
    a.signal_overlap = std::move(overlap);
    return a;
}

Circuit chain2(GateKind k0, GateKind k1, Qubit q0, Qubit q1, int n_qubits) {
    Circuit c;
    c.n_qubits = n_qubits;
    c.gates.push_back(Gate{0, k0, {q0}, 1});
    c.gates.push_back(Gate{1, k1, {q1}, 1});
    return c;
}

TickAssignment starts(std::vector<Tick> s) { return TickAssignment{std::move(s)}; }

} // namespace

TEST_CASE("precedence: dependency order and qubit occupancy") {
    Circuit c = chain2(GateKind::Prep, GateKind::Msr, 0, 0, 1);
    c.deps.emplace_back(0, 1);

    CHECK(check_precedence(c, starts({0, 1})).empty());

    const auto same_tick = check_precedence(c, starts({0, 0}));
    // Edge violation plus the occupancy overlap on qubit 0.
    CHECK(same_tick.size() == 2);
    CHECK(same_tick.front().constraint == ConstraintKind::Precedence);

    Circuit two = chain2(GateKind::Prep, GateKind::Prep, 0, 0, 1);
    two.deps.emplace_back(0, 1);
    const auto overlap = check_precedence(two, starts({3, 3}));
    CHECK(!overlap.empty());
}

TEST_CASE("block protocol: same kind shares a generator, different kinds clash") {
    const ArchModel arch = make_arch(2, {{0, 1}});
    ConstraintSet cs = ConstraintSet::all_on(arch);

    const Circuit same = chain2(GateKind::XHalfPi, GateKind::XHalfPi, 0, 1, 2);
    CHECK(check_block_protocol(same, starts({2, 2}), cs).empty());

    const Circuit mixed = chain2(GateKind::XHalfPi, GateKind::Msr, 0, 1, 2);
    const auto violations = check_block_protocol(mixed, starts({2, 2}), cs);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintKind::BlockProtocol);
    CHECK(violations[0].tick == 2);
    CHECK(violations[0].blocks == std::vector<int>{0});

    // One member idle is always fine.
    Circuit solo;
    solo.n_qubits = 2;
    solo.gates.push_back(Gate{0, GateKind::XHalfPi, {0}, 1});
    CHECK(check_block_protocol(solo, starts({2}), cs).empty());

    // Disabled flag reports nothing.
    ConstraintSet off = ConstraintSet::all_off(arch);
    CHECK(check_block_protocol(mixed, starts({2, 2}), off).empty());
}

TEST_CASE("a CPhase locks both operand blocks to the CPhase protocol") {
    const ArchModel arch = make_arch(3, {{0}, {1, 2}});
    ConstraintSet cs = ConstraintSet::all_on(arch);
    Circuit c;
    c.n_qubits = 3;
    c.gates.push_back(Gate{0, GateKind::CPhase, {0, 1}, 1});
    c.gates.push_back(Gate{1, GateKind::ZHalfPi, {2}, 1});

    const auto violations = check_block_protocol(c, starts({4, 4}), cs);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].blocks == std::vector<int>{1});

    Circuit both_cphase;
    both_cphase.n_qubits = 3;
    both_cphase.gates.push_back(Gate{0, GateKind::CPhase, {0, 1}, 1});
    both_cphase.gates.push_back(Gate{1, GateKind::CPhase, {2, 0}, 1});
    // Shares qubit 0 in time -> an occupancy problem, not a protocol one.
    CHECK(check_block_protocol(both_cphase, starts({4, 4}), cs).empty());
}

TEST_CASE("measurement exclusivity within a block") {
    const ArchModel arch = make_arch(4, {{0, 1}, {2}, {3}});
    ConstraintSet cs = ConstraintSet::all_on(arch);

    const Circuit msr_pair = chain2(GateKind::Msr, GateKind::Msr, 0, 1, 4);
    const auto violations = check_measurement_exclusivity(msr_pair, starts({5, 5}), cs);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintKind::MeasurementExclusivity);
    CHECK(violations[0].tick == 5);
    CHECK(violations[0].gates == std::vector<GateId>{0, 1});

    CHECK(check_measurement_exclusivity(msr_pair, starts({5, 6}), cs).empty());

    const Circuit different_blocks = chain2(GateKind::Msr, GateKind::Msr, 2, 3, 4);
    CHECK(check_measurement_exclusivity(different_blocks, starts({5, 5}), cs).empty());
}

TEST_CASE("park crosstalk: overlapped qubits must be parked or same-kind") {
    const ArchModel arch = make_arch(3, {{0}, {1}, {2}}, {{0, {2}}});
    ConstraintSet cs = ConstraintSet::all_on(arch);

    // q2 parked.
    Circuit parked;
    parked.n_qubits = 3;
    parked.gates.push_back(Gate{0, GateKind::XHalfPi, {0}, 1});
    CHECK(check_park_crosstalk(parked, starts({1}), cs).empty());

    // q2 runs a different kind under q0's route.
    const Circuit clash = chain2(GateKind::XHalfPi, GateKind::ZHalfPi, 0, 2, 3);
    const auto violations = check_park_crosstalk(clash, starts({1, 1}), cs);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintKind::ParkCrosstalk);
    CHECK(violations[0].gates == std::vector<GateId>{0, 1});

    // Same kind is allowed.
    const Circuit same = chain2(GateKind::XHalfPi, GateKind::XHalfPi, 0, 2, 3);
    CHECK(check_park_crosstalk(same, starts({1, 1}), cs).empty());

    // Empty overlap map: never any violation.
    const ArchModel no_overlap = make_arch(3, {{0}, {1}, {2}});
    ConstraintSet cs2 = ConstraintSet::all_on(no_overlap);
    CHECK(check_park_crosstalk(clash, starts({1, 1}), cs2).empty());
}

TEST_CASE("is_feasible aggregates with provenance and rejects incomplete input") {
    const ArchModel arch = make_arch(2, {{0, 1}});
    ConstraintSet cs = ConstraintSet::all_on(arch);
    Circuit c = chain2(GateKind::XHalfPi, GateKind::Msr, 0, 1, 2);
    c.deps.emplace_back(0, 1);

    const auto bad = is_feasible(c, starts({1, 0}), cs);
    CHECK(!bad.feasible);
    bool has_precedence = false;
    for (const Violation& v : bad.violations) has_precedence |= v.constraint == ConstraintKind::Precedence;
    CHECK(has_precedence);

    const auto good = is_feasible(c, starts({0, 1}), cs);
    CHECK(good.feasible);

    CHECK_THROWS_AS(is_feasible(c, starts({0, -1}), cs), std::invalid_argument);
    CHECK_THROWS_AS(is_feasible(c, starts({0}), cs), std::invalid_argument);
}

TEST_CASE("all optional flags off reduces to precedence") {
    const ArchModel arch = make_arch(2, {{0, 1}});
    ConstraintSet off = ConstraintSet::all_off(arch);
    // Block clash plus simultaneous measurements, but flags are off.
    const Circuit mixed = chain2(GateKind::XHalfPi, GateKind::Msr, 0, 1, 2);
    const auto r = is_feasible(mixed, starts({2, 2}), off);
    CHECK(r.feasible);
}

TEST_CASE("flag monotonicity: enabling a constraint never shrinks the violation set") {
    const ArchModel arch = make_arch(4, {{0, 1}, {2, 3}}, {{0, {2}}, {3, {1}}});
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> kind_pick(0, 5);
    std::uniform_int_distribution<Tick> tick_pick(0, 3);
    std::uniform_int_distribution<Qubit> qubit_pick(0, 3);

    for (int trial = 0; trial < 200; ++trial) {
        Circuit c;
        c.n_qubits = 4;
        const std::array<GateKind, 6> kinds = {GateKind::Prep,    GateKind::XHalfPi, GateKind::ZHalfPi,
                                               GateKind::ZPi,     GateKind::CPhase,  GateKind::Msr};
        std::vector<Tick> ticks;
        for (int i = 0; i < 5; ++i) {
            GateKind k = kinds[static_cast<std::size_t>(kind_pick(rng))];
            Qubit q0 = qubit_pick(rng);
            if (k == GateKind::CPhase) {
                Qubit q1 = qubit_pick(rng);
                if (q1 == q0) q1 = static_cast<Qubit>((q0 + 1) % 4);
                c.gates.push_back(Gate{i, k, {q0, q1}, 1});
            } else {
                c.gates.push_back(Gate{i, k, {q0}, 1});
            }
            ticks.push_back(tick_pick(rng));
        }
        const TickAssignment t = starts(ticks);

        ConstraintSet base = ConstraintSet::all_off(arch);
        const auto base_v = is_feasible(c, t, base).violations;

        for (int flag = 0; flag < 3; ++flag) {
            ConstraintSet more = base;
            if (flag == 0) more.block_same_protocol = true;
            if (flag == 1) more.one_measurement_per_block = true;
            if (flag == 2) more.park_crosstalk = true;
            const auto more_v = is_feasible(c, t, more).violations;
            CHECK(more_v.size() >= base_v.size());
        }
    }
}

TEST_CASE("idle neutrality: shifting every gate later adds no violations") {
    const ArchModel arch = make_arch(4, {{0, 1}, {2, 3}}, {{0, {2}}});
    ConstraintSet cs = ConstraintSet::all_on(arch);
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> kind_pick(0, 5);
    std::uniform_int_distribution<Tick> tick_pick(0, 4);
    std::uniform_int_distribution<Qubit> qubit_pick(0, 3);
    const std::array<GateKind, 6> kinds = {GateKind::Prep, GateKind::XHalfPi, GateKind::ZHalfPi,
                                           GateKind::ZPi,  GateKind::CPhase,  GateKind::Msr};

    for (int trial = 0; trial < 100; ++trial) {
        Circuit c;
        c.n_qubits = 4;
        std::vector<Tick> ticks;
        for (int i = 0; i < 4; ++i) {
            GateKind k = kinds[static_cast<std::size_t>(kind_pick(rng))];
            Qubit q0 = qubit_pick(rng);
            if (k == GateKind::CPhase) {
                Qubit q1 = static_cast<Qubit>((q0 + 1) % 4);
                c.gates.push_back(Gate{i, k, {q0, q1}, 1});
            } else {
                c.gates.push_back(Gate{i, k, {q0}, 1});
            }
            ticks.push_back(tick_pick(rng));
        }
        std::vector<Tick> shifted = ticks;
        for (Tick& t : shifted) t += 3;
        CHECK(is_feasible(c, starts(ticks), cs).violations.size() ==
              is_feasible(c, starts(shifted), cs).violations.size());
    }
}

TEST_CASE("violation lists are stably ordered by tick then gates") {
    const ArchModel arch = make_arch(2, {{0, 1}});
    ConstraintSet cs = ConstraintSet::all_on(arch);
    Circuit c;
    c.n_qubits = 2;
    c.gates.push_back(Gate{0, GateKind::XHalfPi, {0}, 1});
    c.gates.push_back(Gate{1, GateKind::Msr, {1}, 1});
    c.gates.push_back(Gate{2, GateKind::ZHalfPi, {0}, 1});
    c.gates.push_back(Gate{3, GateKind::Prep, {1}, 1});
    const auto v = is_feasible(c, starts({0, 0, 1, 1}), cs).violations;
    REQUIRE(v.size() >= 2);
    for (std::size_t i = 1; i < v.size(); ++i) {
        CHECK((v[i - 1].tick < v[i].tick || (v[i - 1].tick == v[i].tick && v[i - 1].gates <= v[i].gates)));
    }
}

TEST_CASE("violations serialize to json") {
    const ArchModel arch = make_arch(2, {{0, 1}});
    ConstraintSet cs = ConstraintSet::all_on(arch);
    const Circuit mixed = chain2(GateKind::XHalfPi, GateKind::Msr, 0, 1, 2);
    const auto r = is_feasible(mixed, starts({2, 2}), cs);
    const auto j = violations_to_json(r.violations);
    REQUIRE(!j.empty());
    CHECK(j[0].contains("constraint"));
    CHECK(j[0].contains("tick"));
    CHECK(j[0].contains("gates"));
    CHECK(j[0].contains("blocks"));
    CHECK(j[0].contains("message"));
}
