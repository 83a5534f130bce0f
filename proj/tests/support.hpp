#pragma once

#include <map>
#include <random>
#include <vector>

#include "qmicro/arch.hpp"
#include "qmicro/circuit.hpp"
#include "qmicro/constraints.hpp"

namespace qmicro::testsupport {

struct RandomInstance {
    Circuit circuit;
    ArchModel arch;
    bool block_same_protocol = false;
    bool one_measurement_per_block = false;
    bool park_crosstalk = false;

    ConstraintSet constraints() const {
        ConstraintSet cs;
        cs.block_same_protocol = block_same_protocol;
        cs.one_measurement_per_block = one_measurement_per_block;
        cs.park_crosstalk = park_crosstalk;
        cs.arch = &arch;
        return cs;
    }
};

/// Tiny instances for oracle cross-checks: up to max_gates unit gates on up
/// to 4 qubits, a random block partition, full CPhase wiring, occasional
/// signal overlaps and random constraint flags.
inline RandomInstance make_random_instance(std::mt19937_64& rng, int max_gates = 8) {
    RandomInstance inst;
    std::uniform_int_distribution<int> qubits_pick(2, 4);
    const int n_qubits = qubits_pick(rng);
    std::uniform_int_distribution<int> gates_pick(1, max_gates);
    const int n_gates = gates_pick(rng);

    inst.circuit.n_qubits = n_qubits;
    std::vector<GateId> last_on_qubit(static_cast<std::size_t>(n_qubits), -1);
    const std::array<GateKind, 6> kinds = {GateKind::Prep,    GateKind::XHalfPi, GateKind::ZHalfPi,
                                           GateKind::ZPi,     GateKind::CPhase,  GateKind::Msr};
    std::uniform_int_distribution<std::size_t> kind_pick(0, kinds.size() - 1);
    std::uniform_int_distribution<Qubit> qubit_pick(0, n_qubits - 1);
    for (int i = 0; i < n_gates; ++i) {
        const GateKind kind = kinds[kind_pick(rng)];
        std::vector<Qubit> operands;
        if (is_two_qubit(kind)) {
            const Qubit a = qubit_pick(rng);
            Qubit b = qubit_pick(rng);
            if (b == a) b = static_cast<Qubit>((a + 1) % n_qubits);
            operands = {a, b};
        } else {
            operands = {qubit_pick(rng)};
        }
        for (Qubit q : operands) {
            const GateId prev = last_on_qubit[static_cast<std::size_t>(q)];
            if (prev >= 0) inst.circuit.deps.emplace_back(prev, i);
            last_on_qubit[static_cast<std::size_t>(q)] = i;
        }
        inst.circuit.gates.push_back(Gate{i, kind, std::move(operands), 1});
    }
    std::sort(inst.circuit.deps.begin(), inst.circuit.deps.end());
    inst.circuit.deps.erase(std::unique(inst.circuit.deps.begin(), inst.circuit.deps.end()),
                            inst.circuit.deps.end());

    // Random block partition.
    inst.arch.n_qubits = n_qubits;
    std::uniform_int_distribution<int> block_count_pick(1, n_qubits);
    const int n_blocks = block_count_pick(rng);
    std::vector<std::vector<Qubit>> members(static_cast<std::size_t>(n_blocks));
    std::uniform_int_distribution<int> block_pick(0, n_blocks - 1);
    for (Qubit q = 0; q < n_qubits; ++q) members[static_cast<std::size_t>(block_pick(rng))].push_back(q);
    int id = 0;
    for (auto& m : members) {
        if (!m.empty()) inst.arch.blocks.push_back(ControlBlock{id++, std::move(m)});
    }
    // All pairs wired so CPhase gates are always placeable.
    for (Qubit a = 0; a < n_qubits; ++a) {
        for (Qubit b = a + 1; b < n_qubits; ++b) inst.arch.neighbor_pairs.emplace_back(a, b);
    }
    inst.arch.n_cphase_switches = static_cast<int>(inst.arch.neighbor_pairs.size());

    std::bernoulli_distribution coin(0.5);
    if (coin(rng)) {
        const Qubit x = qubit_pick(rng);
        Qubit y = qubit_pick(rng);
        if (y == x) y = static_cast<Qubit>((x + 1) % n_qubits);
        inst.arch.signal_overlap[x] = {y};
    }
    inst.block_same_protocol = coin(rng);
    inst.one_measurement_per_block = coin(rng);
    inst.park_crosstalk = coin(rng);
    return inst;
}

} // namespace qmicro::testsupport
