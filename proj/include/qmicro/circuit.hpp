#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qmicro {

using GateId = int;
using Qubit = int;
using Tick = std::int64_t;

enum class GateKind : int {
    Prep = 0,
    XHalfPi,
    ZHalfPi,
    ZPi,
    CPhase,
    Msr,
    Idle,
};

inline constexpr int kGateKindCount = 7;

constexpr bool is_two_qubit(GateKind k) { return k == GateKind::CPhase; }

std::string_view to_string(GateKind k);
std::string_view short_label(GateKind k);
std::optional<GateKind> gate_kind_from_string(std::string_view s);

/// One typed operation on 1 or 2 qubits, occupying duration_ticks slots.
struct Gate {
    GateId id = 0;
    GateKind kind = GateKind::Prep;
    std::vector<Qubit> qubits;
    Tick duration_ticks = 1;
};

/// A schedulable program: a gate list plus an acyclic precedence relation.
/// Gates touching a common qubit are totally ordered by deps (program order
/// is a chain per qubit).
struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<std::pair<GateId, GateId>> deps; // (from, to), sorted, unique

    const Gate& gate(GateId id) const { return gates[static_cast<std::size_t>(id)]; }
};

/// Per-kind gate counts. Idle is carried for array symmetry but is always 0
/// for circuits.
struct GateCensus {
    std::array<std::int64_t, kGateKindCount> counts{};

    std::int64_t& operator[](GateKind k) { return counts[static_cast<std::size_t>(k)]; }
    std::int64_t operator[](GateKind k) const { return counts[static_cast<std::size_t>(k)]; }
    std::int64_t total() const;
    bool operator==(const GateCensus&) const = default;
};

struct ValidationIssue {
    enum class Code {
        DuplicateGateId,
        NonDenseGateId,
        QubitOutOfRange,
        DuplicateOperand,
        BadOperandCount,
        BadDuration,
        IdleGateInCircuit,
        UnknownDepEndpoint,
        DependencyCycle,
        BrokenQubitChain,
    };
    Code code;
    std::string message;
};

/// Builds the 21-qubit Bacon-Shor half-round: 6 ZZ gauge checks, a forward
/// basis change on the 9 data qubits, 6 XX gauge checks, a backward basis
/// change. Data qubits are indices 0..8 (3x3 row-major), ZZ ancillas 9..14,
/// XX ancillas 15..20. Deterministic; deps are the per-qubit program chains.
Circuit generate_bs9_21_half_round();

/// Reports every violated circuit invariant; empty result iff valid.
std::vector<ValidationIssue> validate_circuit(const Circuit& c);

GateCensus census(const Circuit& c);

/// Number of distinct pulse protocols a census requires. CPhase contributes
/// cphase_protocols protocols when present; every other kind contributes one.
int protocol_set_size(const GateCensus& cns, int cphase_protocols);

nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

} // namespace qmicro
