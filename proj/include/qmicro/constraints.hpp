#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qmicro/arch.hpp"
#include "qmicro/circuit.hpp"

namespace qmicro {

/// Electronics feasibility predicates applied to a tick-indexed schedule.
/// Precedence (and qubit occupancy) is always checked; the other predicates
/// are switchable. arch must outlive the set and is required whenever a
/// block- or overlap-scoped flag is enabled.
struct ConstraintSet {
    bool block_same_protocol = false;
    bool one_measurement_per_block = false;
    bool park_crosstalk = false;
    const ArchModel* arch = nullptr;

    static ConstraintSet all_on(const ArchModel& arch);
    static ConstraintSet all_off(const ArchModel& arch);

    bool any_optional_enabled() const {
        return block_same_protocol || one_measurement_per_block || park_crosstalk;
    }
};

/// Start tick per gate id; -1 marks an unassigned gate.
struct TickAssignment {
    std::vector<Tick> start;

    static TickAssignment unassigned(const Circuit& c) {
        return TickAssignment{std::vector<Tick>(c.gates.size(), Tick{-1})};
    }
    bool complete(const Circuit& c) const;
    Tick at(GateId g) const { return start[static_cast<std::size_t>(g)]; }
};

enum class ConstraintKind {
    Precedence,
    BlockProtocol,
    MeasurementExclusivity,
    ParkCrosstalk,
};

std::string_view to_string(ConstraintKind k);

struct Violation {
    ConstraintKind constraint;
    Tick tick = 0;
    std::vector<GateId> gates;
    std::vector<int> blocks;
    std::string message;
};

/// Dependency ordering plus per-qubit occupancy exclusivity.
std::vector<Violation> check_precedence(const Circuit& c, const TickAssignment& t);

/// Within one block and one tick all active gates must share a GateKind; a
/// CPhase locks both operand blocks to CPhase for its duration.
std::vector<Violation> check_block_protocol(const Circuit& c, const TickAssignment& t, const ConstraintSet& cs);

/// At most one measurement active per block per tick.
std::vector<Violation> check_measurement_exclusivity(const Circuit& c, const TickAssignment& t,
                                                     const ConstraintSet& cs);

/// Qubits under a foreign active signal route must be parked (idle) or
/// running the same gate kind.
std::vector<Violation> check_park_crosstalk(const Circuit& c, const TickAssignment& t, const ConstraintSet& cs);

struct FeasibilityResult {
    bool feasible = false;
    std::vector<Violation> violations;
};

/// Runs every enabled check. Throws std::invalid_argument when the
/// assignment is incomplete (that is an input error, not a violation).
FeasibilityResult is_feasible(const Circuit& c, const TickAssignment& t, const ConstraintSet& cs);

nlohmann::json violations_to_json(const std::vector<Violation>& violations);

} // namespace qmicro
