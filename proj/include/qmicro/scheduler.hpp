#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmicro/circuit.hpp"
#include "qmicro/constraints.hpp"

namespace qmicro {

/// Window over which a qubit accrues idle ticks. FirstToLastOp spans a
/// qubit's first gate to its last (nothing is charged before preparation or
/// after the final operation); FullMakespan charges every qubit for the whole
/// schedule.
enum class IdleWindowPolicy {
    FirstToLastOp,
    FullMakespan,
};

std::string_view to_string(IdleWindowPolicy p);
std::optional<IdleWindowPolicy> idle_policy_from_string(std::string_view s);

struct IdleAccount {
    std::int64_t total = 0;
    std::vector<std::int64_t> per_qubit;
    Tick makespan = 0;
};

/// Idle bookkeeping for a complete, occupancy-consistent assignment.
IdleAccount account_idles(const Circuit& c, const TickAssignment& t, IdleWindowPolicy policy);

struct Schedule {
    TickAssignment assignment;
    Tick makespan = 0;
    std::int64_t idle_ticks_total = 0;
    std::vector<std::int64_t> idle_per_qubit;
    IdleWindowPolicy policy = IdleWindowPolicy::FirstToLastOp;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;
};

struct SearchLimits {
    std::uint64_t max_nodes = 10'000'000;
};

/// Tick-by-tick list scheduling: at each tick a maximal compatible set of
/// ready gates is started, preferring the longest remaining critical path and
/// breaking ties by gate id. Always feasible; never marked optimal.
Schedule schedule_greedy(const Circuit& c, const ConstraintSet& cs, IdleWindowPolicy policy);

/// Depth-first branch-and-bound over (tick, started-gate subset) decisions,
/// minimizing total idle ticks under the policy. Seeded by the greedy
/// schedule; prunes with an admissible committed-idle + slack lower bound.
/// Returns the incumbent when the node budget runs out (optimal=false).
Schedule schedule_exact(const Circuit& c, const ConstraintSet& cs, IdleWindowPolicy policy,
                        const SearchLimits& limits = {});

/// Exhaustive enumeration of all feasible assignments with start ticks below
/// horizon; verification-grade and deliberately independent of the
/// branch-and-bound machinery. Guarded to tiny instances (<= 10 gates).
/// Ties are broken toward the lexicographically smallest assignment vector.
Schedule oracle_schedule(const Circuit& c, const ConstraintSet& cs, IdleWindowPolicy policy, Tick horizon);

/// Qubit-by-tick rendering; rows are qubits, columns ticks, cells the short
/// gate label or "." for an idle slot.
std::vector<std::vector<std::string>> schedule_grid(const Circuit& c, const TickAssignment& t);
std::string schedule_grid_csv(const Circuit& c, const TickAssignment& t);

nlohmann::json schedule_to_json(const Schedule& s, const ConstraintSet& cs);
Schedule schedule_from_json(const nlohmann::json& j);

} // namespace qmicro
