#include "qmicro/constraints.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace qmicro {

ConstraintSet ConstraintSet::all_on(const ArchModel& arch) {
    return ConstraintSet{true, true, true, &arch};
}

ConstraintSet ConstraintSet::all_off(const ArchModel& arch) {
    return ConstraintSet{false, false, false, &arch};
}

bool TickAssignment::complete(const Circuit& c) const {
    if (start.size() != c.gates.size()) return false;
    return std::all_of(start.begin(), start.end(), [](Tick t) { return t >= 0; });
}

std::string_view to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::Precedence: return "precedence";
        case ConstraintKind::BlockProtocol: return "block_protocol";
        case ConstraintKind::MeasurementExclusivity: return "measurement_exclusivity";
        case ConstraintKind::ParkCrosstalk: return "park_crosstalk";
    }
    return "unknown";
}

namespace {

void sort_violations(std::vector<Violation>& v) {
    std::sort(v.begin(), v.end(), [](const Violation& a, const Violation& b) {
        if (a.tick != b.tick) return a.tick < b.tick;
        if (a.gates != b.gates) return a.gates < b.gates;
        return a.message < b.message;
    });
}

std::vector<int> qubit_to_block(const ArchModel& arch) {
    std::vector<int> block(static_cast<std::size_t>(arch.n_qubits), -1);
    for (const ControlBlock& b : arch.blocks) {
        for (Qubit q : b.qubit_members) {
            if (q >= 0 && q < arch.n_qubits) block[static_cast<std::size_t>(q)] = b.id;
        }
    }
    return block;
}

const ArchModel& require_arch(const ConstraintSet& cs, const char* check) {
    if (!cs.arch) throw std::invalid_argument(std::string(check) + ": constraint set has no arch model");
    return *cs.arch;
}

// (tick, block) -> gate ids active there. A gate is added once per block even
// when both CPhase operands land in the same block.
std::map<std::pair<Tick, int>, std::vector<GateId>> block_occupancy(const Circuit& c, const TickAssignment& t,
                                                                    const ArchModel& arch) {
    const std::vector<int> block = qubit_to_block(arch);
    std::map<std::pair<Tick, int>, std::vector<GateId>> occ;
    for (const Gate& g : c.gates) {
        std::set<int> gate_blocks;
        for (Qubit q : g.qubits) {
            if (q >= 0 && q < arch.n_qubits && block[static_cast<std::size_t>(q)] >= 0) {
                gate_blocks.insert(block[static_cast<std::size_t>(q)]);
            }
        }
        const Tick s = t.at(g.id);
        for (int b : gate_blocks) {
            for (Tick tau = s; tau < s + g.duration_ticks; ++tau) {
                occ[{tau, b}].push_back(g.id);
            }
        }
    }
    return occ;
}

} // namespace

std::vector<Violation> check_precedence(const Circuit& c, const TickAssignment& t) {
    std::vector<Violation> out;
    for (const auto& [from, to] : c.deps) {
        const Tick end_from = t.at(from) + c.gate(from).duration_ticks;
        if (t.at(to) < end_from) {
            out.push_back({ConstraintKind::Precedence, t.at(to), {from, to}, {},
                           "gate " + std::to_string(to) + " starts before dependency " + std::to_string(from) +
                               " finishes"});
        }
    }
    // Occupancy: gates sharing a qubit may not overlap in time.
    std::map<Qubit, std::vector<GateId>> on_qubit;
    for (const Gate& g : c.gates) {
        for (Qubit q : g.qubits) on_qubit[q].push_back(g.id);
    }
    for (const auto& [q, ids] : on_qubit) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                const GateId a = ids[i], b = ids[j];
                const Tick sa = t.at(a), ea = sa + c.gate(a).duration_ticks;
                const Tick sb = t.at(b), eb = sb + c.gate(b).duration_ticks;
                if (sa < eb && sb < ea) {
                    out.push_back({ConstraintKind::Precedence, std::max(sa, sb),
                                   {std::min(a, b), std::max(a, b)},
                                   {},
                                   "gates " + std::to_string(a) + " and " + std::to_string(b) +
                                       " overlap on qubit " + std::to_string(q)});
                }
            }
        }
    }
    sort_violations(out);
    return out;
}

std::vector<Violation> check_block_protocol(const Circuit& c, const TickAssignment& t, const ConstraintSet& cs) {
    std::vector<Violation> out;
    if (!cs.block_same_protocol) return out;
    const ArchModel& arch = require_arch(cs, "check_block_protocol");
    for (auto& [key, ids] : block_occupancy(c, t, arch)) {
        std::set<GateKind> kinds;
        for (GateId id : ids) kinds.insert(c.gate(id).kind);
        if (kinds.size() > 1) {
            std::string msg = "block " + std::to_string(key.second) + " mixes protocols at tick " +
                              std::to_string(key.first) + ":";
            for (GateKind k : kinds) msg += " " + std::string(to_string(k));
            std::sort(ids.begin(), ids.end());
            out.push_back({ConstraintKind::BlockProtocol, key.first, ids, {key.second}, std::move(msg)});
        }
    }
    sort_violations(out);
    return out;
}

std::vector<Violation> check_measurement_exclusivity(const Circuit& c, const TickAssignment& t,
                                                     const ConstraintSet& cs) {
    std::vector<Violation> out;
    if (!cs.one_measurement_per_block) return out;
    const ArchModel& arch = require_arch(cs, "check_measurement_exclusivity");
    for (auto& [key, ids] : block_occupancy(c, t, arch)) {
        std::vector<GateId> msr;
        for (GateId id : ids) {
            if (c.gate(id).kind == GateKind::Msr) msr.push_back(id);
        }
        if (msr.size() > 1) {
            std::sort(msr.begin(), msr.end());
            out.push_back({ConstraintKind::MeasurementExclusivity, key.first, msr, {key.second},
                           std::to_string(msr.size()) + " simultaneous measurements in block " +
                               std::to_string(key.second) + " at tick " + std::to_string(key.first)});
        }
    }
    sort_violations(out);
    return out;
}

std::vector<Violation> check_park_crosstalk(const Circuit& c, const TickAssignment& t, const ConstraintSet& cs) {
    std::vector<Violation> out;
    if (!cs.park_crosstalk) return out;
    const ArchModel& arch = require_arch(cs, "check_park_crosstalk");
    if (arch.signal_overlap.empty()) return out;

    // Gate active on each (qubit, tick); precedence owns occupancy conflicts,
    // so one occupant is enough here.
    std::map<std::pair<Qubit, Tick>, GateId> occupant;
    for (const Gate& g : c.gates) {
        const Tick s = t.at(g.id);
        for (Qubit q : g.qubits) {
            for (Tick tau = s; tau < s + g.duration_ticks; ++tau) {
                occupant.emplace(std::pair{q, tau}, g.id);
            }
        }
    }
    for (const Gate& g : c.gates) {
        const Tick s = t.at(g.id);
        for (Qubit x : g.qubits) {
            const auto it = arch.signal_overlap.find(x);
            if (it == arch.signal_overlap.end()) continue;
            for (Qubit y : it->second) {
                for (Tick tau = s; tau < s + g.duration_ticks; ++tau) {
                    const auto occ = occupant.find({y, tau});
                    if (occ == occupant.end()) continue; // parked
                    const Gate& h = c.gate(occ->second);
                    if (h.id != g.id && h.kind != g.kind) {
                        out.push_back({ConstraintKind::ParkCrosstalk, tau,
                                       {g.id, h.id},
                                       {},
                                       "signal for gate " + std::to_string(g.id) + " routes over qubit " +
                                           std::to_string(y) + " running " + std::string(to_string(h.kind)) +
                                           " at tick " + std::to_string(tau)});
                    }
                }
            }
        }
    }
    sort_violations(out);
    return out;
}

FeasibilityResult is_feasible(const Circuit& c, const TickAssignment& t, const ConstraintSet& cs) {
    if (!t.complete(c)) {
        throw std::invalid_argument("is_feasible: assignment does not cover every gate exactly once");
    }
    FeasibilityResult r;
    const auto append = [&](std::vector<Violation> v) {
        r.violations.insert(r.violations.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    };
    append(check_precedence(c, t));
    append(check_block_protocol(c, t, cs));
    append(check_measurement_exclusivity(c, t, cs));
    append(check_park_crosstalk(c, t, cs));
    r.feasible = r.violations.empty();
    return r;
}

nlohmann::json violations_to_json(const std::vector<Violation>& violations) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Violation& v : violations) {
        arr.push_back({{"constraint", std::string(to_string(v.constraint))},
                       {"tick", v.tick},
                       {"gates", v.gates},
                       {"blocks", v.blocks},
                       {"message", v.message}});
    }
    return arr;
}

} // namespace qmicro
