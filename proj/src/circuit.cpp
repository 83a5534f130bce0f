#include "qmicro/circuit.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qmicro {

namespace {

constexpr std::array<std::string_view, kGateKindCount> kKindNames = {
    "Prep", "XHalfPi", "ZHalfPi", "ZPi", "CPhase", "Msr", "Idle",
};

constexpr std::array<std::string_view, kGateKindCount> kKindShort = {
    "P", "X2", "Z2", "ZP", "CP", "M", ".",
};

} // namespace

std::string_view to_string(GateKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::string_view short_label(GateKind k) { return kKindShort[static_cast<std::size_t>(k)]; }

std::optional<GateKind> gate_kind_from_string(std::string_view s) {
    for (int i = 0; i < kGateKindCount; ++i) {
        if (kKindNames[static_cast<std::size_t>(i)] == s) return static_cast<GateKind>(i);
    }
    return std::nullopt;
}

std::int64_t GateCensus::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

namespace {

/// Appends a gate and links it behind the previous gate on each operand qubit.
class CircuitBuilder {
public:
    explicit CircuitBuilder(int n_qubits) : circuit_{}, last_on_qubit_(static_cast<std::size_t>(n_qubits), -1) {
        circuit_.n_qubits = n_qubits;
    }

    GateId add(GateKind kind, std::vector<Qubit> qubits, Tick duration = 1) {
        const GateId id = static_cast<GateId>(circuit_.gates.size());
        for (Qubit q : qubits) {
            const GateId prev = last_on_qubit_[static_cast<std::size_t>(q)];
            if (prev >= 0) circuit_.deps.emplace_back(prev, id);
            last_on_qubit_[static_cast<std::size_t>(q)] = id;
        }
        circuit_.gates.push_back(Gate{id, kind, std::move(qubits), duration});
        return id;
    }

    void add_dep(GateId from, GateId to) { circuit_.deps.emplace_back(from, to); }

    Circuit finish() {
        std::sort(circuit_.deps.begin(), circuit_.deps.end());
        circuit_.deps.erase(std::unique(circuit_.deps.begin(), circuit_.deps.end()), circuit_.deps.end());
        return std::move(circuit_);
    }

private:
    Circuit circuit_;
    std::vector<GateId> last_on_qubit_;
};

} // namespace

Circuit generate_bs9_21_half_round() {
    constexpr int kDataCount = 9;
    constexpr int kQubitCount = 21;
    const auto data = [](int i) { return static_cast<Qubit>(i); };
    const auto zz_ancilla = [](int i) { return static_cast<Qubit>(kDataCount + i); };
    const auto xx_ancilla = [](int i) { return static_cast<Qubit>(kDataCount + 6 + i); };

    // Vertically adjacent data pairs measured by the ZZ checks, then the
    // horizontally adjacent pairs of the XX checks (3x3 row-major grid).
    const std::array<std::pair<int, int>, 6> zz_pairs = {{{0, 3}, {3, 6}, {1, 4}, {4, 7}, {2, 5}, {5, 8}}};
    const std::array<std::pair<int, int>, 6> xx_pairs = {{{0, 1}, {1, 2}, {3, 4}, {4, 5}, {6, 7}, {7, 8}}};

    CircuitBuilder b(kQubitCount);

    const auto gauge_check = [&](Qubit ancilla, Qubit first, Qubit second) {
        const GateId prep = b.add(GateKind::Prep, {ancilla});
        b.add(GateKind::XHalfPi, {ancilla});
        b.add(GateKind::CPhase, {ancilla, first});
        b.add(GateKind::CPhase, {ancilla, second});
        b.add(GateKind::XHalfPi, {ancilla});
        b.add(GateKind::Msr, {ancilla});
        return prep;
    };

    for (int i = 0; i < 6; ++i) {
        gauge_check(zz_ancilla(i), data(zz_pairs[static_cast<std::size_t>(i)].first),
                    data(zz_pairs[static_cast<std::size_t>(i)].second));
    }
    std::array<GateId, kDataCount> forward_change_done{};
    for (int d = 0; d < kDataCount; ++d) {
        b.add(GateKind::XHalfPi, {data(d)});
        forward_change_done[static_cast<std::size_t>(d)] = b.add(GateKind::ZHalfPi, {data(d)});
    }
    for (int i = 0; i < 6; ++i) {
        const auto& [first, second] = xx_pairs[static_cast<std::size_t>(i)];
        const GateId prep = gauge_check(xx_ancilla(i), data(first), data(second));
        // The whole XX check runs after the forward basis change of both of
        // its data qubits, not just the CPhases the data chains already order.
        b.add_dep(forward_change_done[static_cast<std::size_t>(first)], prep);
        b.add_dep(forward_change_done[static_cast<std::size_t>(second)], prep);
    }
    for (int d = 0; d < kDataCount; ++d) {
        b.add(GateKind::ZHalfPi, {data(d)});
        b.add(GateKind::XHalfPi, {data(d)});
    }
    return b.finish();
}

namespace {

/// Kahn topological sort; returns std::nullopt when the relation has a cycle.
std::optional<std::vector<GateId>> topological_order(const Circuit& c) {
    const std::size_t n = c.gates.size();
    std::vector<std::vector<GateId>> out(n);
    std::vector<int> indeg(n, 0);
    for (const auto& [from, to] : c.deps) {
        out[static_cast<std::size_t>(from)].push_back(to);
        ++indeg[static_cast<std::size_t>(to)];
    }
    std::vector<GateId> order;
    order.reserve(n);
    std::vector<GateId> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (indeg[i] == 0) queue.push_back(static_cast<GateId>(i));
    }
    // Pop smallest id first so the order is deterministic.
    while (!queue.empty()) {
        std::sort(queue.begin(), queue.end(), std::greater<>());
        const GateId g = queue.back();
        queue.pop_back();
        order.push_back(g);
        for (GateId succ : out[static_cast<std::size_t>(g)]) {
            if (--indeg[static_cast<std::size_t>(succ)] == 0) queue.push_back(succ);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

bool reachable(const std::vector<std::vector<GateId>>& out, GateId from, GateId to) {
    std::vector<GateId> stack{from};
    std::set<GateId> seen{from};
    while (!stack.empty()) {
        const GateId g = stack.back();
        stack.pop_back();
        if (g == to) return true;
        for (GateId s : out[static_cast<std::size_t>(g)]) {
            if (seen.insert(s).second) stack.push_back(s);
        }
    }
    return false;
}

} // namespace

std::vector<ValidationIssue> validate_circuit(const Circuit& c) {
    using Code = ValidationIssue::Code;
    std::vector<ValidationIssue> issues;
    const auto add = [&](Code code, std::string msg) { issues.push_back({code, std::move(msg)}); };

    const std::size_t n = c.gates.size();
    std::set<GateId> seen_ids;
    for (std::size_t i = 0; i < n; ++i) {
        const Gate& g = c.gates[i];
        if (!seen_ids.insert(g.id).second) {
            add(Code::DuplicateGateId, "duplicate gate id " + std::to_string(g.id));
        }
        if (g.id != static_cast<GateId>(i)) {
            add(Code::NonDenseGateId, "gate at position " + std::to_string(i) + " has id " + std::to_string(g.id));
        }
        if (g.kind == GateKind::Idle) {
            add(Code::IdleGateInCircuit, "gate " + std::to_string(g.id) + " has kind Idle");
        }
        const std::size_t want_operands = is_two_qubit(g.kind) ? 2 : 1;
        if (g.qubits.size() != want_operands) {
            add(Code::BadOperandCount, "gate " + std::to_string(g.id) + " (" + std::string(to_string(g.kind)) +
                                           ") has " + std::to_string(g.qubits.size()) + " operands");
        }
        std::set<Qubit> distinct(g.qubits.begin(), g.qubits.end());
        if (distinct.size() != g.qubits.size()) {
            add(Code::DuplicateOperand, "gate " + std::to_string(g.id) + " repeats an operand qubit");
        }
        for (Qubit q : g.qubits) {
            if (q < 0 || q >= c.n_qubits) {
                add(Code::QubitOutOfRange,
                    "gate " + std::to_string(g.id) + " touches qubit " + std::to_string(q));
            }
        }
        if (g.duration_ticks < 1) {
            add(Code::BadDuration, "gate " + std::to_string(g.id) + " has duration " + std::to_string(g.duration_ticks));
        }
    }

    bool deps_ok = true;
    for (const auto& [from, to] : c.deps) {
        for (GateId endpoint : {from, to}) {
            if (endpoint < 0 || endpoint >= static_cast<GateId>(n)) {
                add(Code::UnknownDepEndpoint, "dep endpoint " + std::to_string(endpoint) + " is not a gate id");
                deps_ok = false;
            }
        }
    }
    if (!deps_ok) {
        // The graph checks below index gates by dep endpoints; stop here.
        return issues;
    }

    const auto order = topological_order(c);
    if (!order) {
        add(Code::DependencyCycle, "precedence relation has a cycle");
        return issues;
    }

    std::vector<std::vector<GateId>> out(n);
    for (const auto& [from, to] : c.deps) {
        if (from == to) continue; // already reported as cycle above; kept for safety
        out[static_cast<std::size_t>(from)].push_back(to);
    }
    std::vector<std::size_t> topo_pos(n, 0);
    for (std::size_t i = 0; i < order->size(); ++i) topo_pos[static_cast<std::size_t>((*order)[i])] = i;

    // Gates on a common qubit must form a dependency chain.
    std::map<Qubit, std::vector<GateId>> on_qubit;
    for (const Gate& g : c.gates) {
        for (Qubit q : g.qubits) {
            if (q >= 0 && q < c.n_qubits) on_qubit[q].push_back(g.id);
        }
    }
    for (auto& [q, ids] : on_qubit) {
        std::sort(ids.begin(), ids.end(),
                  [&](GateId a, GateId b) { return topo_pos[static_cast<std::size_t>(a)] < topo_pos[static_cast<std::size_t>(b)]; });
        for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
            if (!reachable(out, ids[i], ids[i + 1])) {
                add(Code::BrokenQubitChain, "gates " + std::to_string(ids[i]) + " and " + std::to_string(ids[i + 1]) +
                                                " on qubit " + std::to_string(q) + " are unordered");
            }
        }
    }
    return issues;
}

GateCensus census(const Circuit& c) {
    GateCensus cns;
    for (const Gate& g : c.gates) ++cns[g.kind];
    return cns;
}

int protocol_set_size(const GateCensus& cns, int cphase_protocols) {
    if (cphase_protocols < 1) throw std::invalid_argument("protocol_set_size: cphase_protocols must be >= 1");
    int protocols = 0;
    for (int i = 0; i < kGateKindCount; ++i) {
        const auto kind = static_cast<GateKind>(i);
        if (kind == GateKind::Idle || cns[kind] == 0) continue;
        protocols += (kind == GateKind::CPhase) ? cphase_protocols : 1;
    }
    return protocols;
}

nlohmann::json circuit_to_json(const Circuit& c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : c.gates) {
        gates.push_back({{"id", g.id},
                         {"kind", std::string(to_string(g.kind))},
                         {"qubits", g.qubits},
                         {"duration", g.duration_ticks}});
    }
    nlohmann::json deps = nlohmann::json::array();
    for (const auto& [from, to] : c.deps) deps.push_back({from, to});
    return {{"n_qubits", c.n_qubits}, {"gates", std::move(gates)}, {"deps", std::move(deps)}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<int>();
    for (const auto& jg : j.at("gates")) {
        Gate g;
        g.id = jg.at("id").get<GateId>();
        const auto kind = gate_kind_from_string(jg.at("kind").get<std::string>());
        if (!kind) throw std::invalid_argument("unknown gate kind: " + jg.at("kind").get<std::string>());
        g.kind = *kind;
        g.qubits = jg.at("qubits").get<std::vector<Qubit>>();
        g.duration_ticks = jg.value("duration", Tick{1});
        c.gates.push_back(std::move(g));
    }
    for (const auto& jd : j.at("deps")) {
        c.deps.emplace_back(jd.at(0).get<GateId>(), jd.at(1).get<GateId>());
    }
    std::sort(c.deps.begin(), c.deps.end());
    c.deps.erase(std::unique(c.deps.begin(), c.deps.end()), c.deps.end());
    return c;
}

} // namespace qmicro
