#include "qmicro/arch.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "qmicro/errors.hpp"
#include "qmicro/textio.hpp"

namespace qmicro {

namespace {

std::pair<Qubit, Qubit> ordered(Qubit a, Qubit b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// Data qubits 0..8 (3x3 row-major), ZZ ancillas 9..14, XX ancillas 15..20.
// The five shared generators each serve one inner-cross data qubit and one
// XX-check ancilla reached by the same routing corridor; the remaining 11
// qubits get dedicated generators. The published floorplan does not pin the
// mapping, so this cover ships as an editable data file.
constexpr std::array<std::pair<Qubit, Qubit>, 5> kDefaultSharedPairs = {{
    {1, 20},
    {3, 19},
    {4, 15},
    {5, 17},
    {7, 16},
}};

} // namespace

int ArchModel::block_of(Qubit q) const {
    for (const ControlBlock& b : blocks) {
        for (Qubit member : b.qubit_members) {
            if (member == q) return b.id;
        }
    }
    return -1;
}

bool ArchModel::allows_cphase(Qubit a, Qubit b) const {
    return std::binary_search(neighbor_pairs.begin(), neighbor_pairs.end(), ordered(a, b));
}

ArchModel default_bs9_21_arch() {
    ArchModel m;
    m.n_qubits = 21;
    m.n_cphase_switches = 24;

    std::vector<Qubit> partner(21, -1);
    for (const auto& [a, b] : kDefaultSharedPairs) {
        partner[static_cast<std::size_t>(a)] = b;
        partner[static_cast<std::size_t>(b)] = a;
    }
    std::vector<bool> placed(21, false);
    for (Qubit q = 0; q < 21; ++q) {
        if (placed[static_cast<std::size_t>(q)]) continue;
        ControlBlock b;
        b.id = static_cast<int>(m.blocks.size());
        b.qubit_members.push_back(q);
        placed[static_cast<std::size_t>(q)] = true;
        const Qubit p = partner[static_cast<std::size_t>(q)];
        if (p >= 0 && !placed[static_cast<std::size_t>(p)]) {
            b.qubit_members.push_back(p);
            placed[static_cast<std::size_t>(p)] = true;
        }
        m.blocks.push_back(std::move(b));
    }

    // One switchable coupling per gauge-check CPhase operand pair.
    const Circuit c = generate_bs9_21_half_round();
    std::set<std::pair<Qubit, Qubit>> pairs;
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::CPhase) pairs.insert(ordered(g.qubits[0], g.qubits[1]));
    }
    m.neighbor_pairs.assign(pairs.begin(), pairs.end());
    return m;
}

std::vector<std::string> validate_arch(const ArchModel& a) {
    std::vector<std::string> issues;
    std::vector<int> seen(static_cast<std::size_t>(std::max(a.n_qubits, 0)), 0);
    for (const ControlBlock& b : a.blocks) {
        if (b.qubit_members.empty()) issues.push_back("block " + std::to_string(b.id) + " is empty");
        std::set<Qubit> distinct(b.qubit_members.begin(), b.qubit_members.end());
        if (distinct.size() != b.qubit_members.size()) {
            issues.push_back("block " + std::to_string(b.id) + " repeats a member");
        }
        for (Qubit q : b.qubit_members) {
            if (q < 0 || q >= a.n_qubits) {
                issues.push_back("block " + std::to_string(b.id) + " member " + std::to_string(q) + " out of range");
            } else {
                ++seen[static_cast<std::size_t>(q)];
            }
        }
    }
    for (Qubit q = 0; q < a.n_qubits; ++q) {
        if (seen[static_cast<std::size_t>(q)] != 1) {
            issues.push_back("qubit " + std::to_string(q) + " is in " + std::to_string(seen[static_cast<std::size_t>(q)]) +
                             " blocks");
        }
    }
    for (const auto& [x, y] : a.neighbor_pairs) {
        if (x < 0 || x >= a.n_qubits || y < 0 || y >= a.n_qubits || x == y) {
            issues.push_back("neighbor pair (" + std::to_string(x) + "," + std::to_string(y) + ") is invalid");
        }
    }
    for (const auto& [q, over] : a.signal_overlap) {
        if (q < 0 || q >= a.n_qubits) issues.push_back("signal_overlap key " + std::to_string(q) + " out of range");
        for (Qubit y : over) {
            if (y < 0 || y >= a.n_qubits) {
                issues.push_back("signal_overlap[" + std::to_string(q) + "] entry " + std::to_string(y) +
                                 " out of range");
            }
        }
    }
    return issues;
}

nlohmann::json arch_to_json(const ArchModel& a) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const ControlBlock& b : a.blocks) blocks.push_back(b.qubit_members);
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [x, y] : a.neighbor_pairs) pairs.push_back({x, y});
    nlohmann::json overlap = nlohmann::json::object();
    for (const auto& [q, over] : a.signal_overlap) overlap[std::to_string(q)] = over;
    return {{"n_qubits", a.n_qubits},
            {"blocks", std::move(blocks)},
            {"n_cphase_switches", a.n_cphase_switches},
            {"neighbor_pairs", std::move(pairs)},
            {"signal_overlap", std::move(overlap)}};
}

ArchModel arch_from_json(const nlohmann::json& j) {
    ArchModel a;
    a.n_qubits = j.at("n_qubits").get<int>();
    int id = 0;
    for (const auto& jb : j.at("blocks")) {
        a.blocks.push_back(ControlBlock{id++, jb.get<std::vector<Qubit>>()});
    }
    a.n_cphase_switches = j.at("n_cphase_switches").get<int>();
    for (const auto& jp : j.at("neighbor_pairs")) {
        a.neighbor_pairs.push_back(ordered(jp.at(0).get<Qubit>(), jp.at(1).get<Qubit>()));
    }
    std::sort(a.neighbor_pairs.begin(), a.neighbor_pairs.end());
    a.neighbor_pairs.erase(std::unique(a.neighbor_pairs.begin(), a.neighbor_pairs.end()), a.neighbor_pairs.end());
    if (j.contains("signal_overlap")) {
        for (const auto& [key, value] : j.at("signal_overlap").items()) {
            a.signal_overlap[std::stoi(key)] = value.get<std::vector<Qubit>>();
        }
    }
    return a;
}

std::int64_t controllable_qubits(const RoutingNode& r) {
    return r.channels / r.effective_lines_per_qubit;
}

std::vector<RoutingTableRow> routing_table(const std::vector<RoutingNode>& nodes) {
    std::vector<RoutingTableRow> rows;
    rows.reserve(nodes.size());
    for (const RoutingNode& n : nodes) {
        rows.push_back({n.name, n.channels, controllable_qubits(n)});
    }
    return rows;
}

std::vector<RoutingNode> default_routing_nodes() {
    return {
        {"350nm", 4, 12}, {"130nm", 19, 12}, {"90nm", 27, 12}, {"65nm", 40, 12}, {"45nm", 62, 12},
    };
}

std::vector<RoutingNode> routing_nodes_from_csv(std::istream& in) {
    std::vector<RoutingNode> nodes;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ss(line);
        RoutingNode n;
        std::string field;
        if (!std::getline(ss, n.name, ',')) throw IoError("routing CSV: bad row: " + line);
        if (!std::getline(ss, field, ',')) throw IoError("routing CSV: bad row: " + line);
        n.channels = std::stoll(field);
        if (!std::getline(ss, field, ',')) throw IoError("routing CSV: bad row: " + line);
        n.effective_lines_per_qubit = std::stoll(field);
        if (n.effective_lines_per_qubit < 1) throw IoError("routing CSV: eff_lines must be >= 1");
        nodes.push_back(std::move(n));
    }
    return nodes;
}

std::string routing_table_csv(const std::vector<RoutingTableRow>& rows) {
    std::string out = csv_row({"name", "channels", "controllable_qubits"});
    for (const RoutingTableRow& r : rows) {
        out += csv_row({r.name, std::to_string(r.channels), std::to_string(r.controllable)});
    }
    return out;
}

} // namespace qmicro
