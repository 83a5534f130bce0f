#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmicro/circuit.hpp"

namespace qmicro {

/// One CMOS multiplexing unit: a single waveform generator shared by all
/// member qubits.
struct ControlBlock {
    int id = 0;
    std::vector<Qubit> qubit_members;
};

/// The 100 mK chip model: qubit inventory, control-block partition, CPhase
/// switch couplings and signal routing overlaps.
struct ArchModel {
    int n_qubits = 0;
    std::vector<ControlBlock> blocks;
    int n_cphase_switches = 0;
    std::vector<std::pair<Qubit, Qubit>> neighbor_pairs; // stored (min,max), sorted
    std::map<Qubit, std::vector<Qubit>> signal_overlap;

    /// Block id containing q, or -1 when q is unassigned.
    int block_of(Qubit q) const;
    bool allows_cphase(Qubit a, Qubit b) const;
};

/// 21 qubits in 16 blocks (11 singles, 5 pairs), 24 switch-controlled
/// ancilla-data couplings, empty signal overlap. The pairing follows the
/// five shared generators of the default floorplan; override it by loading
/// an arch file.
ArchModel default_bs9_21_arch();

std::vector<std::string> validate_arch(const ArchModel& a);

nlohmann::json arch_to_json(const ArchModel& a);
ArchModel arch_from_json(const nlohmann::json& j);

/// One manufacturing process node row of the routing-density model.
struct RoutingNode {
    std::string name;
    std::int64_t channels = 0;
    std::int64_t effective_lines_per_qubit = 1;
};

/// floor(channels / effective_lines_per_qubit).
std::int64_t controllable_qubits(const RoutingNode& r);

struct RoutingTableRow {
    std::string name;
    std::int64_t channels = 0;
    std::int64_t controllable = 0;
};

std::vector<RoutingTableRow> routing_table(const std::vector<RoutingNode>& nodes);

/// Process nodes 350/130/90/65/45 nm with their routing-channel counts and
/// the default 12 effective lines per qubit.
std::vector<RoutingNode> default_routing_nodes();

/// CSV rows "name,channels,eff_lines" (header line required).
std::vector<RoutingNode> routing_nodes_from_csv(std::istream& in);
std::string routing_table_csv(const std::vector<RoutingTableRow>& rows);

} // namespace qmicro
