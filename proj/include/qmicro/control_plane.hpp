#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmicro {

/// Classical/quantum clock relation plus the serialized control word.
/// Times in seconds.
struct ClockConfig {
    double t_clk = 1e-9;
    double t_qclk = 30e-9;
    std::int64_t data_lines = 2;
    std::int64_t word_bits = 45;
};

/// Per-category line counts between room temperature and the 100 mK stage.
struct LineBudget {
    std::int64_t awg_lines = 0;
    std::int64_t measurement_lines = 0;
    std::int64_t inductor_lines = 0;
    std::int64_t shared_bias_lines = 0;
    std::int64_t tuning_lines = 0;
    std::int64_t serial_control_lines = 0;
    std::int64_t fridge_limit = 0;
};

enum class Stage { T300K, T4K, T100mK };

std::string_view to_string(Stage s);

struct StagePower {
    Stage stage = Stage::T300K;
    double cooling_budget_w = 0.0;
    double demand_w = 0.0;
};

struct StageVerdict {
    Stage stage;
    double cooling_budget_w;
    double demand_w;
    bool feasible;
};

std::int64_t control_word_bits(std::int64_t n_cphase_switch_bits, std::int64_t n_mux_bits);

/// Serial data lines needed to ship word_bits within one quantum period at
/// the given classical clock: ceil(bits / floor(t_qclk / t_clk)). Throws
/// InfeasibleClockError when not even one bit fits per quantum period.
std::int64_t serial_lines_required(std::int64_t word_bits, double t_qclk, double t_clk);

/// Smallest quantum period able to carry the control word:
/// ceil(bits / lines) * t_clk.
double min_qclk(std::int64_t word_bits, std::int64_t data_lines, double t_clk);

/// True iff the control word for tick k fits inside the gate at tick k-1.
bool pipeline_feasible(const ClockConfig& cfg);

std::int64_t direct_line_count(std::int64_t n_qubits, std::int64_t lines_per_qubit, std::int64_t switch_lines);

struct LineBudgetTotal {
    std::int64_t total;
    bool within_limit;
};

LineBudgetTotal line_budget_total(const LineBudget& b);

std::vector<StageVerdict> staging_feasible(const std::vector<StagePower>& stages);

ClockConfig default_clock_config();
LineBudget default_line_budget();
std::vector<StagePower> default_stage_powers();

struct Fig5Row {
    double ratio; // t_qclk / t_clk
    std::int64_t lines_required;
};

/// Required serial lines over a grid of quantum-to-classical clock ratios.
std::vector<Fig5Row> fig5_sweep(std::int64_t word_bits, double ratio_min, double ratio_max, double ratio_step);

ClockConfig clock_config_from_json(const nlohmann::json& j);
nlohmann::json clock_config_to_json(const ClockConfig& cfg);
LineBudget line_budget_from_json(const nlohmann::json& j);
nlohmann::json line_budget_to_json(const LineBudget& b);
std::vector<StagePower> stage_powers_from_json(const nlohmann::json& j);
nlohmann::json stage_powers_to_json(const std::vector<StagePower>& stages);

} // namespace qmicro
