#pragma once

#include <istream>
#include <string>
#include <variant>
#include <vector>

namespace qmicro {

/// Reduced Planck constant in eV*s.
inline constexpr double kHBarEvS = 6.582119569e-16;

/// Time of a Z-pi rotation driven at exchange energy j_target: pi*hbar/J.
double zpi_gate_time(double j_target_ev);

/// Rotation error from an exchange-energy offset held for a full Z-pi gate:
/// delta_j * t / hbar at t = pi*hbar/J, i.e. pi * delta_j / J.
double z_rotation_error(double delta_j_ev, double j_target_ev);

/// Rotation error from pulse-timing jitter: delta_t * J / hbar.
double jitter_rotation_error(double delta_t_s, double j_target_ev);

double total_rotation_error(double delta_j_ev, double delta_t_s, double j_target_ev);

/// Small-angle map from rotation error to error probability: phi^2.
/// The approximation only holds for |phi| <= 1; callers should flag larger
/// inputs (see rotation_error_in_domain).
double rotation_error_to_probability(double phi);
bool rotation_error_in_domain(double phi);

/// Shortest gate time keeping delta_t / t_gate at or below the target.
double min_gate_time_from_jitter(double delta_t_s, double max_relative_error);

/// Measured (j_target, voltage error -> exchange error) calibration samples
/// for one operating point of the exchange curve.
struct ExchangePoint {
    double j_target_ev = 0.0;
    std::vector<std::pair<double, double>> dj_by_dv; // (delta_v volts, delta_j eV), sorted by delta_v
};

/// Calibration-table model: exact at sample points, log-log interpolated
/// between voltage errors and between exchange targets.
class ExchangeTable {
public:
    static ExchangeTable builtin_table();
    static ExchangeTable from_csv(std::istream& in);

    double delta_j(double j_target_ev, double delta_v_v, bool allow_extrapolation = false) const;
    const std::vector<ExchangePoint>& points() const { return points_; }
    std::string to_csv() const;

private:
    explicit ExchangeTable(std::vector<ExchangePoint> points);
    std::vector<ExchangePoint> points_; // sorted by j_target
};

/// One-parameter convenience fit per exchange target:
/// delta_j(dv) = J * (exp(dv / v0) - 1), v0 pinned at the smallest-voltage
/// calibration sample. Within ~15% of the table at 1 mV.
class ExponentialExchangeModel {
public:
    static ExponentialExchangeModel calibrate(const ExchangeTable& table);

    double delta_j(double j_target_ev, double delta_v_v, bool allow_extrapolation = false) const;

private:
    struct Scale {
        double j_target_ev;
        double v0_v;
    };
    std::vector<Scale> scales_; // sorted by j_target
};

using ExchangeModel = std::variant<ExchangeTable, ExponentialExchangeModel>;

double delta_j(const ExchangeModel& model, double j_target_ev, double delta_v_v, bool allow_extrapolation = false);

struct RotationErrorRow {
    double j_target_ev;
    double delta_v_v;
    double delta_j_ev;
    double z_error_rad;
    double gate_time_s;
};

/// Full grid of (target, noise) rows combining delta_j, z_rotation_error and
/// zpi_gate_time.
std::vector<RotationErrorRow> table3_report(const ExchangeModel& model, const std::vector<double>& noise_levels_v,
                                            const std::vector<double>& j_targets_ev);

std::string rotation_error_rows_csv(const std::vector<RotationErrorRow>& rows);

std::vector<double> default_noise_levels_v();
std::vector<double> default_j_targets_ev();

} // namespace qmicro
