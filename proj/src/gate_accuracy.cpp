#include "qmicro/gate_accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qmicro/errors.hpp"
#include "qmicro/textio.hpp"

namespace qmicro {

double zpi_gate_time(double j_target_ev) {
    if (j_target_ev <= 0) throw std::invalid_argument("zpi_gate_time: exchange target must be positive");
    return std::numbers::pi * kHBarEvS / j_target_ev;
}

double z_rotation_error(double delta_j_ev, double j_target_ev) {
    if (j_target_ev <= 0) throw std::invalid_argument("z_rotation_error: exchange target must be positive");
    return std::numbers::pi * delta_j_ev / j_target_ev;
}

double jitter_rotation_error(double delta_t_s, double j_target_ev) {
    return delta_t_s * j_target_ev / kHBarEvS;
}

double total_rotation_error(double delta_j_ev, double delta_t_s, double j_target_ev) {
    return z_rotation_error(delta_j_ev, j_target_ev) + jitter_rotation_error(delta_t_s, j_target_ev);
}

double rotation_error_to_probability(double phi) { return phi * phi; }

bool rotation_error_in_domain(double phi) { return std::abs(phi) <= 1.0; }

double min_gate_time_from_jitter(double delta_t_s, double max_relative_error) {
    if (max_relative_error <= 0) {
        throw std::invalid_argument("min_gate_time_from_jitter: max_relative_error must be positive");
    }
    return delta_t_s / max_relative_error;
}

namespace {

// Rotation-error calibration for the Si-DQD exchange gate. Exchange targets
// 0.069/0.5/1/2 ueV, voltage errors 1/10/100/1000 uV, exchange errors in eV.
struct CalibrationSample {
    double j_uev;
    double dv_uv;
    double dj_ev;
};

constexpr CalibrationSample kCalibration[] = {
    {0.069, 1, 2.379e-11},  {0.069, 10, 2.383e-10}, {0.069, 100, 2.418e-9}, {0.069, 1000, 2.735e-8},
    {0.5, 1, 1.873e-10},    {0.5, 10, 1.878e-9},    {0.5, 100, 1.923e-8},   {0.5, 1000, 2.469e-7},
    {1, 1, 4.757e-10},      {1, 10, 4.771e-9},      {1, 100, 4.910e-8},     {1, 1000, 6.756e-7},
    {2, 1, 1.186e-9},       {2, 10, 1.191e-8},      {2, 100, 1.234e-7},     {2, 1000, 1.879e-6},
};

double log_interp(double x, double x0, double y0, double x1, double y1) {
    const double t = (std::log(x) - std::log(x0)) / (std::log(x1) - std::log(x0));
    return std::exp(std::log(y0) + t * (std::log(y1) - std::log(y0)));
}

// Unit conversions round differently than literals (0.069 * 1e-6 vs
// 0.069e-6); treat queries within one part in 1e9 as hitting the sample.
bool nearly(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

std::vector<ExchangePoint> samples_to_points(const std::vector<CalibrationSample>& samples) {
    std::vector<ExchangePoint> points;
    for (const CalibrationSample& s : samples) {
        const double j_ev = s.j_uev * 1e-6;
        const double dv_v = s.dv_uv * 1e-6;
        auto it = std::find_if(points.begin(), points.end(),
                               [&](const ExchangePoint& p) { return p.j_target_ev == j_ev; });
        if (it == points.end()) {
            points.push_back(ExchangePoint{j_ev, {}});
            it = std::prev(points.end());
        }
        it->dj_by_dv.emplace_back(dv_v, s.dj_ev);
    }
    std::sort(points.begin(), points.end(),
              [](const ExchangePoint& a, const ExchangePoint& b) { return a.j_target_ev < b.j_target_ev; });
    for (ExchangePoint& p : points) {
        std::sort(p.dj_by_dv.begin(), p.dj_by_dv.end());
        if (p.dj_by_dv.empty()) throw std::invalid_argument("exchange point without samples");
        double prev = 0.0;
        for (const auto& [dv, dj] : p.dj_by_dv) {
            if (dv <= 0 || dj <= 0) throw std::invalid_argument("exchange samples must be positive");
            if (dj <= prev) throw std::invalid_argument("exchange error must increase with voltage error");
            prev = dj;
        }
    }
    return points;
}

double interp_row(const ExchangePoint& p, double dv, bool allow_extrapolation) {
    const auto& s = p.dj_by_dv;
    for (const auto& [x, y] : s) {
        if (nearly(dv, x)) return y;
    }
    if (dv < s.front().first || dv > s.back().first) {
        if (!allow_extrapolation) {
            throw std::out_of_range("delta_j: voltage error outside calibration range (pass the extrapolation flag)");
        }
    }
    if (s.size() == 1) return s.front().second;
    std::size_t hi = 1;
    while (hi + 1 < s.size() && s[hi].first < dv) ++hi;
    const auto& [x0, y0] = s[hi - 1];
    const auto& [x1, y1] = s[hi];
    return log_interp(dv, x0, y0, x1, y1);
}

} // namespace

ExchangeTable::ExchangeTable(std::vector<ExchangePoint> points) : points_(std::move(points)) {}

ExchangeTable ExchangeTable::builtin_table() {
    std::vector<CalibrationSample> samples(std::begin(kCalibration), std::end(kCalibration));
    return ExchangeTable(samples_to_points(samples));
}

ExchangeTable ExchangeTable::from_csv(std::istream& in) {
    std::vector<CalibrationSample> samples;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        CalibrationSample s{};
        if (!std::getline(ss, field, ',')) throw IoError("calibration CSV: bad row: " + line);
        s.j_uev = std::stod(field);
        if (!std::getline(ss, field, ',')) throw IoError("calibration CSV: bad row: " + line);
        s.dv_uv = std::stod(field);
        if (!std::getline(ss, field, ',')) throw IoError("calibration CSV: bad row: " + line);
        s.dj_ev = std::stod(field);
        samples.push_back(s);
    }
    if (samples.empty()) throw IoError("calibration CSV: no samples");
    return ExchangeTable(samples_to_points(samples));
}

std::string ExchangeTable::to_csv() const {
    std::string out = csv_row({"j_target_ueV", "delta_v_uV", "delta_j_eV"});
    for (const ExchangePoint& p : points_) {
        for (const auto& [dv, dj] : p.dj_by_dv) {
            out += csv_row({format_double(p.j_target_ev * 1e6), format_double(dv * 1e6), format_double(dj)});
        }
    }
    return out;
}

double ExchangeTable::delta_j(double j_target_ev, double delta_v_v, bool allow_extrapolation) const {
    if (points_.empty()) throw std::logic_error("empty exchange table");
    for (const ExchangePoint& p : points_) {
        if (nearly(j_target_ev, p.j_target_ev)) return interp_row(p, delta_v_v, allow_extrapolation);
    }
    if (j_target_ev < points_.front().j_target_ev || j_target_ev > points_.back().j_target_ev) {
        if (!allow_extrapolation) {
            throw std::out_of_range("delta_j: exchange target outside calibration range (pass the extrapolation flag)");
        }
    }
    if (points_.size() == 1) return interp_row(points_.front(), delta_v_v, allow_extrapolation);
    std::size_t hi = 1;
    while (hi + 1 < points_.size() && points_[hi].j_target_ev < j_target_ev) ++hi;
    const ExchangePoint& lo = points_[hi - 1];
    const ExchangePoint& up = points_[hi];
    const double y0 = interp_row(lo, delta_v_v, allow_extrapolation);
    const double y1 = interp_row(up, delta_v_v, allow_extrapolation);
    return log_interp(j_target_ev, lo.j_target_ev, y0, up.j_target_ev, y1);
}

ExponentialExchangeModel ExponentialExchangeModel::calibrate(const ExchangeTable& table) {
    ExponentialExchangeModel model;
    for (const ExchangePoint& p : table.points()) {
        const auto& [dv, dj] = p.dj_by_dv.front(); // smallest voltage-error sample
        const double v0 = dv / std::log1p(dj / p.j_target_ev);
        model.scales_.push_back({p.j_target_ev, v0});
    }
    return model;
}

double ExponentialExchangeModel::delta_j(double j_target_ev, double delta_v_v, bool allow_extrapolation) const {
    if (scales_.empty()) throw std::logic_error("uncalibrated exponential exchange model");
    double v0 = 0.0;
    bool matched = false;
    for (const Scale& s : scales_) {
        if (nearly(j_target_ev, s.j_target_ev)) {
            v0 = s.v0_v;
            matched = true;
            break;
        }
    }
    if (!matched) {
        if (j_target_ev < scales_.front().j_target_ev || j_target_ev > scales_.back().j_target_ev) {
            if (!allow_extrapolation) {
                throw std::out_of_range(
                    "delta_j: exchange target outside calibration range (pass the extrapolation flag)");
            }
        }
        if (scales_.size() == 1) {
            v0 = scales_.front().v0_v;
        } else {
            std::size_t hi = 1;
            while (hi + 1 < scales_.size() && scales_[hi].j_target_ev < j_target_ev) ++hi;
            v0 = log_interp(j_target_ev, scales_[hi - 1].j_target_ev, scales_[hi - 1].v0_v,
                            scales_[hi].j_target_ev, scales_[hi].v0_v);
        }
    }
    return j_target_ev * std::expm1(delta_v_v / v0);
}

double delta_j(const ExchangeModel& model, double j_target_ev, double delta_v_v, bool allow_extrapolation) {
    return std::visit(
        [&](const auto& m) { return m.delta_j(j_target_ev, delta_v_v, allow_extrapolation); }, model);
}

std::vector<RotationErrorRow> table3_report(const ExchangeModel& model, const std::vector<double>& noise_levels_v,
                                            const std::vector<double>& j_targets_ev) {
    std::vector<RotationErrorRow> rows;
    for (double j : j_targets_ev) {
        for (double dv : noise_levels_v) {
            const double dj = delta_j(model, j, dv);
            rows.push_back({j, dv, dj, z_rotation_error(dj, j), zpi_gate_time(j)});
        }
    }
    return rows;
}

std::string rotation_error_rows_csv(const std::vector<RotationErrorRow>& rows) {
    std::string out = csv_row({"j_target_ueV", "gate_error_uV", "j_error_eV", "z_error_rad", "gate_time_ns"});
    for (const RotationErrorRow& r : rows) {
        out += csv_row({format_double(r.j_target_ev * 1e6), format_double(r.delta_v_v * 1e6),
                        format_double(r.delta_j_ev), format_double(r.z_error_rad),
                        format_double(r.gate_time_s * 1e9)});
    }
    return out;
}

std::vector<double> default_noise_levels_v() { return {1e-6, 10e-6, 100e-6, 1000e-6}; }

std::vector<double> default_j_targets_ev() { return {0.069e-6, 0.5e-6, 1e-6, 2e-6}; }

} // namespace qmicro
