#include "qmicro/error_budget.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qmicro/textio.hpp"

namespace qmicro {

BudgetResult circuit_error_bound(const ErrorBudgetInput& in) {
    if (in.n_gates < 0 || in.idle_ticks < 0) {
        throw std::invalid_argument("circuit_error_bound: counts must be non-negative");
    }
    if (in.gate_error < 0 || in.gate_error > 1 || in.idle_error < 0 || in.idle_error > 1) {
        throw std::invalid_argument("circuit_error_bound: probabilities must be in [0,1]");
    }
    const double n = static_cast<double>(in.n_gates);
    const double m = static_cast<double>(in.idle_ticks);
    const double p = in.gate_error;
    const double q = in.idle_error;
    BudgetResult r;
    r.term_idle_pair = m * (m - 1) / 2.0 * q * q;
    r.term_cross = (n * p) * (m * q);
    r.term_gate_pair = n * (n - 1) / 2.0 * p * p;
    r.p_circuit = r.term_idle_pair + r.term_cross + r.term_gate_pair;
    r.beneficial_vs_gate = r.p_circuit < p;
    r.beneficial_vs_idle = r.p_circuit < q;
    r.exceeds_one = r.p_circuit > 1.0;
    return r;
}

IdleErrorResult idle_error_from_clock(double t_qclk_s, double t2_s) {
    if (t2_s <= 0) throw std::invalid_argument("idle_error_from_clock: t2 must be positive");
    if (t_qclk_s > t2_s) return {1.0, true};
    return {t_qclk_s / t2_s, false};
}

double benefit_ceiling(std::int64_t n, std::int64_t m, double q) {
    (void)n;
    const double md = static_cast<double>(m);
    return md * (md - 1) / 2.0 * q * q;
}

std::optional<double> crossover_gate_error(std::int64_t n, std::int64_t m, double q) {
    // Solve a p^2 + b p + c = q for p > 0 with
    //   a = N(N-1)/2, b = N M q, c = M(M-1)/2 q^2.
    const double ceiling = benefit_ceiling(n, m, q);
    if (ceiling >= q) return std::nullopt;
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    const double a = nd * (nd - 1) / 2.0;
    const double b = nd * md * q;
    const double c = ceiling;
    if (a == 0.0) {
        if (b == 0.0) return std::nullopt; // bound is constant in p; no crossing
        return (q - c) / b;
    }
    const double disc = b * b + 4.0 * a * (q - c);
    return (-b + std::sqrt(disc)) / (2.0 * a);
}

Fig7Curves fig7_sweep(std::int64_t n, std::int64_t m_constrained, std::int64_t m_unconstrained,
                      const std::vector<double>& q_list, const std::vector<double>& p_grid) {
    Fig7Curves out;
    for (double q : q_list) {
        for (std::int64_t m : {m_unconstrained, m_constrained}) {
            for (double p : p_grid) {
                out.points.push_back({q, m, p, circuit_error_bound({n, m, p, q, std::nullopt})});
            }
            out.crossovers.push_back({q, m, crossover_gate_error(n, m, q)});
        }
    }
    return out;
}

std::vector<double> default_fig7_q_list() { return {1e-4, 1e-5, 1e-6}; }

std::vector<double> default_fig7_p_grid() {
    // 10 log-spaced points per decade from 1e-7 through 1e-2.
    std::vector<double> grid;
    for (int i = 0; i <= 50; ++i) {
        grid.push_back(std::pow(10.0, -7.0 + static_cast<double>(i) * 0.1));
    }
    return grid;
}

std::string fig7_csv(const Fig7Curves& curves) {
    std::string out = csv_row({"q", "M", "p", "p_circuit", "term_idle_pair", "term_cross", "term_gate_pair"});
    for (const Fig7Point& pt : curves.points) {
        out += csv_row({format_double(pt.q), std::to_string(pt.m), format_double(pt.p),
                        format_double(pt.result.p_circuit), format_double(pt.result.term_idle_pair),
                        format_double(pt.result.term_cross), format_double(pt.result.term_gate_pair)});
    }
    return out;
}

std::string crossovers_json(const Fig7Curves& curves) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : curves.crossovers) {
        nlohmann::json item = {{"q", c.q}, {"M", c.m}};
        if (c.p_star) {
            item["p_star"] = *c.p_star;
        } else {
            item["p_star"] = nullptr;
        }
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

} // namespace qmicro
