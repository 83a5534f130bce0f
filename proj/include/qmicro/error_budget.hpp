#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmicro {

/// Inputs of the pessimistic distance-3 circuit failure bound:
/// N gates failing with probability p each and M idle ticks failing with
/// probability q each.
struct ErrorBudgetInput {
    std::int64_t n_gates = 0;
    std::int64_t idle_ticks = 0;
    double gate_error = 0.0;
    double idle_error = 0.0;
    std::optional<double> t2_s; // used only when deriving idle_error from clocks
};

struct BudgetResult {
    double p_circuit = 0.0;
    double term_idle_pair = 0.0; // M(M-1)/2 * q^2
    double term_cross = 0.0;     // (N p)(M q)
    double term_gate_pair = 0.0; // N(N-1)/2 * p^2
    bool beneficial_vs_gate = false; // p_circuit < p
    bool beneficial_vs_idle = false; // p_circuit < q
    bool exceeds_one = false;        // raw bound above 1; reported, never clamped
};

/// p_circuit = M(M-1)/2 q^2 + (Np)(Mq) + N(N-1)/2 p^2.
BudgetResult circuit_error_bound(const ErrorBudgetInput& in);

struct IdleErrorResult {
    double q = 0.0;
    bool saturated = false; // t_qclk exceeded t2; q clamped to 1
};

/// q = t_qclk / t2.
IdleErrorResult idle_error_from_clock(double t_qclk_s, double t2_s);

/// Failure bound as gate error approaches zero: M(M-1)/2 * q^2.
double benefit_ceiling(std::int64_t n, std::int64_t m, double q);

/// Gate error p* at which the encoded circuit's bound equals the bare idle
/// error q, when the idle-only ceiling leaves room for one.
std::optional<double> crossover_gate_error(std::int64_t n, std::int64_t m, double q);

struct Fig7Point {
    double q;
    std::int64_t m;
    double p;
    BudgetResult result;
};

struct Fig7Curves {
    std::vector<Fig7Point> points; // ordered by (q, m, p)
    struct Crossover {
        double q;
        std::int64_t m;
        std::optional<double> p_star;
    };
    std::vector<Crossover> crossovers;
};

Fig7Curves fig7_sweep(std::int64_t n, std::int64_t m_constrained, std::int64_t m_unconstrained,
                      const std::vector<double>& q_list, const std::vector<double>& p_grid);

std::vector<double> default_fig7_q_list();
std::vector<double> default_fig7_p_grid();

std::string fig7_csv(const Fig7Curves& curves);
std::string crossovers_json(const Fig7Curves& curves);

} // namespace qmicro
