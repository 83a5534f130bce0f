#include <doctest.h>

#include <cmath>
#include <random>

#include "qmicro/control_plane.hpp"
#include "qmicro/errors.hpp"

using namespace qmicro;

TEST_CASE("control word bits") {
    CHECK(control_word_bits(24, 21) == 45);
    CHECK(control_word_bits(0, 0) == 0);
    CHECK(control_word_bits(24, 0) == 24);
}

TEST_CASE("serial lines at the published operating points") {
    CHECK(serial_lines_required(45, 45e-9, 1e-9) == 1);
    CHECK(serial_lines_required(45, 23e-9, 1e-9) == 2);
    // 3 GHz classical clock: 15 ns carries 45 bits on one line.
    CHECK(serial_lines_required(45, 15e-9, 1e-9 / 3.0) == 1);
    CHECK(serial_lines_required(0, 45e-9, 1e-9) == 0);
    CHECK_THROWS_AS(serial_lines_required(45, 0.5e-9, 1e-9), InfeasibleClockError);
}

TEST_CASE("minimum quantum clock period") {
    CHECK(min_qclk(45, 2, 1e-9) == doctest::Approx(23e-9).epsilon(1e-12));
    CHECK(min_qclk(45, 1, 1e-9) == doctest::Approx(45e-9).epsilon(1e-12));
    CHECK(min_qclk(0, 4, 1e-9) == 0.0);
    CHECK_THROWS_AS(min_qclk(45, 0, 1e-9), std::invalid_argument);
}

TEST_CASE("pipeline feasibility") {
    CHECK(pipeline_feasible({1e-9, 30e-9, 2, 45}));
    CHECK(!pipeline_feasible({1e-9, 30e-9, 1, 45}));
    // Exact boundary: the word just fits.
    CHECK(pipeline_feasible({1e-9, 45e-9, 1, 45}));
}

TEST_CASE("pipeline feasibility agrees with its definition") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> bits(0, 100);
    std::uniform_int_distribution<std::int64_t> lines(1, 8);
    std::uniform_real_distribution<double> qclk_ns(1.0, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        ClockConfig cfg{1e-9, qclk_ns(rng) * 1e-9, lines(rng), bits(rng)};
        const double need = static_cast<double>((cfg.word_bits + cfg.data_lines - 1) / cfg.data_lines) * cfg.t_clk;
        CHECK(pipeline_feasible(cfg) == (need <= cfg.t_qclk * (1.0 + 1e-12)));
    }
}

TEST_CASE("direct line counts") {
    CHECK(direct_line_count(21, 15, 24) == 339);
    CHECK(direct_line_count(1, 15, 0) == 15);
    CHECK(direct_line_count(0, 15, 24) == 24);
}

TEST_CASE("line budget totals against the fridge limit") {
    const LineBudget dflt = default_line_budget();
    const LineBudgetTotal t = line_budget_total(dflt);
    // The published per-category list sums past the published commercial limit.
    CHECK(t.total == 69);
    CHECK(dflt.fridge_limit == 64);
    CHECK(!t.within_limit);

    LineBudget zeros{};
    zeros.fridge_limit = 64;
    const LineBudgetTotal z = line_budget_total(zeros);
    CHECK(z.total == 0);
    CHECK(z.within_limit);

    LineBudget boundary = dflt;
    boundary.fridge_limit = 69;
    CHECK(line_budget_total(boundary).within_limit);
}

TEST_CASE("staging verdicts") {
    const auto verdicts = staging_feasible(default_stage_powers());
    REQUIRE(verdicts.size() == 3);
    CHECK(verdicts[0].stage == Stage::T300K);
    CHECK(verdicts[0].feasible);
    CHECK(verdicts[1].stage == Stage::T4K);
    CHECK(verdicts[1].feasible);
    // Pulse generation needs ~1.2 mW; the mixing chamber offers 400 uW.
    CHECK(verdicts[2].stage == Stage::T100mK);
    CHECK(!verdicts[2].feasible);

    const auto idle = staging_feasible({{Stage::T100mK, 400e-6, 0.0}});
    CHECK(idle[0].feasible);
    const auto room = staging_feasible({{Stage::T300K, 1.0, 0.1}});
    CHECK(room[0].feasible);
}

TEST_CASE("duality: the minimum period never needs more lines than given") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> bits(1, 128);
    std::uniform_int_distribution<std::int64_t> lines(1, 10);
    std::uniform_real_distribution<double> clk_ns(0.1, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::int64_t b = bits(rng);
        const std::int64_t d = lines(rng);
        const double t = clk_ns(rng) * 1e-9;
        const double period = min_qclk(b, d, t);
        CHECK(serial_lines_required(b, period, t) <= d);
    }
}

TEST_CASE("serial line count is monotone in word size and period") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<std::int64_t> bits(1, 128);
    std::uniform_real_distribution<double> ratio(1.0, 200.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::int64_t b = bits(rng);
        const double r0 = ratio(rng);
        const double r1 = ratio(rng);
        const double lo = std::min(r0, r1), hi = std::max(r0, r1);
        // non-increasing in t_qclk
        CHECK(serial_lines_required(b, hi * 1e-9, 1e-9) <= serial_lines_required(b, lo * 1e-9, 1e-9));
        // non-decreasing in word bits
        CHECK(serial_lines_required(b + 1, lo * 1e-9, 1e-9) >= serial_lines_required(b, lo * 1e-9, 1e-9));
    }
}

TEST_CASE("serial-line step curve is monotone and hits the anchors") {
    const auto rows = fig5_sweep(45, 1.0, 90.0, 1.0);
    REQUIRE(rows.size() == 90);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].lines_required <= rows[i - 1].lines_required);
    }
    for (const Fig5Row& r : rows) {
        if (r.ratio == 45.0) CHECK(r.lines_required == 1);
        if (r.ratio == 23.0) CHECK(r.lines_required == 2);
    }
}

TEST_CASE("clock and budget json round-trips") {
    const ClockConfig cfg = default_clock_config();
    const ClockConfig cfg2 = clock_config_from_json(clock_config_to_json(cfg));
    CHECK(cfg2.t_clk == cfg.t_clk);
    CHECK(cfg2.t_qclk == cfg.t_qclk);
    CHECK(cfg2.data_lines == cfg.data_lines);
    CHECK(cfg2.word_bits == cfg.word_bits);

    const LineBudget b = default_line_budget();
    const LineBudget b2 = line_budget_from_json(line_budget_to_json(b));
    CHECK(line_budget_total(b2).total == line_budget_total(b).total);

    const auto stages = stage_powers_from_json(stage_powers_to_json(default_stage_powers()));
    REQUIRE(stages.size() == 3);
    CHECK(stages[2].stage == Stage::T100mK);
    CHECK(stages[2].demand_w == doctest::Approx(1.2e-3));
}

TEST_CASE("invalid clock json is rejected") {
    CHECK_THROWS_AS(clock_config_from_json({{"t_clk_s", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(clock_config_from_json({{"t_clk_s", 2e-9}, {"t_qclk_s", 1e-9}}), std::invalid_argument);
    CHECK_THROWS_AS(clock_config_from_json({{"data_lines", 0}}), std::invalid_argument);
}
