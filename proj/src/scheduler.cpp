#include "qmicro/scheduler.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "qmicro/errors.hpp"

namespace qmicro {

std::string_view to_string(IdleWindowPolicy p) {
    return p == IdleWindowPolicy::FirstToLastOp ? "first-last" : "makespan";
}

std::optional<IdleWindowPolicy> idle_policy_from_string(std::string_view s) {
    if (s == "first-last") return IdleWindowPolicy::FirstToLastOp;
    if (s == "makespan") return IdleWindowPolicy::FullMakespan;
    return std::nullopt;
}

IdleAccount account_idles(const Circuit& c, const TickAssignment& t, IdleWindowPolicy policy) {
    IdleAccount acc;
    acc.per_qubit.assign(static_cast<std::size_t>(c.n_qubits), 0);
    std::vector<Tick> first(static_cast<std::size_t>(c.n_qubits), -1);
    std::vector<Tick> last(static_cast<std::size_t>(c.n_qubits), 0);
    std::vector<std::int64_t> occupied(static_cast<std::size_t>(c.n_qubits), 0);
    for (const Gate& g : c.gates) {
        const Tick s = t.at(g.id);
        const Tick e = s + g.duration_ticks;
        acc.makespan = std::max(acc.makespan, e);
        for (Qubit q : g.qubits) {
            const auto i = static_cast<std::size_t>(q);
            if (first[i] < 0 || s < first[i]) first[i] = s;
            last[i] = std::max(last[i], e);
            occupied[i] += g.duration_ticks;
        }
    }
    for (Qubit q = 0; q < c.n_qubits; ++q) {
        const auto i = static_cast<std::size_t>(q);
        std::int64_t idle = 0;
        if (policy == IdleWindowPolicy::FirstToLastOp) {
            if (first[i] >= 0) idle = (last[i] - first[i]) - occupied[i];
        } else {
            idle = acc.makespan - occupied[i];
        }
        acc.per_qubit[i] = idle;
        acc.total += idle;
    }
    return acc;
}

namespace {

constexpr int kNoBlock = -1;

/// Immutable per-run context: dependency structure, critical-path tails,
/// per-qubit program chains and the arch-derived lookup tables.
struct Ctx {
    const Circuit& c;
    const ConstraintSet& cs;
    std::vector<std::vector<GateId>> succs;
    std::vector<std::vector<GateId>> preds;
    std::vector<Tick> tail; // longest downstream path including the gate itself
    std::vector<std::vector<GateId>> chain; // per qubit, program order
    std::vector<std::array<int, 2>> gate_blocks; // distinct block ids, kNoBlock-padded
    std::vector<std::vector<Qubit>> overlap_fwd;
    std::vector<std::vector<Qubit>> overlap_rev;
    int n_blocks = 0;
    std::int64_t total_slots = 0;   // sum over gates of duration * operand count
    Tick total_duration = 0;        // sum of durations; serial-schedule horizon
    bool check_blocks = false;
    bool check_msr = false;
    bool check_park = false;
};

Ctx build_ctx(const Circuit& c, const ConstraintSet& cs) {
    {
        const auto issues = validate_circuit(c);
        if (!issues.empty()) {
            throw std::invalid_argument("scheduler: invalid circuit: " + issues.front().message);
        }
    }
    if ((cs.block_same_protocol || cs.one_measurement_per_block) && cs.arch == nullptr) {
        throw std::invalid_argument("scheduler: block-scoped constraints need an arch model");
    }
    if (cs.park_crosstalk && cs.arch == nullptr) {
        throw std::invalid_argument("scheduler: park constraint needs an arch model");
    }

    Ctx ctx{c, cs, {}, {}, {}, {}, {}, {}, {}, 0, 0, 0, false, false, false};
    const std::size_t n = c.gates.size();
    ctx.succs.assign(n, {});
    ctx.preds.assign(n, {});
    for (const auto& [from, to] : c.deps) {
        ctx.succs[static_cast<std::size_t>(from)].push_back(to);
        ctx.preds[static_cast<std::size_t>(to)].push_back(from);
    }

    // Reverse-topological longest path. Kahn order over successors.
    std::vector<int> outdeg(n, 0);
    for (std::size_t i = 0; i < n; ++i) outdeg[i] = static_cast<int>(ctx.succs[i].size());
    std::vector<GateId> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (outdeg[i] == 0) stack.push_back(static_cast<GateId>(i));
    }
    ctx.tail.assign(n, 0);
    while (!stack.empty()) {
        const GateId g = stack.back();
        stack.pop_back();
        Tick best = 0;
        for (GateId s : ctx.succs[static_cast<std::size_t>(g)]) best = std::max(best, ctx.tail[static_cast<std::size_t>(s)]);
        ctx.tail[static_cast<std::size_t>(g)] = best + c.gate(g).duration_ticks;
        for (GateId p : ctx.preds[static_cast<std::size_t>(g)]) {
            if (--outdeg[static_cast<std::size_t>(p)] == 0) stack.push_back(p);
        }
    }

    // Per-qubit chains in topological order.
    std::vector<std::size_t> topo_pos(n, 0);
    {
        std::vector<int> indeg(n, 0);
        for (const auto& [from, to] : c.deps) {
            (void)from;
            ++indeg[static_cast<std::size_t>(to)];
        }
        std::vector<GateId> q;
        for (std::size_t i = 0; i < n; ++i) {
            if (indeg[i] == 0) q.push_back(static_cast<GateId>(i));
        }
        std::vector<GateId> order;
        order.reserve(n);
        while (!q.empty()) {
            std::sort(q.begin(), q.end(), std::greater<>());
            const GateId g = q.back();
            q.pop_back();
            order.push_back(g);
            for (GateId s : ctx.succs[static_cast<std::size_t>(g)]) {
                if (--indeg[static_cast<std::size_t>(s)] == 0) q.push_back(s);
            }
        }
        for (std::size_t i = 0; i < order.size(); ++i) topo_pos[static_cast<std::size_t>(order[i])] = i;
    }
    ctx.chain.assign(static_cast<std::size_t>(c.n_qubits), {});
    for (const Gate& g : c.gates) {
        for (Qubit q : g.qubits) ctx.chain[static_cast<std::size_t>(q)].push_back(g.id);
    }
    for (auto& ch : ctx.chain) {
        std::sort(ch.begin(), ch.end(), [&](GateId a, GateId b) {
            return topo_pos[static_cast<std::size_t>(a)] < topo_pos[static_cast<std::size_t>(b)];
        });
    }

    // Arch lookups.
    std::vector<int> block_of(static_cast<std::size_t>(c.n_qubits), kNoBlock);
    if (cs.arch) {
        for (const ControlBlock& b : cs.arch->blocks) {
            ctx.n_blocks = std::max(ctx.n_blocks, b.id + 1);
            for (Qubit q : b.qubit_members) {
                if (q >= 0 && q < c.n_qubits) block_of[static_cast<std::size_t>(q)] = b.id;
            }
        }
    }
    ctx.gate_blocks.assign(n, {kNoBlock, kNoBlock});
    for (const Gate& g : c.gates) {
        auto& gb = ctx.gate_blocks[static_cast<std::size_t>(g.id)];
        int count = 0;
        for (Qubit q : g.qubits) {
            const int b = block_of[static_cast<std::size_t>(q)];
            if (b == kNoBlock) continue;
            if (count > 0 && gb[0] == b) continue;
            gb[static_cast<std::size_t>(count++)] = b;
        }
    }
    ctx.overlap_fwd.assign(static_cast<std::size_t>(c.n_qubits), {});
    ctx.overlap_rev.assign(static_cast<std::size_t>(c.n_qubits), {});
    if (cs.arch) {
        for (const auto& [x, over] : cs.arch->signal_overlap) {
            if (x < 0 || x >= c.n_qubits) continue;
            for (Qubit y : over) {
                if (y < 0 || y >= c.n_qubits) continue;
                ctx.overlap_fwd[static_cast<std::size_t>(x)].push_back(y);
                ctx.overlap_rev[static_cast<std::size_t>(y)].push_back(x);
            }
        }
    }

    for (const Gate& g : c.gates) {
        ctx.total_slots += g.duration_ticks * static_cast<std::int64_t>(g.qubits.size());
        ctx.total_duration += g.duration_ticks;
        if (cs.arch && g.kind == GateKind::CPhase && !cs.arch->allows_cphase(g.qubits[0], g.qubits[1])) {
            throw UnschedulableError("gate " + std::to_string(g.id) + ": CPhase pair (" +
                                     std::to_string(g.qubits[0]) + "," + std::to_string(g.qubits[1]) +
                                     ") is not a wired coupling");
        }
    }
    ctx.check_blocks = cs.block_same_protocol && cs.arch;
    ctx.check_msr = cs.one_measurement_per_block && cs.arch;
    ctx.check_park = cs.park_crosstalk && cs.arch && !cs.arch->signal_overlap.empty();
    return ctx;
}

/// Mutable search/scheduling state with O(1)-ish apply/undo.
struct State {
    const Ctx& ctx;
    std::vector<Tick> start;
    std::vector<int> preds_unscheduled;
    std::vector<Tick> ready_lb; // max end over already scheduled predecessors
    std::vector<Tick> first_start, last_end;
    std::vector<std::int64_t> occupied;
    std::vector<std::uint8_t> qubit_active;
    std::vector<GateKind> qubit_kind;
    std::vector<int> block_active, block_msr;
    std::vector<GateKind> block_kind;
    std::vector<std::pair<GateId, Tick>> running;
    std::int64_t committed_gaps = 0;
    Tick max_end = 0;
    Tick path_max = 0;
    int unscheduled = 0;

    explicit State(const Ctx& context) : ctx(context) {
        const std::size_t n = ctx.c.gates.size();
        const std::size_t nq = static_cast<std::size_t>(ctx.c.n_qubits);
        start.assign(n, -1);
        preds_unscheduled.assign(n, 0);
        ready_lb.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) preds_unscheduled[i] = static_cast<int>(ctx.preds[i].size());
        first_start.assign(nq, -1);
        last_end.assign(nq, 0);
        occupied.assign(nq, 0);
        qubit_active.assign(nq, 0);
        qubit_kind.assign(nq, GateKind::Idle);
        block_active.assign(static_cast<std::size_t>(ctx.n_blocks), 0);
        block_msr.assign(static_cast<std::size_t>(ctx.n_blocks), 0);
        block_kind.assign(static_cast<std::size_t>(ctx.n_blocks), GateKind::Idle);
        unscheduled = static_cast<int>(n);
        for (std::size_t i = 0; i < n; ++i) {
            path_max = std::max(path_max, ctx.tail[i]);
        }
    }

    bool startable(GateId g, Tick tau) const {
        const auto i = static_cast<std::size_t>(g);
        if (start[i] >= 0 || preds_unscheduled[i] != 0 || ready_lb[i] > tau) return false;
        for (Qubit q : ctx.c.gate(g).qubits) {
            if (last_end[static_cast<std::size_t>(q)] > tau) return false;
        }
        return true;
    }

    bool compatible(GateId g, Tick tau) const {
        const Gate& gate = ctx.c.gate(g);
        for (Qubit q : gate.qubits) {
            if (last_end[static_cast<std::size_t>(q)] > tau) return false;
        }
        if (ctx.check_blocks || ctx.check_msr) {
            for (int b : ctx.gate_blocks[static_cast<std::size_t>(g)]) {
                if (b == kNoBlock) continue;
                const auto bi = static_cast<std::size_t>(b);
                if (ctx.check_blocks && block_active[bi] > 0 && block_kind[bi] != gate.kind) return false;
                if (ctx.check_msr && gate.kind == GateKind::Msr && block_msr[bi] > 0) return false;
            }
        }
        if (ctx.check_park) {
            for (Qubit x : gate.qubits) {
                for (Qubit y : ctx.overlap_fwd[static_cast<std::size_t>(x)]) {
                    const auto yi = static_cast<std::size_t>(y);
                    if (qubit_active[yi] && qubit_kind[yi] != gate.kind) return false;
                }
                for (Qubit y : ctx.overlap_rev[static_cast<std::size_t>(x)]) {
                    const auto yi = static_cast<std::size_t>(y);
                    if (qubit_active[yi] && qubit_kind[yi] != gate.kind) return false;
                }
            }
        }
        return true;
    }

    struct Undo {
        GateId g = -1;
        std::int64_t gaps_added = 0;
        Tick old_max_end = 0;
        Tick old_path_max = 0;
        std::array<Tick, 2> old_last_end{};
        std::array<std::uint8_t, 2> was_first{};
        std::vector<std::pair<GateId, Tick>> old_ready;
    };

    Undo apply(GateId g, Tick tau) {
        const Gate& gate = ctx.c.gate(g);
        const Tick end = tau + gate.duration_ticks;
        Undo u;
        u.g = g;
        u.old_max_end = max_end;
        u.old_path_max = path_max;
        start[static_cast<std::size_t>(g)] = tau;
        --unscheduled;
        for (GateId s : ctx.succs[static_cast<std::size_t>(g)]) {
            const auto si = static_cast<std::size_t>(s);
            u.old_ready.emplace_back(s, ready_lb[si]);
            --preds_unscheduled[si];
            ready_lb[si] = std::max(ready_lb[si], end);
            path_max = std::max(path_max, ready_lb[si] + ctx.tail[si]);
        }
        for (std::size_t k = 0; k < gate.qubits.size(); ++k) {
            const auto qi = static_cast<std::size_t>(gate.qubits[k]);
            u.old_last_end[k] = last_end[qi];
            u.was_first[k] = first_start[qi] < 0;
            if (first_start[qi] < 0) {
                first_start[qi] = tau;
            } else {
                const std::int64_t gap = tau - last_end[qi];
                committed_gaps += gap;
                u.gaps_added += gap;
            }
            last_end[qi] = end;
            occupied[qi] += gate.duration_ticks;
            qubit_active[qi] = 1;
            qubit_kind[qi] = gate.kind;
        }
        for (int b : ctx.gate_blocks[static_cast<std::size_t>(g)]) {
            if (b == kNoBlock) continue;
            const auto bi = static_cast<std::size_t>(b);
            ++block_active[bi];
            block_kind[bi] = gate.kind;
            if (gate.kind == GateKind::Msr) ++block_msr[bi];
        }
        running.emplace_back(g, end);
        max_end = std::max(max_end, end);
        return u;
    }

    void undo(const Undo& u) {
        const Gate& gate = ctx.c.gate(u.g);
        running.pop_back();
        max_end = u.old_max_end;
        path_max = u.old_path_max;
        for (int b : ctx.gate_blocks[static_cast<std::size_t>(u.g)]) {
            if (b == kNoBlock) continue;
            const auto bi = static_cast<std::size_t>(b);
            --block_active[bi];
            if (gate.kind == GateKind::Msr) --block_msr[bi];
        }
        for (std::size_t k = 0; k < gate.qubits.size(); ++k) {
            const auto qi = static_cast<std::size_t>(gate.qubits[k]);
            qubit_active[qi] = 0;
            occupied[qi] -= gate.duration_ticks;
            last_end[qi] = u.old_last_end[k];
            if (u.was_first[k]) first_start[qi] = -1;
        }
        committed_gaps -= u.gaps_added;
        for (const auto& [s, old] : u.old_ready) {
            const auto si = static_cast<std::size_t>(s);
            ready_lb[si] = old;
            ++preds_unscheduled[si];
        }
        start[static_cast<std::size_t>(u.g)] = -1;
        ++unscheduled;
    }

    /// Removes gates finishing exactly at new_tau; returns them for undo.
    std::vector<std::pair<GateId, Tick>> advance_to(Tick new_tau) {
        std::vector<std::pair<GateId, Tick>> removed;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < running.size(); ++i) {
            if (running[i].second > new_tau) {
                running[keep++] = running[i];
            } else {
                removed.push_back(running[i]);
            }
        }
        running.resize(keep);
        for (const auto& [g, end] : removed) {
            (void)end;
            const Gate& gate = ctx.c.gate(g);
            for (Qubit q : gate.qubits) qubit_active[static_cast<std::size_t>(q)] = 0;
            for (int b : ctx.gate_blocks[static_cast<std::size_t>(g)]) {
                if (b == kNoBlock) continue;
                const auto bi = static_cast<std::size_t>(b);
                --block_active[bi];
                if (gate.kind == GateKind::Msr) --block_msr[bi];
            }
        }
        return removed;
    }

    void undo_advance(const std::vector<std::pair<GateId, Tick>>& removed) {
        for (const auto& [g, end] : removed) {
            const Gate& gate = ctx.c.gate(g);
            running.emplace_back(g, end);
            for (Qubit q : gate.qubits) {
                const auto qi = static_cast<std::size_t>(q);
                qubit_active[qi] = 1;
                qubit_kind[qi] = gate.kind;
            }
            for (int b : ctx.gate_blocks[static_cast<std::size_t>(g)]) {
                if (b == kNoBlock) continue;
                const auto bi = static_cast<std::size_t>(b);
                ++block_active[bi];
                block_kind[bi] = gate.kind;
                if (gate.kind == GateKind::Msr) ++block_msr[bi];
            }
        }
    }

    std::vector<GateId> startable_sorted(Tick tau) const {
        std::vector<GateId> out;
        const std::size_t n = ctx.c.gates.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (startable(static_cast<GateId>(i), tau)) out.push_back(static_cast<GateId>(i));
        }
        std::sort(out.begin(), out.end(), [&](GateId a, GateId b) {
            const Tick ta = ctx.tail[static_cast<std::size_t>(a)];
            const Tick tb = ctx.tail[static_cast<std::size_t>(b)];
            if (ta != tb) return ta > tb;
            return a < b;
        });
        return out;
    }

    std::int64_t lower_bound(IdleWindowPolicy policy, Tick next_tau) const {
        const auto nq = static_cast<std::size_t>(ctx.c.n_qubits);
        if (policy == IdleWindowPolicy::FirstToLastOp) {
            std::int64_t lb = committed_gaps;
            for (std::size_t q = 0; q < nq; ++q) {
                if (first_start[q] < 0) continue;
                const auto& ch = ctx.chain[q];
                // Find the first unscheduled gate in this qubit's chain.
                // Scheduled prefix length equals occupied gates count; track via scan.
                for (GateId g : ch) {
                    if (start[static_cast<std::size_t>(g)] >= 0) continue;
                    const Tick est = std::max(next_tau, ready_lb[static_cast<std::size_t>(g)]);
                    if (est > last_end[q]) lb += est - last_end[q];
                    break;
                }
            }
            return lb;
        }
        Tick ms = std::max(max_end, path_max);
        for (std::size_t q = 0; q < nq; ++q) {
            for (GateId g : ctx.chain[q]) {
                if (start[static_cast<std::size_t>(g)] >= 0) continue;
                const auto gi = static_cast<std::size_t>(g);
                const Tick est = std::max(next_tau, ready_lb[gi]);
                ms = std::max(ms, est + ctx.tail[gi]);
                break;
            }
        }
        return static_cast<std::int64_t>(ctx.c.n_qubits) * ms - ctx.total_slots;
    }

    std::int64_t final_m(IdleWindowPolicy policy) const {
        if (policy == IdleWindowPolicy::FirstToLastOp) return committed_gaps;
        return static_cast<std::int64_t>(ctx.c.n_qubits) * max_end - ctx.total_slots;
    }
};

Schedule finish_schedule(const Ctx& ctx, TickAssignment assignment, IdleWindowPolicy policy, bool optimal,
                         std::uint64_t nodes) {
    const IdleAccount acc = account_idles(ctx.c, assignment, policy);
    const FeasibilityResult feas = is_feasible(ctx.c, assignment, ctx.cs);
    if (!feas.feasible) {
        throw std::logic_error("scheduler produced an infeasible assignment: " + feas.violations.front().message);
    }
    Schedule s;
    s.assignment = std::move(assignment);
    s.makespan = acc.makespan;
    s.idle_ticks_total = acc.total;
    s.idle_per_qubit = acc.per_qubit;
    s.policy = policy;
    s.optimal = optimal;
    s.nodes_explored = nodes;
    return s;
}

TickAssignment greedy_assignment(const Ctx& ctx) {
    State st(ctx);
    Tick tau = 0;
    const Tick hard_cap = 4 * std::max<Tick>(ctx.total_duration, 1) + 8;
    while (st.unscheduled > 0) {
        if (tau > hard_cap) throw std::logic_error("greedy scheduler failed to make progress");
        for (GateId g : st.startable_sorted(tau)) {
            if (st.compatible(g, tau)) st.apply(g, tau);
        }
        ++tau;
        st.advance_to(tau);
    }
    return TickAssignment{st.start};
}

Circuit reversed(const Circuit& c) {
    Circuit rc = c;
    for (auto& [from, to] : rc.deps) std::swap(from, to);
    std::sort(rc.deps.begin(), rc.deps.end());
    return rc;
}

/// Just-in-time list scheduling: a gate starts either when an already-open
/// qubit window is bleeding idle ticks waiting for it, or at its latest
/// slack-free start for the horizon hint. Keeps first-gate starts (ancilla
/// preparations in particular) late, which the first-to-last window rewards.
TickAssignment jit_assignment(const Ctx& ctx, Tick horizon_hint) {
    State st(ctx);
    Tick tau = 0;
    const Tick hard_cap = 4 * std::max<Tick>(ctx.total_duration, 1) + 8;
    while (st.unscheduled > 0) {
        if (tau > hard_cap) throw std::logic_error("jit scheduler failed to make progress");
        for (GateId g : st.startable_sorted(tau)) {
            const auto gi = static_cast<std::size_t>(g);
            const Tick latest = horizon_hint - ctx.tail[gi];
            bool window_waiting = false;
            for (Qubit q : ctx.c.gate(g).qubits) {
                const auto qi = static_cast<std::size_t>(q);
                if (st.first_start[qi] >= 0 && st.last_end[qi] <= tau) window_waiting = true;
            }
            if ((window_waiting || latest <= tau) && st.compatible(g, tau)) st.apply(g, tau);
        }
        ++tau;
        st.advance_to(tau);
    }
    return TickAssignment{st.start};
}

/// Greedy on the time-reversed program, mirrored back. Feasible by
/// construction (the per-tick predicates are direction-blind) and often a
/// much better incumbent under first-to-last accounting because trailing
/// chains pack against their last use.
std::optional<TickAssignment> mirror_greedy_assignment(const Ctx& ctx) {
    const Circuit rc = reversed(ctx.c);
    const Ctx rctx = build_ctx(rc, ctx.cs);
    const TickAssignment rev = greedy_assignment(rctx);
    Tick horizon = 0;
    for (const Gate& g : rc.gates) horizon = std::max(horizon, rev.at(g.id) + g.duration_ticks);
    TickAssignment mirrored = TickAssignment::unassigned(ctx.c);
    for (const Gate& g : ctx.c.gates) {
        mirrored.start[static_cast<std::size_t>(g.id)] = horizon - (rev.at(g.id) + g.duration_ticks);
    }
    if (!is_feasible(ctx.c, mirrored, ctx.cs).feasible) return std::nullopt;
    return mirrored;
}

struct BnB {
    const Ctx& ctx;
    IdleWindowPolicy policy;
    std::uint64_t budget;
    State st;
    std::uint64_t nodes = 0;
    bool stopped = false;
    std::int64_t best_m = std::numeric_limits<std::int64_t>::max();
    std::vector<Tick> best_assignment;
    Tick tau_cap;

    BnB(const Ctx& context, IdleWindowPolicy p, std::uint64_t max_nodes)
        : ctx(context), policy(p), budget(max_nodes), st(context) {
        tau_cap = ctx.total_duration; // optimal-M schedules never need a global gap
    }

    bool tick_node(Tick tau) {
        if (stopped) return false;
        if (++nodes > budget) {
            stopped = true;
            return false;
        }
        if (st.unscheduled == 0) {
            const std::int64_t m = st.final_m(policy);
            if (m < best_m) {
                best_m = m;
                best_assignment = st.start;
            }
            return true;
        }
        if (tau >= tau_cap) return true; // dominated: some sibling starts earlier
        const std::vector<GateId> startable = st.startable_sorted(tau);
        subset_node(tau, startable, 0, false);
        return !stopped;
    }

    void subset_node(Tick tau, const std::vector<GateId>& startable, std::size_t idx, bool started_any) {
        if (stopped) return;
        if (++nodes > budget) {
            stopped = true;
            return;
        }
        if (idx == startable.size()) {
            if (!started_any && st.running.empty() && st.unscheduled > 0) return; // global stall
            if (st.lower_bound(policy, tau + 1) >= best_m) return;
            const auto removed = st.advance_to(tau + 1);
            tick_node(tau + 1);
            st.undo_advance(removed);
            return;
        }
        const GateId g = startable[idx];
        if (st.compatible(g, tau)) {
            const State::Undo u = st.apply(g, tau);
            if (st.lower_bound(policy, tau) < best_m) {
                subset_node(tau, startable, idx + 1, true);
            }
            st.undo(u);
        }
        if (stopped) return;
        subset_node(tau, startable, idx + 1, started_any);
    }
};

} // namespace

Schedule schedule_greedy(const Circuit& c, const ConstraintSet& cs, IdleWindowPolicy policy) {
    const Ctx ctx = build_ctx(c, cs);
    return finish_schedule(ctx, greedy_assignment(ctx), policy, false, 0);
}

Schedule schedule_exact(const Circuit& c, const ConstraintSet& cs, IdleWindowPolicy policy,
                        const SearchLimits& limits) {
    const Ctx ctx = build_ctx(c, cs);

    BnB search(ctx, policy, limits.max_nodes);
    const auto offer = [&](const TickAssignment& candidate) {
        const std::int64_t m = account_idles(c, candidate, policy).total;
        if (search.best_assignment.empty() || m < search.best_m) {
            search.best_m = m;
            search.best_assignment = candidate.start;
        }
    };
    const TickAssignment greedy = greedy_assignment(ctx);
    offer(greedy);
    if (const auto mirrored = mirror_greedy_assignment(ctx)) offer(*mirrored);
    {
        Tick greedy_makespan = 0;
        for (const Gate& g : c.gates) {
            greedy_makespan = std::max(greedy_makespan, greedy.at(g.id) + g.duration_ticks);
        }
        offer(jit_assignment(ctx, greedy_makespan));
        // A slightly relaxed horizon often trades makespan for fewer idles.
        offer(jit_assignment(ctx, greedy_makespan + 2));
    }
    search.tick_node(0);
    const bool optimal = !search.stopped;
    return finish_schedule(ctx, TickAssignment{search.best_assignment}, policy, optimal, search.nodes);
}

Schedule oracle_schedule(const Circuit& c, const ConstraintSet& cs, IdleWindowPolicy policy, Tick horizon) {
    if (c.gates.size() > 10) {
        throw std::invalid_argument("oracle_schedule: instance too large (> 10 gates)");
    }
    const Ctx ctx = build_ctx(c, cs); // reuses validation and the neighbor-pair guard

    const std::size_t n = c.gates.size();
    TickAssignment t = TickAssignment::unassigned(c);
    std::vector<Tick> best;
    std::int64_t best_m = std::numeric_limits<std::int64_t>::max();
    std::uint64_t visited = 0;

    // Pairwise consistency of the newest gate against the assigned prefix;
    // exact per-tick semantics are delegated to is_feasible at the leaves.
    const auto prefix_ok = [&](std::size_t k) {
        const Gate& gk = c.gate(static_cast<GateId>(k));
        const Tick sk = t.at(gk.id);
        const Tick ek = sk + gk.duration_ticks;
        for (const auto& [from, to] : c.deps) {
            if (static_cast<std::size_t>(std::max(from, to)) != k) continue;
            if (static_cast<std::size_t>(std::min(from, to)) > k) continue;
            if (t.at(from) + c.gate(from).duration_ticks > t.at(to)) return false;
        }
        for (std::size_t j = 0; j < k; ++j) {
            const Gate& gj = c.gate(static_cast<GateId>(j));
            const Tick sj = t.at(gj.id);
            const Tick ej = sj + gj.duration_ticks;
            if (sk >= ej || sj >= ek) continue; // no time overlap
            bool share_qubit = false;
            for (Qubit a : gk.qubits) {
                for (Qubit b : gj.qubits) share_qubit |= (a == b);
            }
            if (share_qubit) return false;
            if (gk.kind != gj.kind) {
                if (ctx.check_blocks) {
                    for (int a : ctx.gate_blocks[k]) {
                        for (int b : ctx.gate_blocks[j]) {
                            if (a != kNoBlock && a == b) return false;
                        }
                    }
                }
                if (ctx.check_park) {
                    const auto routes_over = [&](const Gate& g, const Gate& h) {
                        for (Qubit x : g.qubits) {
                            for (Qubit y : ctx.overlap_fwd[static_cast<std::size_t>(x)]) {
                                for (Qubit hq : h.qubits) {
                                    if (hq == y) return true;
                                }
                            }
                        }
                        return false;
                    };
                    if (routes_over(gk, gj) || routes_over(gj, gk)) return false;
                }
            } else if (gk.kind == GateKind::Msr && ctx.check_msr) {
                for (int a : ctx.gate_blocks[k]) {
                    for (int b : ctx.gate_blocks[j]) {
                        if (a != kNoBlock && a == b) return false;
                    }
                }
            }
        }
        return true;
    };

    const auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (k == n) {
            ++visited;
            if (!is_feasible(c, t, cs).feasible) return;
            const std::int64_t m = account_idles(c, t, policy).total;
            if (m < best_m) {
                best_m = m;
                best = t.start;
            }
            return;
        }
        const Tick dur = c.gate(static_cast<GateId>(k)).duration_ticks;
        for (Tick s = 0; s + dur <= horizon; ++s) {
            t.start[k] = s;
            ++visited;
            if (prefix_ok(k)) self(self, k + 1);
        }
        t.start[k] = -1;
    };
    recurse(recurse, 0);

    if (best.empty() && n > 0) {
        throw UnschedulableError("oracle_schedule: no feasible assignment within horizon " + std::to_string(horizon));
    }
    if (n == 0) best = {};
    return finish_schedule(ctx, TickAssignment{best}, policy, true, visited);
}

std::vector<std::vector<std::string>> schedule_grid(const Circuit& c, const TickAssignment& t) {
    Tick makespan = 0;
    for (const Gate& g : c.gates) makespan = std::max(makespan, t.at(g.id) + g.duration_ticks);
    std::vector<std::vector<std::string>> grid(static_cast<std::size_t>(c.n_qubits),
                                               std::vector<std::string>(static_cast<std::size_t>(makespan), "."));
    for (const Gate& g : c.gates) {
        for (Qubit q : g.qubits) {
            for (Tick tau = t.at(g.id); tau < t.at(g.id) + g.duration_ticks; ++tau) {
                grid[static_cast<std::size_t>(q)][static_cast<std::size_t>(tau)] = std::string(short_label(g.kind));
            }
        }
    }
    return grid;
}

std::string schedule_grid_csv(const Circuit& c, const TickAssignment& t) {
    const auto grid = schedule_grid(c, t);
    std::string out = "qubit";
    const std::size_t cols = grid.empty() ? 0 : grid.front().size();
    for (std::size_t i = 0; i < cols; ++i) out += ",t" + std::to_string(i);
    out += '\n';
    for (std::size_t q = 0; q < grid.size(); ++q) {
        out += std::to_string(q);
        for (const std::string& cell : grid[q]) {
            out += ',';
            out += cell;
        }
        out += '\n';
    }
    return out;
}

nlohmann::json schedule_to_json(const Schedule& s, const ConstraintSet& cs) {
    nlohmann::json assignment = nlohmann::json::object();
    for (std::size_t g = 0; g < s.assignment.start.size(); ++g) {
        assignment[std::to_string(g)] = s.assignment.start[g];
    }
    return {{"assignment", std::move(assignment)},
            {"makespan", s.makespan},
            {"M", s.idle_ticks_total},
            {"idle_per_qubit", s.idle_per_qubit},
            {"policy", std::string(to_string(s.policy))},
            {"constraints",
             {{"block_same_protocol", cs.block_same_protocol},
              {"one_measurement_per_block", cs.one_measurement_per_block},
              {"park_crosstalk", cs.park_crosstalk}}},
            {"optimal", s.optimal},
            {"nodes_explored", s.nodes_explored}};
}

Schedule schedule_from_json(const nlohmann::json& j) {
    Schedule s;
    const auto& assignment = j.at("assignment");
    s.assignment.start.assign(assignment.size(), -1);
    for (const auto& [key, value] : assignment.items()) {
        const auto idx = static_cast<std::size_t>(std::stoul(key));
        if (idx >= s.assignment.start.size()) s.assignment.start.resize(idx + 1, -1);
        s.assignment.start[idx] = value.get<Tick>();
    }
    s.makespan = j.at("makespan").get<Tick>();
    s.idle_ticks_total = j.at("M").get<std::int64_t>();
    s.idle_per_qubit = j.at("idle_per_qubit").get<std::vector<std::int64_t>>();
    const auto policy = idle_policy_from_string(j.at("policy").get<std::string>());
    if (!policy) throw std::invalid_argument("schedule_from_json: unknown policy");
    s.policy = *policy;
    s.optimal = j.at("optimal").get<bool>();
    s.nodes_explored = j.value("nodes_explored", std::uint64_t{0});
    return s;
}

} // namespace qmicro
