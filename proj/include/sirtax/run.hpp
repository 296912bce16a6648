#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sirtax/diagnostics.hpp"
#include "sirtax/stepper.hpp"

namespace sirtax {

struct RunResult {
    SimState final_state;
    DiagnosticsRecord diagnostics;    ///< one row per sample time
    std::vector<SimState> snapshots;  ///< states at the sample times
    long clamp_events = 0;            ///< total clamped nodes over the run
    double min_S_over_run = 0.0;      ///< running min of S over every step
};

inline void validate_sample_times(const std::vector<double>& sample_times, double t0, double t_end) {
    for (std::size_t k = 0; k < sample_times.size(); ++k) {
        if (sample_times[k] < t0 || sample_times[k] > t_end)
            throw std::invalid_argument("sample_times must lie within [start, t_end]");
        if (k > 0 && !(sample_times[k] > sample_times[k - 1]))
            throw std::invalid_argument("sample_times must be strictly increasing");
    }
}

/// Integrates from state0 to t_end with stability-controlled steps, landing
/// exactly on each sample time by truncating dt. Deterministic: identical
/// inputs give bit-identical trajectories.
inline RunResult run(const SimState& state0, const ModelParams& p, const Grid& grid,
                     const StepControl& control, double t_end,
                     const std::vector<double>& sample_times, int hats_per_axis = 5) {
    validate_params(p);
    validate_control(control);
    if (t_end < state0.t)
        throw std::invalid_argument("run: t_end must not precede the initial time");
    validate_sample_times(sample_times, state0.t, t_end);

    const TestFunctionFamily family = make_hat_family(grid, hats_per_axis);

    RunResult out;
    out.min_S_over_run = field_min(state0.S);

    SimState state = state0;
    std::size_t si = 0;

    auto record = [&](const SimState& prev, const SimState& cur, double dt) {
        out.diagnostics.rows.push_back(record_sample(prev, cur, dt, p, family, out.clamp_events));
        out.snapshots.push_back(cur);
    };

    while (si < sample_times.size() && sample_times[si] <= state.t) {
        record(state, state, 0.0);
        ++si;
    }

    while (state.t < t_end) {
        const double target = si < sample_times.size() ? sample_times[si] : t_end;
        double dt = stable_dt(state, p, grid, control);
        if (!(state.t + dt > state.t))
            throw NumericalFailure("time step underflow: dt=" + std::to_string(dt) +
                                       " no longer advances t=" + std::to_string(state.t),
                                   state.t, 0);
        bool lands = false;
        if (state.t + dt >= target) {
            dt = target - state.t;
            lands = true;
        }
        StepResult res = step(state, p, grid, dt, control);
        out.clamp_events += res.clamp_events;
        SimState prev = std::move(state);
        state = std::move(res.state);
        if (lands) state.t = target;
        out.min_S_over_run = std::min(out.min_S_over_run, field_min(state.S));
        if (lands && si < sample_times.size() && target == sample_times[si]) {
            record(prev, state, dt);
            ++si;
        }
    }

    out.final_state = std::move(state);
    return out;
}

struct EpsContinuationEntry {
    double eps = 0.0;
    RunResult result;
    std::optional<double> distance_to_previous; ///< L2(0,T;L2) trajectory distance
};

/// Trapezoidal-in-time, volume-weighted-in-space distance between two
/// trajectories sampled on the same time lattice:
///   d^2 = int_0^T (|S_a-S_b|_L2^2 + |I_a-I_b|_L2^2) dt.
inline double trajectory_distance(const std::vector<SimState>& a, const std::vector<SimState>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("trajectory distance: need two equally sampled trajectories");
    std::vector<double> g(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        Field dS = a[k].S, dI = a[k].I;
        for (std::size_t j = 0; j < dS.size(); ++j) {
            dS[j] -= b[k].S[j];
            dI[j] -= b[k].I[j];
        }
        const double ns = field_l2_norm(dS), ni = field_l2_norm(dI);
        g[k] = ns * ns + ni * ni;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < a.size(); ++k)
        acc += 0.5 * (a[k + 1].t - a[k].t) * (g[k] + g[k + 1]);
    return std::sqrt(acc);
}

/// Runs the simulation once per regularization value and reports the distance
/// between consecutive trajectories, the Cauchy evidence for the vanishing-
/// regularization limit. eps_list must be strictly decreasing (0 allowed last).
inline std::vector<EpsContinuationEntry> epsilon_continuation(
    const SimState& state0, const ModelParams& params, const Grid& grid,
    const StepControl& control, double t_end, const std::vector<double>& eps_list,
    const std::vector<double>& sample_times, int hats_per_axis = 5) {
    if (eps_list.empty())
        throw std::invalid_argument("eps continuation: eps_list must not be empty");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (eps_list[k] < 0.0 || eps_list[k] > 1.0)
            throw std::invalid_argument("eps continuation: eps values must lie in [0,1]");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
            throw std::invalid_argument("eps continuation: eps_list must be strictly decreasing");
    }
    if (eps_list.size() >= 2 && sample_times.size() < 2)
        throw std::invalid_argument("eps continuation: need at least two sample times for distances");

    std::vector<EpsContinuationEntry> entries;
    for (double eps : eps_list) {
        ModelParams p = params;
        p.eps_reg = eps;
        EpsContinuationEntry entry;
        entry.eps = eps;
        try {
            entry.result = run(state0, p, grid, control, t_end, sample_times, hats_per_axis);
        } catch (const NumericalFailure& e) {
            throw NumericalFailure("eps=" + std::to_string(eps) + ": " + e.what(), e.time, e.node);
        }
        if (!entries.empty())
            entry.distance_to_previous =
                trajectory_distance(entries.back().result.snapshots, entry.result.snapshots);
        entries.push_back(std::move(entry));
    }
    return entries;
}

} // namespace sirtax
