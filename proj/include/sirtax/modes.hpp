#pragma once

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "sirtax/config.hpp"
#include "sirtax/io.hpp"
#include "sirtax/run.hpp"

namespace sirtax {

inline SimState initial_state(const RunConfig& c, const Grid& grid) {
    auto [S0, I0] = synthesize_initials(grid, c.ic);
    return make_state(0.0, std::move(S0), std::move(I0), Field(grid, 0.0));
}

namespace detail {

inline std::string snap_name(const char* field, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%03zu", field, index);
    return buf;
}

/// The emitted artifact names its own directory as '.', so reruns into
/// different locations stay byte-identical.
inline std::string effective_config_text(const RunConfig& c) {
    RunConfig copy = c;
    copy.out_dir = ".";
    return emit_config(copy);
}

inline void write_run_artifacts(ArtifactWriter& w, const std::string& prefix, const RunResult& r) {
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
        w.write_field(prefix + snap_name("S", k), r.snapshots[k].S);
        w.write_field(prefix + snap_name("I", k), r.snapshots[k].I);
    }
    w.write(prefix + "diagnostics.csv", diagnostics_csv(r.diagnostics));
}

} // namespace detail

inline RunResult run_from_config(const RunConfig& c, const Grid& grid, const SimState& state0,
                                 const ModelParams& params) {
    return run(state0, params, grid, c.control, c.t_end, c.sample_times, c.hats_per_axis);
}

/// mode single: one simulation, snapshots and diagnostics under out_dir.
inline RunResult run_mode_single(const RunConfig& c) {
    const Grid grid = grid_from_config(c);
    ArtifactWriter w(c.out_dir);
    w.write("effective_config.txt", detail::effective_config_text(c));
    RunResult r = run_from_config(c, grid, initial_state(c, grid), c.params);
    detail::write_run_artifacts(w, "", r);
    w.finalize();
    return r;
}

struct Figure1Result {
    RunResult taxis;    ///< run with the configured K
    RunResult no_taxis; ///< same setup with K = 0
};

/// mode figure1-pair: two runs differing only in K (configured value vs 0),
/// with per-branch artifacts and a side-by-side comparison table.
inline Figure1Result run_mode_figure1(const RunConfig& c) {
    const Grid grid = grid_from_config(c);
    const SimState state0 = initial_state(c, grid);

    ArtifactWriter w(c.out_dir);
    w.write("effective_config.txt", detail::effective_config_text(c));

    Figure1Result out;
    out.taxis = run_from_config(c, grid, state0, c.params);
    ModelParams no_taxis_params = c.params;
    no_taxis_params.K = 0.0;
    out.no_taxis = run_from_config(c, grid, state0, no_taxis_params);

    detail::write_run_artifacts(w, "taxis/", out.taxis);
    detail::write_run_artifacts(w, "notaxis/", out.no_taxis);

    std::ostringstream cmp;
    cmp << "t,mass_I_taxis,mass_I_notaxis,mass_S_taxis,mass_S_notaxis,min_S_taxis,min_S_notaxis\n";
    for (std::size_t k = 0; k < out.taxis.diagnostics.rows.size(); ++k) {
        const DiagnosticsRow& a = out.taxis.diagnostics.rows[k];
        const DiagnosticsRow& b = out.no_taxis.diagnostics.rows[k];
        cmp << detail::g17(a.t) << ',' << detail::g17(a.mass_I) << ',' << detail::g17(b.mass_I)
            << ',' << detail::g17(a.mass_S) << ',' << detail::g17(b.mass_S) << ','
            << detail::g17(a.min_S) << ',' << detail::g17(b.min_S) << '\n';
    }
    w.write("comparison.csv", cmp.str());
    w.finalize();
    return out;
}

/// mode eps-continuation: one run per regularization value plus the Cauchy
/// distance table.
inline std::vector<EpsContinuationEntry> run_mode_eps_continuation(const RunConfig& c) {
    const Grid grid = grid_from_config(c);
    ArtifactWriter w(c.out_dir);
    w.write("effective_config.txt", detail::effective_config_text(c));

    auto entries = epsilon_continuation(initial_state(c, grid), c.params, grid, c.control,
                                        c.t_end, c.eps_list, c.sample_times, c.hats_per_axis);

    std::ostringstream dist;
    dist << "eps,distance_to_previous\n";
    for (std::size_t k = 0; k < entries.size(); ++k) {
        char eps_buf[40];
        std::snprintf(eps_buf, sizeof eps_buf, "%g", entries[k].eps);
        dist << eps_buf << ',';
        if (entries[k].distance_to_previous) dist << detail::g17(*entries[k].distance_to_previous);
        dist << '\n';
        detail::write_run_artifacts(w, std::string("eps_") + eps_buf + "/", entries[k].result);
    }
    w.write("distances.csv", dist.str());
    w.finalize();
    return entries;
}

/// mode positivity-1d: 1D run with initial susceptibles lifted to a positive
/// floor, S0 = floor + (1 - floor)(1 - I0); reports the run-wide minimum of S.
inline RunResult run_mode_positivity_1d(const RunConfig& c) {
    if (c.dim != 1) throw ConfigError("config: mode positivity-1d requires grid.dim = 1");
    const Grid grid = grid_from_config(c);

    SimState state0 = initial_state(c, grid);
    for (std::size_t k = 0; k < state0.S.size(); ++k)
        state0.S[k] = c.positivity_s_floor + (1.0 - c.positivity_s_floor) * state0.S[k];

    ArtifactWriter w(c.out_dir);
    w.write("effective_config.txt", detail::effective_config_text(c));
    RunResult r = run_from_config(c, grid, state0, c.params);
    detail::write_run_artifacts(w, "", r);

    std::ostringstream summary;
    summary << "min_S_over_run = " << detail::g17(r.min_S_over_run) << '\n'
            << "strictly_positive = " << (r.min_S_over_run > 0.0 ? "yes" : "no") << '\n';
    w.write("summary.txt", summary.str());
    w.finalize();
    return r;
}

/// mode mms: convergence-order study of the three spatial operators on the
/// configured grid ladder.
inline std::vector<std::pair<std::string, std::vector<MmsRow>>> run_mode_mms(const RunConfig& c) {
    std::vector<Grid> grids;
    for (int n : c.mms_nodes)
        grids.push_back(build_grid(c.dim, c.extent, {n, n}));

    std::vector<std::pair<std::string, std::vector<MmsRow>>> studies;
    studies.emplace_back("laplacian", mms_convergence_study(MmsOperator::laplacian, grids));
    studies.emplace_back("gradient", mms_convergence_study(MmsOperator::gradient, grids));
    studies.emplace_back("upwind_taxis", mms_convergence_study(MmsOperator::upwind_taxis, grids));

    ArtifactWriter w(c.out_dir);
    w.write("effective_config.txt", detail::effective_config_text(c));
    std::ostringstream os;
    os << "operator,h,error,observed_order\n";
    for (const auto& [name, rows] : studies)
        for (const MmsRow& r : rows) {
            os << name << ',' << detail::g17(r.h) << ',' << detail::g17(r.error) << ',';
            if (r.observed_order) os << detail::g17(*r.observed_order);
            os << '\n';
        }
    w.write("mms.csv", os.str());
    w.finalize();
    return studies;
}

/// Dispatch on the configured mode.
inline void run_mode(const RunConfig& c) {
    switch (c.mode) {
        case RunMode::single: run_mode_single(c); return;
        case RunMode::figure1_pair: run_mode_figure1(c); return;
        case RunMode::eps_continuation: run_mode_eps_continuation(c); return;
        case RunMode::positivity_1d: run_mode_positivity_1d(c); return;
        case RunMode::mms: run_mode_mms(c); return;
    }
}

} // namespace sirtax
